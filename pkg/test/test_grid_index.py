#
# Copyright 2026 fingerprint-dedup developers
#
# ### MIT license
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
#
"""Unit and property tests for models.grid_index."""
import pytest
from hypothesis import given, settings, strategies as st

from fingerprint_dedup.exceptions import EmptySignatureError
from fingerprint_dedup.models.grid_index import (
    GridParams, IndexKey, block_of, bounding_box, compute_index)
from fingerprint_dedup.models.signature import Minutia, Signature
from fingerprint_dedup.utils.synthgen import GenSpec, generate

from conftest import EXAMPLE_KEY


minutiae_lists = st.lists(
    st.builds(Minutia,
              st.integers(min_value=0, max_value=500),
              st.integers(min_value=0, max_value=500),
              st.floats(min_value=0.0, max_value=6.28),
              st.integers(min_value=0, max_value=3)),
    min_size=1, max_size=40)


# --- worked example ----------------------------------------------------------

def test_worked_example_key(example_signature):
    key = compute_index(example_signature, GridParams(5))
    assert key.key_text == EXAMPLE_KEY
    assert str(key) == EXAMPLE_KEY
    assert key.nb_minutiae == 23


def test_worked_example_bounding_box(example_signature):
    assert bounding_box(example_signature) == (115, 45, 298, 328)


def test_worked_example_first_minutia_block(example_signature):
    box = bounding_box(example_signature)
    assert block_of(example_signature.minutiae[0], box) == (2, 0)


def test_default_grid_is_five(example_signature):
    assert compute_index(example_signature) == compute_index(example_signature, GridParams(5))


# --- edge cases --------------------------------------------------------------

def test_single_minutia_counts_in_first_block():
    key = compute_index(Signature("one", [Minutia(17, 4, 0.0)]), GridParams(5))
    assert key.counts == (1,) + (0,) * 24


def test_all_minutiae_on_one_spot():
    s = Signature("spot", [Minutia(3, 3, 0.1 * i) for i in range(4)])
    assert compute_index(s, GridParams(3)).counts == (4,) + (0,) * 8


def test_extreme_corner_lands_in_last_block():
    s = Signature("corners", [Minutia(0, 0, 0.0), Minutia(99, 99, 0.0)])
    box = bounding_box(s)
    assert block_of(s.minutiae[1], box, GridParams(5)) == (4, 4)
    key = compute_index(s, GridParams(5))
    assert key.counts[0] == 1
    assert key.counts[24] == 1


def test_scan_order_is_column_major():
    # x-block 1, y-block 0 comes after the whole first column
    s = Signature("col", [Minutia(0, 0, 0.0), Minutia(10, 0, 0.0), Minutia(0, 10, 0.0), Minutia(10, 10, 0.0),
                          Minutia(10, 1, 0.0)])
    key = compute_index(s, GridParams(2))
    assert key.counts == (1, 1, 2, 1)


def test_grid_of_one_counts_everything():
    s = Signature("one-block", [Minutia(i, 2 * i, 0.0) for i in range(7)])
    assert compute_index(s, GridParams(1)).key_text == "7"


def test_empty_signature_raises():
    with pytest.raises(EmptySignatureError):
        compute_index(Signature("empty"))


def test_block_of_outside_box_raises():
    with pytest.raises(ValueError):
        block_of(Minutia(500, 0, 0.0), (0, 0, 10, 10))


@pytest.mark.parametrize("n", [0, -1, 2.5, True])
def test_grid_params_reject_invalid_size(n):
    with pytest.raises(ValueError):
        GridParams(n)


def test_index_key_from_text():
    key = IndexKey.from_text("1-0-2")
    assert key.counts == (1, 0, 2)
    assert key == IndexKey([1, 0, 2])
    assert hash(key) == hash(IndexKey([1, 0, 2]))


@pytest.mark.parametrize("text", ["", "1--2", "a-1", "1-2-"])
def test_index_key_from_malformed_text_raises(text):
    with pytest.raises(ValueError):
        IndexKey.from_text(text)


# --- properties --------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(minutiae=minutiae_lists, n=st.integers(min_value=1, max_value=8))
def test_blocks_are_within_range(minutiae, n):
    s = Signature("h", minutiae)
    box = bounding_box(s)
    for m in s:
        xb, yb = block_of(m, box, GridParams(n))
        assert 0 <= xb < n
        assert 0 <= yb < n


@settings(max_examples=200, deadline=None)
@given(minutiae=minutiae_lists, n=st.integers(min_value=1, max_value=8))
def test_counts_conserve_minutiae(minutiae, n):
    key = compute_index(Signature("h", minutiae), GridParams(n))
    assert len(key.counts) == n * n
    assert sum(key.counts) == len(minutiae)


def test_counts_conserve_minutiae_of_ten_thousand_synthetic_signatures():
    corpus = generate(GenSpec(subjects=10_000, min_minutiae=1, max_minutiae=60, seed=99))
    assert len(corpus.signatures) == 10_000
    for s in corpus.signatures:
        assert sum(compute_index(s).counts) == len(s)


@settings(max_examples=200, deadline=None)
@given(minutiae=minutiae_lists,
       dx=st.integers(min_value=0, max_value=1000),
       dy=st.integers(min_value=0, max_value=1000))
def test_key_is_translation_invariant(minutiae, dx, dy):
    s = Signature("h", minutiae)
    assert compute_index(s.translated(dx, dy)) == compute_index(s)


@settings(max_examples=100, deadline=None)
@given(minutiae=minutiae_lists)
def test_key_ignores_angles_and_type_codes(minutiae):
    s = Signature("h", minutiae)
    t = Signature("h", [Minutia(m.x, m.y, m.theta + 1.0, m.type_code + 1) for m in minutiae])
    assert compute_index(s) == compute_index(t)
