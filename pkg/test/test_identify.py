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
"""Unit tests for utils.identify."""
import pytest

from fingerprint_dedup.exceptions import EmptySignatureError
from fingerprint_dedup.models.cluster_table import ClusterTable
from fingerprint_dedup.models.corpus import SignatureStore
from fingerprint_dedup.models.grid_index import GridParams, compute_index
from fingerprint_dedup.models.matcher import TripletMatcher
from fingerprint_dedup.models.signature import Minutia, Signature
from fingerprint_dedup.utils.identify import identify

from conftest import EXAMPLE_KEY


@pytest.fixture
def fixed_bucket(example_signature, small_corpus):
    """Two records filed under the key of the worked example, one elsewhere."""
    other = small_corpus.signatures[0].with_record_id("other")
    far = small_corpus.signatures[1].with_record_id("far")
    store = SignatureStore.from_signatures([example_signature.with_record_id("fig"), other, far])
    table = ClusterTable.load([("fig", EXAMPLE_KEY), ("other", EXAMPLE_KEY), ("far", "0-1")], grid_n=5)
    yield table, store


def test_only_bucket_members_are_scored(fixed_bucket, example_signature, counting_matcher):
    table, store = fixed_bucket
    query = example_signature.translated(5, 5).with_record_id("query")
    result = identify(query, table, store, matcher=counting_matcher)
    assert result.key_text == EXAMPLE_KEY
    assert result.comparisons == 2
    assert sorted(b for _, b in counting_matcher.compared) == ["fig", "other"]
    assert result.penetration == pytest.approx(2 / 3)


def test_candidates_ranked_by_score(fixed_bucket, example_signature):
    table, store = fixed_bucket
    query = example_signature.translated(5, 5).with_record_id("query")
    result = identify(query, table, store)
    assert [c.record_id for c in result.candidates] == ["fig", "other"]
    assert result.candidates[0].score == pytest.approx(100.0)
    assert [c.record_id for c in result.matches] == ["fig"]
    assert not result.candidates[1].is_match


def test_equal_scores_ranked_by_record_id(example_signature):
    store = SignatureStore.from_signatures([
        example_signature.with_record_id("b"), example_signature.translated(1, 1).with_record_id("a")])
    table = ClusterTable.load([("b", EXAMPLE_KEY), ("a", EXAMPLE_KEY)], grid_n=5)
    result = identify(example_signature, table, store)
    assert [c.record_id for c in result.candidates] == ["a", "b"]
    assert all(c.is_match for c in result.candidates)


def test_absent_key_yields_no_candidates(fixed_bucket, counting_matcher):
    table, store = fixed_bucket
    query = Signature("lonely", [Minutia(0, 0, 0.0), Minutia(90, 90, 1.0)])
    result = identify(query, table, store, matcher=counting_matcher)
    assert result.candidates == []
    assert result.penetration == 0.0
    assert counting_matcher.compared == []


def test_empty_table(example_signature):
    result = identify(example_signature, ClusterTable(grid_n=5), SignatureStore())
    assert result.candidates == []
    assert result.penetration == 0.0


def test_grid_size_mismatch_raises(fixed_bucket, example_signature):
    table, store = fixed_bucket
    with pytest.raises(ValueError):
        identify(example_signature, table, store, grid_params=GridParams(4))


def test_grid_size_taken_from_table(example_signature):
    key = compute_index(example_signature, GridParams(3))
    store = SignatureStore.from_signatures([example_signature])
    table = ClusterTable.load([(example_signature.record_id, key)], grid_n=3)
    result = identify(example_signature, table, store)
    assert result.key_text == key.key_text
    assert result.comparisons == 1


def test_empty_query_raises(fixed_bucket):
    table, store = fixed_bucket
    with pytest.raises(EmptySignatureError):
        identify(Signature("empty"), table, store)


def test_every_corpus_record_finds_itself(small_store, small_table):
    for record_id in list(small_store)[:25]:
        result = identify(small_store[record_id], small_table, small_store)
        assert record_id in [c.record_id for c in result.matches]


def test_bucket_lookup_agrees_with_scoring_every_record(small_corpus, small_store, small_table):
    matcher = TripletMatcher()
    queries = [small_store[dup] for dup, _ in small_corpus.truth_pairs] + small_corpus.signatures[:10]
    for query in queries:
        result = identify(query, small_table, small_store, matcher=matcher)
        everywhere = {r for r in small_store if matcher.is_match(matcher.score(query, small_store[r]))}
        in_bucket = {r for r in everywhere if small_table.key_of(r) == compute_index(query).key_text}
        assert {c.record_id for c in result.matches} == in_bucket
        assert query.record_id in in_bucket
