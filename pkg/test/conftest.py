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
import logging
import os

import pytest

from fingerprint_dedup.models.cluster_table import ClusterTable
from fingerprint_dedup.models.corpus import SignatureStore, read_signature_file
from fingerprint_dedup.models.grid_index import GridParams, compute_index
from fingerprint_dedup.models.matcher import Matcher, TripletMatcher
from fingerprint_dedup.utils.dedup import comparison_count, deduplicate
from fingerprint_dedup.utils.logging import FormattedFileHandler, FormattedStreamHandler
from fingerprint_dedup.utils.synthgen import GenSpec, generate

logger = logging.getLogger(__name__)


_HERE = os.path.dirname(os.path.abspath(__file__))

EXAMPLE_SIGNATURE_FILE = os.path.join(_HERE, 'data', 'example23.sig')
EXAMPLE_KEY = "1-1-1-1-0-1-4-2-2-0-2-1-2-0-0-1-0-0-1-1-1-0-1-0-0"

# small signatures keep the exhaustive reference fast
SMALL_SPEC = GenSpec(subjects=120, min_minutiae=12, max_minutiae=20, dup_fraction=10 / 120, seed=42)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run slow tests, e.g. the full-size acceptance sweep")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


class CountingMatcher(Matcher):
    """Wraps the triplet matcher and records every compared record ID pair."""

    def __init__(self, params=None):
        super().__init__(params)
        self._matcher = TripletMatcher(params)
        self.compared = []

    def prepare(self, signature):
        return signature.record_id, self._matcher.prepare(signature)

    def compare(self, prepared_a, prepared_b):
        self.compared.append((prepared_a[0], prepared_b[0]))
        return self._matcher.compare(prepared_a[1], prepared_b[1])


def checked_deduplicate(table, store, matcher=None, jobs=1):
    """Deduplicate a table and assert that no comparison crossed a bucket boundary.

    ``matcher`` must record compared record ID pairs in ``compared``; a
    CountingMatcher is used by default. Worker processes compare on copies
    of the matcher, so with several jobs only the comparison bound is checked.
    """
    if matcher is None:
        matcher = CountingMatcher()
    report = deduplicate(table, store, matcher=matcher, jobs=jobs)
    if jobs == 1:
        assert len(matcher.compared) == report.comparisons
        for a, b in matcher.compared:
            assert table.key_of(a) == table.key_of(b)
    assert report.comparisons <= comparison_count(table)
    return report

def index_table(store, grid_params=None):
    """Cluster table of a store, built in-process."""
    if grid_params is None:
        grid_params = GridParams()
    return ClusterTable.load(
        ((record_id, compute_index(store[record_id], grid_params)) for record_id in store),
        grid_n=grid_params.n)


@pytest.fixture(scope="function")
def example_signature():
    """The 23-minutiae worked example"""
    yield read_signature_file(EXAMPLE_SIGNATURE_FILE, 'example23')


@pytest.fixture(scope="function")
def counting_matcher():
    yield CountingMatcher()


@pytest.fixture(scope="session")
def small_corpus():
    """Small synthetic corpus with exact planted duplicates"""
    yield generate(SMALL_SPEC)


@pytest.fixture(scope="function")
def small_store(small_corpus):
    yield SignatureStore.from_signatures(small_corpus.signatures)


@pytest.fixture(scope="function")
def small_table(small_store):
    yield index_table(small_store)


@pytest.fixture(scope="function")
def restore_root_logger():
    """Undo handler changes to the root logger made by the command line."""
    root_logger = logging.getLogger()
    level = root_logger.level
    yield root_logger
    for handler in list(root_logger.handlers):
        if isinstance(handler, (FormattedStreamHandler, FormattedFileHandler)):
            root_logger.removeHandler(handler)
            handler.close()
    root_logger.setLevel(level)
