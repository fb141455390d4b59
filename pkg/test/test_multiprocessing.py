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
"""Unit tests for utils.multiprocessing."""
import logging
import os

import pytest

from fingerprint_dedup.utils.multiprocessing import chunked, effective_jobs, parallel_map, process_initializer


def _square(x):
    return x * x


def _fail(x):
    raise ValueError(f"task {x} failed")


@pytest.mark.parametrize("jobs, expected", [(1, 1), (3, 3), (0, os.cpu_count() or 1), (None, os.cpu_count() or 1)])
def test_effective_jobs(jobs, expected):
    assert effective_jobs(jobs) == expected


def test_negative_jobs_raise():
    with pytest.raises(ValueError):
        effective_jobs(-1)


@pytest.mark.parametrize("nb_items, nb_chunks, sizes", [
    (10, 3, [4, 3, 3]),
    (2, 5, [1, 1]),
    (0, 4, []),
    (7, 1, [7]),
])
def test_chunked_preserves_order(nb_items, nb_chunks, sizes):
    chunks = chunked(range(nb_items), nb_chunks)
    assert [len(c) for c in chunks] == sizes
    assert [x for c in chunks for x in c] == list(range(nb_items))


@pytest.mark.parametrize("jobs", [1, 2])
def test_parallel_map_keeps_task_order(jobs):
    assert parallel_map(_square, range(12), jobs=jobs) == [x * x for x in range(12)]


def test_parallel_map_propagates_worker_errors():
    with pytest.raises(ValueError, match="failed"):
        parallel_map(_fail, [1, 2, 3], jobs=2)


def test_process_initializer_sets_level():
    root_logger = logging.getLogger()
    level = root_logger.level
    try:
        process_initializer(logging.DEBUG)
        assert root_logger.level == logging.DEBUG
    finally:
        root_logger.setLevel(level)
