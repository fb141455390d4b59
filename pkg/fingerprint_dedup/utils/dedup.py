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
"""Duplicate detection over a whole corpus.

:func:`deduplicate` sweeps every bucket of a cluster table on its own:
the head of the worklist opens a new group, is compared with every
remaining member, and the members it matches join its group and leave the
worklist. Buckets of a single record are singleton groups without any
comparison. Groups are therefore not transitively closed: a record that
only matches a member which already left the worklist with another head
ends up in a group of its own.

:func:`exhaustive_dedup` compares all pairs of a small corpus and groups
records by connected components of the match graph. It serves as the
reference the sweep is checked against.
"""

import logging
import time

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..exceptions import OracleCapExceededError, UnknownRecordError
from ..models.duplicate_report import DuplicateReport
from ..models.matcher import TripletMatcher
from .multiprocessing import chunked, effective_jobs, parallel_map
from .progressbar import ProgressBar

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 5000


def comparison_count(table):
    """Upper bound of sweep comparisons, c(c - 1)/2 summed over all bucket sizes c."""
    return sum(c * (c - 1) // 2 for c in table.bucket_sizes())


def sweep_bucket(record_ids, store, matcher):
    """Group the records of one bucket, return (groups, comparisons)."""
    worklist = list(record_ids)
    if len(worklist) <= 1:
        return [worklist] if worklist else [], 0

    prepared = {record_id: matcher.prepare(store[record_id]) for record_id in worklist}
    groups = []
    comparisons = 0
    while len(worklist) > 0:
        head = worklist.pop(0)
        group = [head]
        remaining = []
        for other in worklist:
            result = matcher.compare(prepared[head], prepared[other])
            comparisons += 1
            if matcher.is_match(result):
                group.append(other)
            else:
                remaining.append(other)
        groups.append(group)
        worklist = remaining
    return groups, comparisons


def _sweep_buckets(task):
    buckets, store, matcher = task
    return [(key_text, *sweep_bucket(record_ids, store, matcher)) for key_text, record_ids in buckets]


def deduplicate(table, store, match_params=None, matcher=None, jobs=1):
    """Sweep all buckets of a table and report the duplicate groups.

    Buckets of two or more records are distributed over ``jobs`` worker
    processes; results are merged in table order, so the report does not
    depend on the number of jobs.

    Raises:
        UnknownRecordError: if a record of the table is missing from the store
    """
    if matcher is None:
        matcher = TripletMatcher(match_params)

    for key_text, record_ids in table.items():
        for record_id in record_ids:
            if record_id not in store:
                raise UnknownRecordError(record_id)

    start = time.perf_counter()
    shared = [(key_text, list(record_ids)) for key_text, record_ids in table.items() if len(record_ids) > 1]
    logger.info("Sweep %d shared buckets of %d, at most %d comparisons.",
                len(shared), table.nb_buckets, comparison_count(table))

    jobs = effective_jobs(jobs)
    swept = {}
    if jobs == 1:
        with ProgressBar(length=len(shared), label='Sweeping buckets') as pb:
            for key_text, record_ids in shared:
                swept[key_text] = sweep_bucket(record_ids, store, matcher)
                pb.update(1)
    else:
        tasks = []
        for chunk in chunked(shared, 4 * jobs):
            ids = [record_id for _, record_ids in chunk for record_id in record_ids]
            tasks.append((chunk, store.subset(ids), matcher))
        for results in parallel_map(_sweep_buckets, tasks, jobs=jobs):
            for key_text, groups, comparisons in results:
                swept[key_text] = (groups, comparisons)

    report = DuplicateReport()
    comparisons = 0
    for key_text, record_ids in table.items():
        if key_text in swept:
            groups, nb = swept[key_text]
            comparisons += nb
        else:
            groups = [list(record_ids)]
        report.add_bucket(key_text, groups)
    report.comparisons = comparisons
    report.wall_time_s = time.perf_counter() - start

    logger.info("Found %d duplicate groups with %d comparisons in %.3f s.",
                report.nb_duplicate_groups, comparisons, report.wall_time_s)
    return report


def connected_groups(record_ids, edges):
    """Connected components of an undirected graph over record_ids.

    Groups list their members in record_ids order and are ordered by their
    first member."""
    record_ids = list(record_ids)
    position = {record_id: i for i, record_id in enumerate(record_ids)}
    n = len(record_ids)
    if n == 0:
        return []
    rows = np.array([position[a] for a, _ in edges], dtype=np.int64)
    cols = np.array([position[b] for _, b in edges], dtype=np.int64)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)

    groups = {}
    for i, label in enumerate(labels):
        groups.setdefault(label, []).append(record_ids[i])
    return sorted(groups.values(), key=lambda g: position[g[0]])


def exhaustive_dedup(store, match_params=None, matcher=None, cap=DEFAULT_ORACLE_CAP):
    """Group all records by connected components of the all-pairs match graph.

    Raises:
        OracleCapExceededError: if the store holds more than cap records
    """
    if len(store) > cap:
        raise OracleCapExceededError(len(store), cap)
    if matcher is None:
        matcher = TripletMatcher(match_params)

    record_ids = list(store)
    prepared = [matcher.prepare(store[record_id]) for record_id in record_ids]
    edges = []
    with ProgressBar(length=len(record_ids), label='Comparing all pairs') as pb:
        for i in range(len(record_ids)):
            for j in range(i + 1, len(record_ids)):
                if matcher.is_match(matcher.compare(prepared[i], prepared[j])):
                    edges.append((record_ids[i], record_ids[j]))
            pb.update(1)
    logger.info("Compared %d pairs, %d matches.", len(record_ids) * (len(record_ids) - 1) // 2, len(edges))
    return connected_groups(record_ids, edges)
