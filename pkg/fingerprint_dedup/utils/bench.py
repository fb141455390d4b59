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
"""Scaling measurements over synthetic corpora of increasing size.

For every size a corpus is generated with a seed derived from the base
seed and the size, indexed, swept for duplicates and queried with a sample
of identification queries. Phases run one after the other; index and
sweep timings are the median of several repetitions, the identification
latency the median over all queries.
"""

import csv
import logging
import statistics
import time
from dataclasses import astuple, dataclass, fields, replace

import numpy as np

from ..models.cluster_table import ClusterTable
from ..models.corpus import SignatureStore, index_corpus
from ..models.grid_index import GridParams
from ..models.matcher import TripletMatcher
from .dedup import deduplicate
from .identify import identify
from .progressbar import ProgressBar
from .stats import corpus_stats
from .synthgen import generate, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    size: int
    nb_class: int
    avg: float
    max_p: int
    max_rate: float
    std_dev: float
    duplicates: int
    comparisons: int
    generate_s: float
    index_s: float
    dedup_s: float
    identify_median_ms: float


BENCH_COLUMNS = [f.name for f in fields(BenchRow)]


def derive_seed(seed, size):
    """Seed of the corpus of one size, derived from the base seed."""
    return int(np.random.SeedSequence([seed, size]).generate_state(1)[0])


def _timed(func, *args, **kwargs):
    start = time.perf_counter()
    result = func(*args, **kwargs)
    return result, time.perf_counter() - start


def _median_timed(repetitions, func, *args, **kwargs):
    results = [_timed(func, *args, **kwargs) for _ in range(repetitions)]
    return results[-1][0], statistics.median(t for _, t in results)


def bench_size(size, spec, grid_params=None, match_params=None, repetitions=3, queries=100, jobs=1):
    """Measure one corpus size, return a :class:`BenchRow`."""
    if grid_params is None:
        grid_params = GridParams()
    if repetitions < 1 or queries < 0:
        raise ValueError("Repetitions must be positive and queries non-negative.")

    subjects = max(1, int(round(size / (1.0 + spec.dup_fraction))))
    size_spec = replace(spec, subjects=subjects, seed=derive_seed(spec.seed, size))
    corpus, generate_s = _timed(generate, size_spec)
    store = SignatureStore.from_signatures(corpus.signatures)

    keys, index_s = _median_timed(repetitions, index_corpus, store, grid_params, jobs=jobs)
    table = ClusterTable.load(keys, grid_n=grid_params.n)

    matcher = TripletMatcher(match_params)
    report, dedup_s = _median_timed(repetitions, deduplicate, table, store, matcher=matcher, jobs=jobs)

    latencies = []
    if queries > 0:
        rng = make_rng(size_spec.seed)
        picks = rng.choice(len(corpus.signatures), size=min(queries, len(corpus.signatures)), replace=False)
        for i in picks:
            _, latency = _timed(identify, corpus.signatures[int(i)], table, store,
                                grid_params=grid_params, matcher=matcher)
            latencies.append(latency)
    identify_median_ms = 1000 * statistics.median(latencies) if latencies else float('nan')

    s = corpus_stats(table, report)
    return BenchRow(
        size=s.size, nb_class=s.nb_class, avg=s.avg, max_p=s.max_p, max_rate=s.max_rate,
        std_dev=s.std_dev, duplicates=s.duplicates, comparisons=report.comparisons,
        generate_s=generate_s, index_s=index_s, dedup_s=dedup_s,
        identify_median_ms=identify_median_ms)


def scaling_run(sizes, spec, grid_params=None, match_params=None, repetitions=3, queries=100, jobs=1):
    """Measure every size in ascending order, one :class:`BenchRow` per size.

    Raises:
        ValueError: if sizes are not strictly ascending
    """
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])) or any(s < 1 for s in sizes):
        raise ValueError(f"Sizes must be positive and strictly ascending, got {sizes}")
    rows = []
    with ProgressBar(length=len(sizes), label='Benchmark') as pb:
        pb.item_show_func = lambda step: f"size {sizes[step]}" if step < len(sizes) else None
        for size in sizes:
            rows.append(bench_size(size, spec, grid_params=grid_params, match_params=match_params,
                                   repetitions=repetitions, queries=queries, jobs=jobs))
            logger.debug("Size %d: %s", size, rows[-1])
            pb.update(1)
    return rows


def write_bench_csv(rows, stream, delimiter=','):
    writer = csv.writer(stream, delimiter=delimiter, lineterminator='\n')
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow(astuple(row))
