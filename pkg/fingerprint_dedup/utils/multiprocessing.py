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
"""Process pool helpers for index construction and the deduplication sweep."""

# NOTE: depending on platform, we may have to experiment with the forking methods,
# https://docs.python.org/3/library/multiprocessing.html#contexts-and-start-methods

import logging
import os
from concurrent.futures import ProcessPoolExecutor


logger = logging.getLogger(__name__)


def process_initializer(loglevel=None):
    """Initialize process pool workers.

    Spawned workers start with an unconfigured root logger, so the parent's
    level is applied again here."""
    if loglevel is not None:
        logging.basicConfig(level=loglevel, format="%(levelname)s: %(message)s")
        logging.getLogger().setLevel(loglevel)


def effective_jobs(jobs):
    """Number of worker processes, 0 or None meaning all available cores."""
    if jobs is None or jobs == 0:
        return os.cpu_count() or 1
    if jobs < 0:
        raise ValueError(f"Number of jobs must be non-negative, got {jobs}")
    return jobs


def chunked(items, nb_chunks):
    """Split a sequence into at most nb_chunks contiguous, order-preserving chunks."""
    items = list(items)
    nb_chunks = max(1, min(nb_chunks, len(items)))
    size, rest = divmod(len(items), nb_chunks)
    chunks = []
    start = 0
    for i in range(nb_chunks):
        stop = start + size + (1 if i < rest else 0)
        chunks.append(items[start:stop])
        start = stop
    return [c for c in chunks if len(c) > 0]


def parallel_map(func, tasks, jobs=1):
    """Apply func to every task, results in task order.

    Runs in-process for a single job or a single task; otherwise on a
    process pool. Exceptions raised in a worker propagate to the caller."""
    tasks = list(tasks)
    jobs = effective_jobs(jobs)
    if jobs == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    loglevel = logging.getLogger().getEffectiveLevel()
    logger.debug("Distribute %d tasks over %d worker processes.", len(tasks), jobs)
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks)),
                             initializer=process_initializer,
                             initargs=(loglevel,)) as executor:
        return list(executor.map(func, tasks))
