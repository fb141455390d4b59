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
"""Corpus statistics, size/average regression and deduplication workload estimates.

The published reference results ship as constants: the per-database
results (:data:`PUBLISHED_RESULTS`) and the database size / average class
size pairs the regression is fitted on (:data:`PUBLISHED_SIZE_AVG`).
"""

import csv
import logging
from collections import namedtuple
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.stats import linregress

from ..exceptions import EmptyCorpusError

logger = logging.getLogger(__name__)

PublishedResult = namedtuple(
    'PublishedResult',
    ['name', 'size', 'nb_class', 'avg', 'min_p', 'max_p', 'std_dev', 'min_rate_percent',
     'max_rate_percent', 'duplicates', 'duration_s'])

PUBLISHED_RESULTS = [
    PublishedResult('FVC2000', 320, 320, 1.0, 1, 1, 0.0, 0.3125, 0.3125, 0, 0.7191),
    PublishedResult('FVC2002', 320, 320, 1.0, 1, 1, 0.0, 0.3125, 0.3125, 0, 0.7411),
    PublishedResult('BDAutres', 1011, 1009, 1.002, 1, 2, 0.0632, 0.0989, 0.1978, 4, 1.7444),
    PublishedResult('FVC2004', 4001, 3991, 1.0025, 1, 7, 0.1026, 0.0250, 0.1750, 0, 4.6645),
    PublishedResult('BD10000', 10000, 9986, 1.0014, 1, 5, 0.0566, 0.0100, 0.0500, 2, 10.7835),
    PublishedResult('BD20000', 20000, 19934, 1.0033, 1, 22, 0.1752, 0.0050, 0.1100, 0, 21.9237),
    PublishedResult('BD30000', 30000, 29823, 1.0059, 1, 38, 0.2806, 0.0033, 0.1267, 9, 32.7862),
    PublishedResult('BD40000', 40000, 39791, 1.0053, 1, 36, 0.2591, 0.0025, 0.0900, 12, 45.0318),
    PublishedResult('BD50000', 50000, 49754, 1.0049, 1, 42, 0.2671, 0.0020, 0.0840, 13, 57.5517),
    PublishedResult('NIST09', 54000, 53713, 1.0053, 1, 46, 0.2911, 0.0019, 0.0852, 20, 65.2882),
    PublishedResult('NIST14', 54000, 53740, 1.0048, 1, 43, 0.2697, 0.0019, 0.0796, 15, 65.5147),
    PublishedResult('BD_GLO', 113609, 112643, 1.0086, 1, 91, 0.4167, 0.0009, 0.0801, 749, 163.2234),
]

PUBLISHED_SIZE_AVG = [
    (320, 1.0),
    (1011, 1.002),
    (4001, 1.0025),
    (10000, 1.0014),
    (20000, 1.0033),
    (30000, 1.0059),
    (40000, 1.0053),
    (50000, 1.0049),
    (54000, 1.0053),
    (113609, 1.0086),
]

EXTRAPOLATION_SIZES = [7_000_000, 10_000_000, 14_000_000, 20_000_000]

CSV_COLUMNS = ['FBD', 'Size', 'Nb class', 'Avg.', 'Min P.', 'Max P.', 'Std dev',
               'Min P. Rate', 'Max P. Rate', 'Duplicates', 'Duration deduplication (s)']


@dataclass(frozen=True)
class CorpusStats:
    """Class size statistics of one indexed corpus.

    Rates are fractions of the corpus size, not percentages.
    """
    name: str
    size: int
    nb_class: int
    avg: float
    min_p: int
    max_p: int
    std_dev: float
    min_rate: float
    max_rate: float
    duplicates: Optional[int] = None
    duration_s: Optional[float] = None

    def as_row(self):
        """Values in :data:`CSV_COLUMNS` order, rates as percentages with 4 decimals."""
        return [
            self.name,
            self.size,
            self.nb_class,
            f"{self.avg:.4f}",
            self.min_p,
            self.max_p,
            f"{self.std_dev:.4f}",
            f"{100 * self.min_rate:.4f}%",
            f"{100 * self.max_rate:.4f}%",
            '' if self.duplicates is None else self.duplicates,
            '' if self.duration_s is None else f"{self.duration_s:.4f}",
        ]

    def as_dict(self):
        return asdict(self)


def corpus_stats(table, report=None, duration_s=None, name=None):
    """Statistics of a cluster table and, optionally, of its duplicate report.

    Raises:
        EmptyCorpusError: for an empty table
        ValueError: if the report claims more duplicates than the table can hold
    """
    if table.size == 0:
        raise EmptyCorpusError("Empty cluster table, no statistics.")
    sizes = np.array(table.bucket_sizes(), dtype=np.int64)
    if report is not None and report.nb_duplicates > table.size - len(sizes):
        raise ValueError(
            f"Report lists {report.nb_duplicates} duplicates, a table of {table.size} records "
            f"in {len(sizes)} classes holds at most {table.size - len(sizes)}.")
    if duration_s is None and report is not None:
        duration_s = report.wall_time_s
    return CorpusStats(
        name='' if name is None else name,
        size=table.size,
        nb_class=len(sizes),
        avg=table.size / len(sizes),
        min_p=int(sizes.min()),
        max_p=int(sizes.max()),
        # population standard deviation
        std_dev=float(np.std(sizes)),
        min_rate=int(sizes.min()) / table.size,
        max_rate=int(sizes.max()) / table.size,
        duplicates=None if report is None else report.nb_duplicates,
        duration_s=duration_s)


def write_stats_csv(stats, stream):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for s in stats:
        writer.writerow(s.as_row())


def format_stats_text(s):
    return '\n'.join(f"{column}: {value}" for column, value in zip(CSV_COLUMNS, s.as_row()))


# regression

@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float


def fit_regression(points):
    """Ordinary least squares line of Y (average class size) over X (corpus size).

    Raises:
        ValueError: for fewer than two points or if all X are equal
    """
    points = list(points)
    if len(points) < 2:
        raise ValueError(f"Regression needs at least two points, got {len(points)}.")
    x = np.array([p[0] for p in points], dtype=np.float64)
    y = np.array([p[1] for p in points], dtype=np.float64)
    if np.all(x == x[0]):
        raise ValueError("Regression needs at least two distinct sizes.")
    result = linregress(x, y)
    fit = RegressionFit(float(result.slope), float(result.intercept))
    logger.debug("Fitted slope %g, intercept %.8f on %d points.", fit.slope, fit.intercept, len(points))
    return fit


def predict_avg(fit, n):
    if n < 0:
        raise ValueError(f"Corpus size must be non-negative, got {n}")
    return fit.slope * n + fit.intercept


def read_points(path):
    """Read (size, average) pairs from a two-column CSV file, an optional header row is skipped."""
    points = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if len(row) == 0 or all(len(c.strip()) == 0 for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"'{path}', row {row_number}: expected two columns, found {len(row)}.")
            try:
                points.append((float(row[0]), float(row[1])))
            except ValueError:
                if row_number == 1:
                    continue
                raise ValueError(f"'{path}', row {row_number}: not a number.") from None
    return points


# workload

@dataclass(frozen=True)
class WorkloadEstimate:
    classes: float
    comparisons_per_class: float
    comparisons: float
    wall_time_ms: float


def estimate_workload(n, avg, ms_per_comparison=1.0):
    """Expected sweep comparisons and wall time for n records at an average class size.

    Raises:
        ValueError: if n < 1 or avg < 1
    """
    if n < 1:
        raise ValueError(f"Corpus size must be at least 1, got {n}")
    if avg < 1:
        raise ValueError(f"Average class size must be at least 1, got {avg}")
    classes = n / avg
    per_class = avg * (avg - 1) / 2
    comparisons = classes * per_class
    return WorkloadEstimate(classes, per_class, comparisons, comparisons * ms_per_comparison)


def format_duration(ms):
    """Render milliseconds as hours, minutes and seconds, e.g. 1h23'20"."""
    total = int(round(ms / 1000))
    hours, rest = divmod(total, 3600)
    minutes, seconds = divmod(rest, 60)
    return f"{hours}h{minutes:02d}'{seconds:02d}\""
