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
"""Measure duplicate groupings against planted ground truth and the exhaustive reference."""

import itertools
import logging
from dataclasses import dataclass

from .dedup import connected_groups

logger = logging.getLogger(__name__)


def _pair(a, b):
    return (a, b) if a <= b else (b, a)


def group_pairs(groups):
    """All unordered record pairs sharing a group."""
    pairs = set()
    for group in groups:
        for a, b in itertools.combinations(group, 2):
            pairs.add(_pair(a, b))
    return pairs


def truth_groups(truth_pairs):
    """Records linked by (dup_id, source_id) pairs, closed under transitivity."""
    truth_pairs = list(truth_pairs)
    record_ids = list(dict.fromkeys(r for pair in truth_pairs for r in pair))
    return connected_groups(record_ids, truth_pairs)


@dataclass(frozen=True)
class Evaluation:
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self):
        predicted = self.true_positives + self.false_positives
        return 1.0 if predicted == 0 else self.true_positives / predicted

    @property
    def recall(self):
        planted = self.true_positives + self.false_negatives
        return 1.0 if planted == 0 else self.true_positives / planted

    def as_dict(self):
        return {
            'true-positives': self.true_positives,
            'false-positives': self.false_positives,
            'false-negatives': self.false_negatives,
            'precision': self.precision,
            'recall': self.recall,
        }


def evaluate_against_ground_truth(report, truth_pairs):
    """Pairwise precision and recall of a duplicate report."""
    predicted = group_pairs(report.groups())
    expected = group_pairs(truth_groups(truth_pairs))
    evaluation = Evaluation(
        true_positives=len(predicted & expected),
        false_positives=len(predicted - expected),
        false_negatives=len(expected - predicted))
    logger.info("Precision %.4f, recall %.4f.", evaluation.precision, evaluation.recall)
    return evaluation


def cross_key_leakage(truth_pairs, key_of):
    """Number of planted pairs whose records carry different index keys.

    Such duplicates never share a bucket and cannot be found by the sweep."""
    return sum(1 for dup_id, source_id in truth_pairs if key_of(dup_id) != key_of(source_id))


def oracle_disagreements(report, oracle_groups, table):
    """Record pairs sharing an index key on which the sweep and the exhaustive grouping disagree."""
    swept = report.group_of()
    oracle = {record_id: i for i, group in enumerate(oracle_groups) for record_id in group}
    disagreements = []
    for _, record_ids in table.items():
        for a, b in itertools.combinations(record_ids, 2):
            if (swept[a] == swept[b]) != (oracle[a] == oracle[b]):
                disagreements.append(_pair(a, b))
    return sorted(disagreements)
