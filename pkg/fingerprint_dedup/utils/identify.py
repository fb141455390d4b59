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
"""Identification of a query signature against a cluster table.

Only the members of the query's own bucket are ever scored, so the cost of
a query is one index computation, one table lookup and as many
comparisons as the bucket holds.
"""

import logging
from dataclasses import dataclass, field
from typing import List

from ..models.grid_index import GridParams, compute_index
from ..models.matcher import TripletMatcher

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    record_id: str
    score: float
    matched_descriptors: int
    is_match: bool


@dataclass
class IdentificationResult:
    """Scored bucket members of one query.

    Attributes:
        key_text: index key of the query
        candidates: every scored bucket member, best score first, ties by record ID
        penetration: bucket size over table size, 0 for an empty table
    """
    key_text: str
    candidates: List[Candidate] = field(default_factory=list)
    penetration: float = 0.0

    @property
    def matches(self):
        return [c for c in self.candidates if c.is_match]

    @property
    def comparisons(self):
        return len(self.candidates)


def identify(query, table, store, grid_params=None, match_params=None, matcher=None):
    """Identify a query signature among the records of a cluster table.

    Raises:
        EmptySignatureError: if the query has no minutiae
        UnknownRecordError: if a bucket member is missing from the store
        ValueError: if the table was built with another grid size
    """
    if grid_params is None:
        grid_params = GridParams() if table.grid_n is None else GridParams(table.grid_n)
    if table.grid_n is not None and table.grid_n != grid_params.n:
        raise ValueError(
            f"Table was built with grid size {table.grid_n}, query indexed with {grid_params.n}.")
    if matcher is None:
        matcher = TripletMatcher(match_params)

    key = compute_index(query, grid_params)
    bucket = table.lookup(key)
    logger.debug("Query '%s' has key '%s', bucket of %d records.", query.record_id, key, len(bucket))

    candidates = []
    if len(bucket) > 0:
        prepared_query = matcher.prepare(query)
        for record_id in bucket:
            result = matcher.compare(prepared_query, matcher.prepare(store[record_id]))
            candidates.append(Candidate(
                record_id, result.score, result.matched_descriptors, matcher.is_match(result)))
    candidates.sort(key=lambda c: (-c.score, c.record_id))

    penetration = len(bucket) / table.size if table.size > 0 else 0.0
    return IdentificationResult(key.key_text, candidates, penetration)
