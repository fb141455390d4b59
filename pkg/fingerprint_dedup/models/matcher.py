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
"""Pairwise signature comparison with minutiae-triplet descriptors.

Each minutia forms triangles with pairs of its ``neighbors_k`` nearest
neighbors. A triangle is described by its sorted side lengths, its interior
angles and the orientation of each minutia relative to the direction from
that vertex to the midpoint of the opposite side. All of these are
invariant under translation and rotation of the source signature.

Two signatures are compared by greedily pairing triplets whose features
agree within the configured tolerances, lowest combined feature distance
first. The score is the number of paired triplets normalized by the
smaller triplet set, scaled to [0, 100].

:class:`Matcher` is the interface used by identification and
deduplication; :class:`TripletMatcher` is the built-in implementation.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .signature import TWO_PI

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchParams:
    """Matcher configuration.

    Attributes:
        min_edge: shortest admissible triangle side in pixels
        max_edge: longest admissible triangle side in pixels
        neighbors_k: number of nearest neighbors a minutia forms triangles with
        score_threshold: minimal score on the 0 to 100 scale for a match, inclusive
        min_matched_descriptors: minimal number of paired triplets for a match
        side_tolerance: admissible side length difference in pixels
        angle_tolerance: admissible angle and orientation difference in radians
    """
    min_edge: float = 15
    max_edge: float = 100
    neighbors_k: int = 4
    score_threshold: float = 90
    min_matched_descriptors: int = 0
    side_tolerance: float = 5.0
    angle_tolerance: float = 0.2618

    def __post_init__(self):
        if not 0 < self.min_edge < self.max_edge:
            raise ValueError(
                f"Edge bounds must satisfy 0 < min_edge < max_edge, got {self.min_edge}, {self.max_edge}")
        if self.neighbors_k < 2:
            raise ValueError(f"Number of neighbors must be at least 2, got {self.neighbors_k}")
        if not 0 <= self.score_threshold <= 100:
            raise ValueError(f"Score threshold must be in [0, 100], got {self.score_threshold}")
        if self.min_matched_descriptors < 0:
            raise ValueError(
                f"Minimal number of matched descriptors must be non-negative, got {self.min_matched_descriptors}")
        if self.side_tolerance < 0 or self.angle_tolerance < 0:
            raise ValueError("Tolerances must be non-negative.")


@dataclass(frozen=True)
class Triplet:
    """Rotation and translation invariant descriptor of three minutiae.

    Vertices are ordered by the length of their opposite side, ties by
    minutia index; ``sides[k]``, ``angles[k]`` and ``orientations[k]`` all
    refer to vertex ``indices[k]``.
    """
    indices: Tuple[int, int, int]
    sides: Tuple[float, float, float]
    angles: Tuple[float, float, float]
    orientations: Tuple[float, float, float]


@dataclass(frozen=True)
class MatchResult:
    score: float
    matched_descriptors: int


def is_match(result, params=None):
    """True if a result reaches both the score threshold and the descriptor minimum."""
    if params is None:
        params = MatchParams()
    return (result.score >= params.score_threshold
            and result.matched_descriptors >= params.min_matched_descriptors)


class TripletTemplate:
    """Precomputed triplet features of one signature, shared read-only."""

    def __init__(self, record_id, xy, theta, indices, sides, angles, orientations):
        self.record_id = record_id
        self.nb_minutiae = len(xy)
        self.indices = indices
        self.sides = sides
        self.angles = angles
        self.orientations = orientations
        # Translation-free geometry, orders argument pairs.
        origin = xy.min(axis=0) if len(xy) > 0 else np.zeros(2)
        self.canonical = (
            (xy - origin).astype(np.int64).tobytes(),
            np.asarray(theta, dtype=np.float64).tobytes())
        # Rigid-motion invariant fallback for signatures without triplets
        self.pairs = _pair_descriptors(xy, theta) if len(indices) == 0 else None

    def __len__(self):
        return len(self.indices)


def _pair_descriptors(xy, theta):
    """(distance, orientation, orientation) of every minutia pair, orientations relative to the joining line."""
    theta = np.asarray(theta, dtype=np.float64)
    if len(xy) < 2:
        return np.zeros((0, 3))
    i, j = np.triu_indices(len(xy), k=1)
    delta = xy[j] - xy[i]
    direction = np.arctan2(delta[:, 1], delta[:, 0])
    return np.stack([
        np.hypot(delta[:, 0], delta[:, 1]),
        np.mod(theta[i] - direction, TWO_PI),
        np.mod(theta[j] - direction - np.pi, TWO_PI),
    ], axis=1)


def _neighbor_triples(xy, neighbors_k):
    """Sorted minutia index triples formed by each minutia and pairs of its nearest neighbors."""
    nb_minutiae = len(xy)
    k = min(neighbors_k, nb_minutiae - 1)
    squared = squareform(pdist(xy, 'sqeuclidean'))
    index = np.arange(nb_minutiae)
    triples = set()
    for i in range(nb_minutiae):
        # ties broken by minutia index
        order = np.lexsort((index, squared[i]))
        neighbors = [int(j) for j in order if j != i][:k]
        for j, l in itertools.combinations(neighbors, 2):
            triples.add(tuple(sorted((i, j, l))))
    return sorted(triples)


def _triplet_features(signature, params):
    """Return (xy, theta, indices, sides, angles, orientations) arrays of a signature."""
    xy = np.array([(m.x, m.y) for m in signature.minutiae], dtype=np.float64).reshape(-1, 2)
    theta = np.array([m.theta for m in signature.minutiae], dtype=np.float64)
    empty = np.zeros((0, 3))

    if len(xy) < 3:
        return xy, theta, np.zeros((0, 3), dtype=np.int64), empty, empty, empty

    idx = np.array(_neighbor_triples(xy, params.neighbors_k), dtype=np.int64).reshape(-1, 3)
    p = xy[idx]  # (t, 3, 2)

    # side k is opposite of vertex k
    opposite = np.stack([
        np.linalg.norm(p[:, 1] - p[:, 2], axis=1),
        np.linalg.norm(p[:, 0] - p[:, 2], axis=1),
        np.linalg.norm(p[:, 0] - p[:, 1], axis=1),
    ], axis=1)

    inside = np.all((opposite >= params.min_edge) & (opposite <= params.max_edge), axis=1)
    idx, p, opposite = idx[inside], p[inside], opposite[inside]
    if len(idx) == 0:
        return xy, theta, np.zeros((0, 3), dtype=np.int64), empty, empty, empty

    # columns hold ascending indices, a stable sort breaks length ties by index
    order = np.argsort(opposite, axis=1, kind='stable')
    rows = np.arange(len(idx))[:, None]
    idx, p, sides = idx[rows, order], p[rows, order], opposite[rows, order]

    squares = sides ** 2
    products = np.prod(sides, axis=1, keepdims=True)
    cosines = (squares.sum(axis=1, keepdims=True) - 2 * squares) * sides / (2 * products)
    angles = np.arccos(np.clip(cosines, -1.0, 1.0))

    # direction from each vertex to the midpoint of its opposite side, exact for integer input
    to_midpoint = (p.sum(axis=1, keepdims=True) - 3 * p) / 2
    directions = np.arctan2(to_midpoint[..., 1], to_midpoint[..., 0])
    orientations = np.mod(theta[idx] - directions, TWO_PI)

    return xy, theta, idx, sides, angles, orientations


def build_triplets(signature, params=None):
    """Return the triplet descriptors of a signature, ordered by minutia index triple."""
    if params is None:
        params = MatchParams()
    _, _, idx, sides, angles, orientations = _triplet_features(signature, params)
    triplets = []
    for k in range(len(idx)):
        triplets.append(Triplet(
            indices=tuple(int(i) for i in idx[k]),
            sides=tuple(float(s) for s in sides[k]),
            angles=tuple(float(a) for a in angles[k]),
            orientations=tuple(float(o) for o in orientations[k])))
    return triplets


def _circular_difference(a, b):
    d = np.mod(np.abs(a - b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def _same_pair_geometry(pairs_a, pairs_b, params):
    """True if the pair descriptors of two signatures pair up one to one within tolerance."""
    if len(pairs_a) != len(pairs_b):
        return False
    if len(pairs_a) == 0:
        return True
    a, b = pairs_a[:, None, :], pairs_b[None, :, :]
    d_sides = np.abs(a[..., 0] - b[..., 0])
    straight = np.maximum(_circular_difference(a[..., 1], b[..., 1]), _circular_difference(a[..., 2], b[..., 2]))
    crossed = np.maximum(_circular_difference(a[..., 1], b[..., 2]), _circular_difference(a[..., 2], b[..., 1]))
    d_angles = np.minimum(straight, crossed)
    compatible = (d_sides <= params.side_tolerance) & (d_angles <= params.angle_tolerance)
    ia, ib = np.nonzero(compatible)
    order = np.lexsort((ib, ia, d_sides[ia, ib] + d_angles[ia, ib]))
    used_a = np.zeros(len(pairs_a), dtype=bool)
    used_b = np.zeros(len(pairs_b), dtype=bool)
    for k in order:
        i, j = ia[k], ib[k]
        if not (used_a[i] or used_b[j]):
            used_a[i] = used_b[j] = True
    return bool(np.all(used_a))


def _denominator(template_a, template_b):
    """Triplet count of the signature with more minutiae, the larger count on a tie."""
    if template_a.nb_minutiae > template_b.nb_minutiae:
        return len(template_a)
    if template_b.nb_minutiae > template_a.nb_minutiae:
        return len(template_b)
    return max(len(template_a), len(template_b))


class Matcher:
    """Interface of pairwise signature scorers.

    ``prepare`` turns a signature into whatever the scorer works on and may
    be called once per signature; ``compare`` scores two prepared values.
    Implementations must be deterministic and picklable, as deduplication
    ships them to worker processes.
    """

    def __init__(self, params=None):
        if params is None:
            params = MatchParams()
        self._params = params

    @property
    def params(self):
        return self._params

    def prepare(self, signature):
        return signature

    def compare(self, prepared_a, prepared_b):
        raise NotImplementedError

    def score(self, a, b):
        return self.compare(self.prepare(a), self.prepare(b))

    def is_match(self, result):
        return is_match(result, self._params)


class TripletMatcher(Matcher):
    """Built-in minutiae-triplet matcher."""

    def prepare(self, signature):
        signature.require_minutiae()
        return TripletTemplate(signature.record_id, *_triplet_features(signature, self._params))

    def compare(self, template_a, template_b):
        # argument order must not matter, so always evaluate in canonical order
        if template_b.canonical < template_a.canonical:
            template_a, template_b = template_b, template_a

        if len(template_a) == 0 or len(template_b) == 0:
            if len(template_a) == 0 and len(template_b) == 0 \
                    and _same_pair_geometry(template_a.pairs, template_b.pairs, self._params):
                return MatchResult(100.0, 0)
            return MatchResult(0.0, 0)

        p = self._params
        # sides first, the remaining features only for pairs that survive
        side_ok = np.all(
            np.abs(template_a.sides[:, None, :] - template_b.sides[None, :, :]) <= p.side_tolerance, axis=2)
        ia, ib = np.nonzero(side_ok)
        if len(ia) == 0:
            return MatchResult(0.0, 0)

        d_sides = np.abs(template_a.sides[ia] - template_b.sides[ib])
        d_angles = np.abs(template_a.angles[ia] - template_b.angles[ib])
        d_orientations = _circular_difference(template_a.orientations[ia], template_b.orientations[ib])

        compatible = (np.all(d_angles <= p.angle_tolerance, axis=1)
                      & np.all(d_orientations <= p.angle_tolerance, axis=1))
        if not np.any(compatible):
            return MatchResult(0.0, 0)
        ia, ib = ia[compatible], ib[compatible]
        d_sides, d_angles, d_orientations = d_sides[compatible], d_angles[compatible], d_orientations[compatible]

        side_scale = p.side_tolerance if p.side_tolerance > 0 else 1.0
        angle_scale = p.angle_tolerance if p.angle_tolerance > 0 else 1.0
        distance = (d_sides.sum(axis=1) / side_scale
                    + d_angles.sum(axis=1) / angle_scale
                    + d_orientations.sum(axis=1) / angle_scale)

        # lowest distance first, ties by index triple order of a, then of b
        order = np.lexsort((ib, ia, distance))
        used_a = np.zeros(len(template_a), dtype=bool)
        used_b = np.zeros(len(template_b), dtype=bool)
        matched = 0
        for k in order:
            i, j = ia[k], ib[k]
            if used_a[i] or used_b[j]:
                continue
            used_a[i] = used_b[j] = True
            matched += 1

        # fixed while minutiae are removed from the smaller signature
        score = 100.0 * matched / _denominator(template_a, template_b)
        return MatchResult(score, matched)


def match_score(a, b, params=None):
    """Score two signatures with the built-in triplet matcher.

    Raises:
        EmptySignatureError: if either signature has no minutiae
    """
    return TripletMatcher(params).score(a, b)
