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
"""Synthetic signature corpora with planted duplicates.

Random numbers come from numpy's PCG64 bit generator seeded through a
``SeedSequence`` built from the integer seed. Both algorithms are fixed by
numpy's stream compatibility policy for a given seed, so a corpus only
depends on the seed and the generation parameters.

Subjects are drawn first, in ID order. Each subject gets a uniform number
of minutiae, integer positions uniform within the image extent subject to
a minimum spacing, uniform angles and a random type code. Duplicates are
then drawn from distinct subjects: a shifted copy with optional Gaussian
position jitter and random minutia omission.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..models.signature import Minutia, Signature, TWO_PI

logger = logging.getLogger(__name__)

SUBJECT_ID_TEMPLATE = 's{:07d}'
DUPLICATE_ID_TEMPLATE = 'd{:07d}'

MAX_PLACEMENT_ROUNDS = 100


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a synthetic corpus.

    Attributes:
        subjects: number of distinct source signatures
        min_minutiae, max_minutiae: inclusive range of minutiae per signature
        extent: (width, height) of the image in pixels
        dup_fraction: planted duplicates as a fraction of subjects
        jitter: standard deviation of the positional noise of duplicates in pixels
        global_offset: largest shift of a duplicate along each axis in pixels
        drop_prob: probability of omitting a minutia from a duplicate
        min_spacing: smallest distance between two minutiae of a subject in pixels
        seed: integer seed
    """
    subjects: int = 100
    min_minutiae: int = 20
    max_minutiae: int = 60
    extent: Tuple[int, int] = (350, 350)
    dup_fraction: float = 0.0
    jitter: float = 0.0
    global_offset: int = 0
    drop_prob: float = 0.0
    min_spacing: float = 15.0
    seed: int = 0

    def __post_init__(self):
        if self.subjects < 0:
            raise ValueError(f"Number of subjects must be non-negative, got {self.subjects}")
        if not 1 <= self.min_minutiae <= self.max_minutiae:
            raise ValueError(
                f"Minutiae range [{self.min_minutiae}, {self.max_minutiae}] is empty or starts below 1.")
        if len(self.extent) != 2 or min(self.extent) < 1:
            raise ValueError(f"Extent must be two positive sizes, got {self.extent}")
        if not 0.0 <= self.dup_fraction <= 1.0:
            raise ValueError(f"Duplicate fraction must be in [0, 1], got {self.dup_fraction}")
        if self.jitter < 0 or self.global_offset < 0 or self.min_spacing < 0:
            raise ValueError("Jitter, offset and spacing must be non-negative.")
        if not 0.0 <= self.drop_prob < 1.0:
            raise ValueError(f"Drop probability must be in [0, 1), got {self.drop_prob}")
        width, height = self.extent
        # disks of diameter min_spacing around every minutia must fit into the image
        if self.max_minutiae * math.pi * (self.min_spacing / 2) ** 2 > (width + self.min_spacing) * (height + self.min_spacing):
            raise ValueError(
                f"{self.max_minutiae} minutiae {self.min_spacing} px apart do not fit into {width}x{height} px.")

    @property
    def nb_duplicates(self):
        return int(round(self.dup_fraction * self.subjects))

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass
class SyntheticCorpus:
    signatures: List[Signature] = field(default_factory=list)
    truth_pairs: List[Tuple[str, str]] = field(default_factory=list)


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _place(rng, nb_minutiae, extent, min_spacing):
    """Integer positions at least min_spacing apart, accepted greedily in draw order."""
    width, height = extent
    high = np.array([width, height])
    points = np.zeros((0, 2), dtype=np.int64)
    for _ in range(MAX_PLACEMENT_ROUNDS):
        candidates = rng.integers(0, high, size=(4 * nb_minutiae, 2))
        pool = np.vstack([points, candidates])
        close = squareform(pdist(pool, 'sqeuclidean')) < min_spacing ** 2
        np.fill_diagonal(close, False)
        nb_kept = len(points)
        blocked = close[:nb_kept].any(axis=0)
        keep = list(range(nb_kept))
        for c in range(nb_kept, len(pool)):
            if len(keep) == nb_minutiae:
                break
            if blocked[c]:
                continue
            keep.append(c)
            blocked |= close[c]
        points = pool[keep]
        if len(points) == nb_minutiae:
            return points
    raise ValueError(f"Could not place {nb_minutiae} minutiae {min_spacing} px apart.")


def _subject(rng, record_id, spec):
    nb_minutiae = int(rng.integers(spec.min_minutiae, spec.max_minutiae + 1))
    xy = _place(rng, nb_minutiae, spec.extent, spec.min_spacing)
    theta = rng.uniform(0.0, TWO_PI, size=nb_minutiae)
    type_codes = rng.integers(0, 2, size=nb_minutiae)
    return Signature(record_id, [
        Minutia(int(x), int(y), float(t), int(c)) for (x, y), t, c in zip(xy, theta, type_codes)])


def _duplicate(rng, record_id, source, spec):
    xy = np.array([(m.x, m.y) for m in source.minutiae], dtype=np.int64)
    dx, dy = rng.integers(0, spec.global_offset + 1, size=2)
    xy = xy + np.array([dx, dy])
    if spec.jitter > 0:
        xy = np.rint(xy + rng.normal(0.0, spec.jitter, size=xy.shape)).astype(np.int64)
        xy = np.maximum(xy, 0)

    keep = rng.random(len(xy)) >= spec.drop_prob
    if not np.any(keep):
        keep[rng.integers(0, len(xy))] = True

    return Signature(record_id, [
        Minutia(int(x), int(y), m.theta, m.type_code)
        for (x, y), m, k in zip(xy, source.minutiae, keep) if k])


def generate(spec):
    """Generate subjects and planted duplicates.

    Returns a :class:`SyntheticCorpus` with subjects first, then
    duplicates, and one (dup_id, source_id) ground truth pair per duplicate.
    """
    rng = make_rng(spec.seed)
    corpus = SyntheticCorpus()
    for i in range(spec.subjects):
        corpus.signatures.append(_subject(rng, SUBJECT_ID_TEMPLATE.format(i), spec))

    nb_duplicates = spec.nb_duplicates
    if nb_duplicates > 0:
        sources = np.sort(rng.choice(spec.subjects, size=nb_duplicates, replace=False))
        for k, s in enumerate(sources):
            source = corpus.signatures[int(s)]
            record_id = DUPLICATE_ID_TEMPLATE.format(k)
            corpus.signatures.append(_duplicate(rng, record_id, source, spec))
            corpus.truth_pairs.append((record_id, source.record_id))

    logger.info("Generated %d subjects and %d duplicates with seed %d.",
                spec.subjects, nb_duplicates, spec.seed)
    return corpus
