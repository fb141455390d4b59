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
"""Block-count index keys.

The bounding box of a signature is divided into an n × n grid of equally
sized blocks, the minutiae falling into each block are counted and the
counts are joined by "-" into the key text. The grid is scanned column by
column, where a column is one x-block traversed along increasing y:
for the 23-minutiae worked example this yields
``1-1-1-1-0-1-4-2-2-0-2-1-2-0-0-1-0-0-1-1-1-0-1-0-0``.

A block has the real width ``(x_max - x_min + 1) / n``. The whole part of
``x / (l / n)`` equals ``(x * n) // l`` for non-negative integers, which is
what the code evaluates, so no floating point rounding can push a minutia
into the wrong block.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)

KEY_SEPARATOR = '-'

DEFAULT_GRID_N = 5


class GridParams:
    """Grid geometry, currently only the matrix side n."""

    def __init__(self, n=DEFAULT_GRID_N):
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"Grid size must be a positive integer, got {n!r}")
        self._n = int(n)

    @property
    def n(self):
        return self._n

    @property
    def nb_blocks(self):
        return self._n * self._n

    def __eq__(self, other):
        return isinstance(other, GridParams) and self.n == other.n

    def __hash__(self):
        return hash(self.n)

    def __repr__(self):
        return f"GridParams(n={self.n})"


class IndexKey:
    """The flat block counts of a signature and their "-"-joined text."""

    def __init__(self, counts):
        counts = tuple(int(c) for c in counts)
        if len(counts) == 0:
            raise ValueError("An index key needs at least one block count.")
        if any(c < 0 for c in counts):
            raise ValueError(f"Block counts must be non-negative, got {counts}")
        self._counts = counts
        self._key_text = KEY_SEPARATOR.join(str(c) for c in counts)

    @classmethod
    def from_text(cls, key_text):
        try:
            return cls(int(c) for c in key_text.split(KEY_SEPARATOR))
        except ValueError:
            raise ValueError(f"'{key_text}' is not a valid index key.") from None

    @property
    def counts(self):
        return self._counts

    @property
    def key_text(self):
        return self._key_text

    @property
    def nb_minutiae(self):
        return sum(self._counts)

    def __str__(self):
        return self._key_text

    def __repr__(self):
        return f"IndexKey('{self._key_text}')"

    def __eq__(self, other):
        if isinstance(other, IndexKey):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self):
        return hash(self._counts)


def _coordinates(signature):
    signature.require_minutiae()
    return np.array([(m.x, m.y) for m in signature.minutiae], dtype=np.int64)


def bounding_box(signature):
    """Return (x_min, y_min, x_max, y_max) over all minutiae."""
    xy = _coordinates(signature)
    x_min, y_min = xy.min(axis=0)
    x_max, y_max = xy.max(axis=0)
    return int(x_min), int(y_min), int(x_max), int(y_max)


def _blocks(xy, box, n):
    """Block coordinates of an (m, 2) array of absolute coordinates."""
    x_min, y_min, x_max, y_max = box
    origin = np.array([x_min, y_min], dtype=np.int64)
    extent = np.array([x_max - x_min + 1, y_max - y_min + 1], dtype=np.int64)
    blocks = ((xy - origin) * n) // extent
    return np.minimum(blocks, n - 1)


def block_of(minutia, box, params=None):
    """Return the (x_block, y_block) of a minutia inside a bounding box."""
    if params is None:
        params = GridParams()
    x_min, y_min, x_max, y_max = box
    if not (x_min <= minutia.x <= x_max and y_min <= minutia.y <= y_max):
        raise ValueError(f"Minutia at ({minutia.x}, {minutia.y}) lies outside of box {box}.")
    xb, yb = _blocks(np.array([[minutia.x, minutia.y]], dtype=np.int64), box, params.n)[0]
    return int(xb), int(yb)


def compute_index(signature, params=None):
    """Compute the block-count index key of a signature.

    Raises:
        EmptySignatureError: if the signature has no minutiae
    """
    if params is None:
        params = GridParams()
    n = params.n
    xy = _coordinates(signature)
    box = (*xy.min(axis=0), *xy.max(axis=0))
    blocks = _blocks(xy, box, n)
    # column-major: x-block outer, y-block inner
    flat = blocks[:, 0] * n + blocks[:, 1]
    counts = np.bincount(flat, minlength=n * n)
    return IndexKey(counts)
