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
"""Minutiae and fingerprint signatures.

A signature file holds one minutia per line in the form ``x;y;theta;type``,
e.g. ``207;45;3,33898830413818;1``. The angle may use a comma or a dot as
decimal separator, serialization always writes a dot.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

from ..exceptions import EmptySignatureError, SignatureParseError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

FIELD_SEPARATOR = ';'
NUMBER_OF_FIELDS = 4


def normalize_angle(theta):
    """Map a finite angle into [0, 2π)."""
    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI
    # fmod of tiny negative values may round up to exactly 2π
    if theta >= TWO_PI:
        theta = 0.0
    return theta


@dataclass(frozen=True)
class Minutia:
    """One feature point.

    Attributes:
        x: pixel abscissa, non-negative integer
        y: pixel ordinate, non-negative integer
        theta: angle in radians, normalized into [0, 2π)
        type_code: raw type code from the signature file, never interpreted
    """
    x: int
    y: int
    theta: float
    type_code: int = 1

    def __post_init__(self):
        if isinstance(self.x, bool) or not isinstance(self.x, int) or self.x < 0:
            raise ValueError(f"Minutia abscissa must be a non-negative integer, got {self.x!r}")
        if isinstance(self.y, bool) or not isinstance(self.y, int) or self.y < 0:
            raise ValueError(f"Minutia ordinate must be a non-negative integer, got {self.y!r}")
        if not math.isfinite(self.theta):
            raise ValueError(f"Minutia angle must be finite, got {self.theta!r}")
        object.__setattr__(self, 'theta', normalize_angle(float(self.theta)))

    def translated(self, dx, dy):
        """Return a copy shifted by (dx, dy)."""
        return Minutia(self.x + dx, self.y + dy, self.theta, self.type_code)


@dataclass(frozen=True)
class Signature:
    """The ordered minutiae of one fingerprint record."""
    record_id: str
    minutiae: Tuple[Minutia, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.record_id, str) or len(self.record_id) == 0:
            raise ValueError(f"Record ID must be a non-empty string, got {self.record_id!r}")
        object.__setattr__(self, 'minutiae', tuple(self.minutiae))

    def __len__(self):
        return len(self.minutiae)

    def __iter__(self):
        return iter(self.minutiae)

    def require_minutiae(self):
        """Raise EmptySignatureError unless there is at least one minutia."""
        if len(self.minutiae) == 0:
            raise EmptySignatureError(f"Signature '{self.record_id}' has no minutiae.")

    def with_record_id(self, record_id):
        return Signature(record_id, self.minutiae)

    def translated(self, dx, dy):
        return Signature(self.record_id, [m.translated(dx, dy) for m in self.minutiae])


def _parse_int(text, line_number, name, record_id):
    try:
        value = int(text)
    except ValueError:
        raise SignatureParseError(
            line_number, f"{name} '{text}' is not an integer", record_id=record_id) from None
    if value < 0:
        raise SignatureParseError(
            line_number, f"{name} '{text}' is negative", record_id=record_id)
    return value


def _parse_minutia(line, line_number, record_id=None):
    fields = [f.strip() for f in line.split(FIELD_SEPARATOR)]
    if len(fields) != NUMBER_OF_FIELDS:
        raise SignatureParseError(
            line_number,
            f"expected {NUMBER_OF_FIELDS} '{FIELD_SEPARATOR}'-separated fields, found {len(fields)}",
            record_id=record_id)
    x_text, y_text, theta_text, type_text = fields

    x = _parse_int(x_text, line_number, 'abscissa', record_id)
    y = _parse_int(y_text, line_number, 'ordinate', record_id)

    try:
        theta = float(theta_text.replace(',', '.'))
    except ValueError:
        raise SignatureParseError(
            line_number, f"angle '{theta_text}' is not a number", record_id=record_id) from None
    if not math.isfinite(theta):
        raise SignatureParseError(
            line_number, f"angle '{theta_text}' is not finite", record_id=record_id)

    try:
        type_code = int(type_text)
    except ValueError:
        raise SignatureParseError(
            line_number, f"type code '{type_text}' is not an integer", record_id=record_id) from None

    return Minutia(x, y, theta, type_code)


def parse_signature(text, record_id):
    """Parse the text of a signature file.

    Blank lines and surrounding whitespace are ignored, one minutia is
    created per remaining line in file order.

    Raises:
        SignatureParseError: on a malformed line, naming its 1-based number
        EmptySignatureError: if the text holds no minutia at all
    """
    minutiae = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if len(line) == 0:
            continue
        minutiae.append(_parse_minutia(line, line_number, record_id=record_id))

    if len(minutiae) == 0:
        raise EmptySignatureError(f"Signature '{record_id}' has no minutiae.")

    logger.debug("Parsed %d minutiae for record '%s'.", len(minutiae), record_id)
    return Signature(record_id, minutiae)


def serialize_signature(signature):
    """Render a signature in the file format, dot decimal separator, one line per minutia."""
    signature.require_minutiae()
    return "\n".join(
        f"{m.x}{FIELD_SEPARATOR}{m.y}{FIELD_SEPARATOR}{m.theta!r}{FIELD_SEPARATOR}{m.type_code}"
        for m in signature.minutiae)
