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
"""Exceptions raised by the fingerprint-dedup engine.

All of them derive from builtin exception types, so callers that only
care about the broad category can keep catching ``ValueError``,
``KeyError`` or ``RuntimeError``.
"""


class SignatureParseError(ValueError):
    """A line of a signature file could not be parsed."""

    def __init__(self, line_number, message, record_id=None):
        self.line_number = line_number
        self.record_id = record_id
        if record_id is not None:
            text = f"{record_id}, line {line_number}: {message}"
        else:
            text = f"line {line_number}: {message}"
        super().__init__(text)


class EmptySignatureError(ValueError):
    """A signature without any minutia was passed where at least one is required."""


class EmptyCorpusError(ValueError):
    """A corpus without any record was passed where at least one is required."""


class DuplicateRecordError(ValueError):
    """The same record ID occurs twice within one corpus."""

    def __init__(self, record_id):
        self.record_id = record_id
        super().__init__(f"Duplicate record ID '{record_id}'.")


class UnknownRecordError(KeyError):
    """A record ID cannot be resolved to a signature."""

    def __init__(self, record_id):
        self.record_id = record_id
        super().__init__(record_id)

    def __str__(self):
        return f"Record ID '{self.record_id}' cannot be resolved to a signature."


class TableFormatError(ValueError):
    """A table, report or manifest file is malformed or of an unsupported version."""


class OracleCapExceededError(RuntimeError):
    """The exhaustive all-pairs grouping was requested on a corpus above its size cap."""

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(
            f"Corpus of {size} records exceeds the exhaustive comparison cap of {cap} records.")
