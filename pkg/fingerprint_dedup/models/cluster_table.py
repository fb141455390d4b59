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
"""Cluster table: index key text → record IDs sharing that key.

Buckets keep insertion order, the table is filled in a single pass over
the corpus. Buckets are held in a plain ``dict`` keyed on the full key
text; :func:`additive_hash` reproduces the additive character-code hash for
reference and collision tests only.

On disk a table is a versioned, line-oriented text file::

    #fingerprint-dedup-cluster-table	version=1	grid-n=5
    1-0-...-2	A,B
    2-0-...-0	C
"""

import logging
import os

from ..exceptions import DuplicateRecordError, TableFormatError
from .grid_index import IndexKey

logger = logging.getLogger(__name__)

TABLE_MAGIC = '#fingerprint-dedup-cluster-table'
TABLE_FORMAT_VERSION = 1

ID_SEPARATOR = ','
COLUMN_SEPARATOR = '\t'
FORBIDDEN_ID_CHARACTERS = (ID_SEPARATOR, COLUMN_SEPARATOR, '\n', '\r')


def additive_hash(s):
    """Sum of the character codes of a string.

    Keys built from the same multiset of characters collide, e.g. "1-0" and "0-1".
    """
    h = 0
    for c in s:
        h = h + ord(c)
    return h


def _key_text(key):
    return key.key_text if isinstance(key, IndexKey) else str(key)


def check_record_id(record_id):
    for c in FORBIDDEN_ID_CHARACTERS:
        if c in record_id:
            raise ValueError(f"Record ID {record_id!r} contains forbidden character {c!r}.")


class ClusterTable:
    """Associative map from index key text to the ordered list of record IDs."""

    def __init__(self, grid_n=None):
        self._buckets = {}
        self._record_keys = {}
        self._grid_n = grid_n

    @classmethod
    def load(cls, corpus, grid_n=None):
        """Build a table from (record_id, key) pairs in one pass.

        Raises:
            DuplicateRecordError: if a record ID occurs twice
        """
        table = cls(grid_n=grid_n)
        for record_id, key in corpus:
            table.add(record_id, key)
        logger.debug("Loaded %d records into %d buckets.", table.size, table.nb_buckets)
        return table

    def add(self, record_id, key):
        if record_id in self._record_keys:
            raise DuplicateRecordError(record_id)
        key_text = _key_text(key)
        bucket = self._buckets.get(key_text)
        if bucket is None:
            self._buckets[key_text] = [record_id]
        else:
            # collision, same key
            bucket.append(record_id)
        self._record_keys[record_id] = key_text

    def lookup(self, key):
        """Return the record IDs sharing a key, an empty list for an absent key."""
        return list(self._buckets.get(_key_text(key), ()))

    def key_of(self, record_id):
        return self._record_keys[record_id]

    @property
    def buckets(self):
        return self._buckets

    @property
    def grid_n(self):
        return self._grid_n

    @property
    def size(self):
        return len(self._record_keys)

    @property
    def nb_buckets(self):
        return len(self._buckets)

    def bucket_sizes(self):
        return [len(ids) for ids in self._buckets.values()]

    def items(self):
        return self._buckets.items()

    def __len__(self):
        return self.size

    def __contains__(self, key):
        return _key_text(key) in self._buckets

    def __eq__(self, other):
        if not isinstance(other, ClusterTable):
            return NotImplemented
        return (list(self._buckets.items()) == list(other._buckets.items())
                and self._grid_n == other._grid_n)

    def __repr__(self):
        return f"ClusterTable(size={self.size}, nb_buckets={self.nb_buckets}, grid_n={self._grid_n})"

    # persistence

    def save(self, path):
        header = [TABLE_MAGIC, f"version={TABLE_FORMAT_VERSION}"]
        if self._grid_n is not None:
            header.append(f"grid-n={self._grid_n}")
        for record_id in self._record_keys:
            check_record_id(record_id)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(COLUMN_SEPARATOR.join(header) + "\n")
            for key_text, record_ids in self._buckets.items():
                f.write(f"{key_text}{COLUMN_SEPARATOR}{ID_SEPARATOR.join(record_ids)}\n")
        logger.info("Saved %d records in %d buckets to '%s'.", self.size, self.nb_buckets, path)

    @classmethod
    def load_file(cls, path):
        """Read a table written by :meth:`save`.

        Raises:
            TableFormatError: on a bad header, unsupported version or malformed line
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Cluster table file '{path}' does not exist.")

        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()

        if len(lines) == 0:
            raise TableFormatError(f"'{path}' is empty, not a cluster table.")

        header = lines[0].split(COLUMN_SEPARATOR)
        if header[0] != TABLE_MAGIC:
            raise TableFormatError(f"'{path}' is not a cluster table.")
        fields = dict(h.split('=', 1) for h in header[1:] if '=' in h)
        version = fields.get('version')
        if version != str(TABLE_FORMAT_VERSION):
            raise TableFormatError(f"'{path}': unsupported cluster table version '{version}'.")
        grid_n = int(fields['grid-n']) if 'grid-n' in fields else None

        table = cls(grid_n=grid_n)
        for line_number, line in enumerate(lines[1:], start=2):
            if len(line) == 0:
                continue
            columns = line.split(COLUMN_SEPARATOR)
            if len(columns) != 2 or len(columns[0]) == 0 or len(columns[1]) == 0:
                raise TableFormatError(f"'{path}', line {line_number}: malformed bucket line.")
            key_text, ids = columns
            for record_id in ids.split(ID_SEPARATOR):
                if len(record_id) == 0:
                    raise TableFormatError(f"'{path}', line {line_number}: empty record ID.")
                table.add(record_id, key_text)

        logger.info("Loaded %d records in %d buckets from '%s'.", table.size, table.nb_buckets, path)
        return table
