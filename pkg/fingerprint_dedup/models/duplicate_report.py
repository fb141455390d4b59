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
"""Deduplication result: index key text → groups of mutually matching record IDs.

Every record of the swept corpus appears in exactly one group. Singletons
are kept as one-element groups, so the groups of one key partition that
key's bucket. The first member of a group is the head the sweep compared
all others against and serves as the group's representative.

On disk a report is a versioned, line-oriented text file with one line per
group and a summary footer::

    #fingerprint-dedup-duplicate-report	version=1
    1-0-...-2	A	A,B
    2-0-...-0	C	C
    #summary	records=3	buckets=2	duplicate-groups=1	comparisons=1
    #wall-time-s	0.000412

The member column repeats the representative as its first entry. The
wall time sits on its own line so that reports of identical runs differ
in that line only.
"""

import logging
import os

from ..exceptions import TableFormatError
from .cluster_table import COLUMN_SEPARATOR, ID_SEPARATOR, check_record_id

logger = logging.getLogger(__name__)

REPORT_MAGIC = '#fingerprint-dedup-duplicate-report'
REPORT_FORMAT_VERSION = 1

SUMMARY_TAG = '#summary'
WALL_TIME_TAG = '#wall-time-s'


class DuplicateReport:
    """Ordered map from key text to the duplicate groups found in that bucket."""

    def __init__(self, comparisons=0, wall_time_s=None):
        self._groups_by_key = {}
        self._comparisons = comparisons
        self._wall_time_s = wall_time_s

    def add_bucket(self, key_text, groups):
        """Record the groups of one bucket, each a non-empty list of record IDs."""
        if key_text in self._groups_by_key:
            raise ValueError(f"Key '{key_text}' already present in report.")
        groups = [list(g) for g in groups]
        if any(len(g) == 0 for g in groups):
            raise ValueError(f"Empty group in bucket '{key_text}'.")
        for group in groups:
            for record_id in group:
                check_record_id(record_id)
        self._groups_by_key[key_text] = groups

    @property
    def groups_by_key(self):
        return self._groups_by_key

    @property
    def comparisons(self):
        return self._comparisons

    @comparisons.setter
    def comparisons(self, value):
        self._comparisons = value

    @property
    def wall_time_s(self):
        return self._wall_time_s

    @wall_time_s.setter
    def wall_time_s(self, value):
        self._wall_time_s = value

    def groups(self):
        """All groups in key order, then sweep order."""
        return [g for groups in self._groups_by_key.values() for g in groups]

    def duplicate_groups(self):
        """Groups holding at least two records."""
        return [g for g in self.groups() if len(g) >= 2]

    def representatives(self):
        """Map of representative (group head) → other group members."""
        return {g[0]: g[1:] for g in self.groups()}

    def group_of(self):
        """Map of every record ID → index of its group in :meth:`groups`."""
        return {record_id: i for i, g in enumerate(self.groups()) for record_id in g}

    @property
    def nb_records(self):
        return sum(len(g) for g in self.groups())

    @property
    def nb_buckets(self):
        return len(self._groups_by_key)

    @property
    def nb_duplicate_groups(self):
        return len(self.duplicate_groups())

    @property
    def nb_duplicates(self):
        """Records beyond the representative in every duplicate group."""
        return sum(len(g) - 1 for g in self.duplicate_groups())

    def summary(self):
        return {
            'records': self.nb_records,
            'buckets': self.nb_buckets,
            'duplicate-groups': self.nb_duplicate_groups,
            'comparisons': self._comparisons,
        }

    def __eq__(self, other):
        if not isinstance(other, DuplicateReport):
            return NotImplemented
        return (list(self._groups_by_key.items()) == list(other._groups_by_key.items())
                and self._comparisons == other._comparisons)

    def __repr__(self):
        return (f"DuplicateReport(records={self.nb_records}, buckets={self.nb_buckets}, "
                f"duplicate_groups={self.nb_duplicate_groups}, comparisons={self._comparisons})")

    # persistence

    def to_lines(self, include_wall_time=True):
        lines = [COLUMN_SEPARATOR.join([REPORT_MAGIC, f"version={REPORT_FORMAT_VERSION}"])]
        for key_text, groups in self._groups_by_key.items():
            for group in groups:
                lines.append(COLUMN_SEPARATOR.join([key_text, group[0], ID_SEPARATOR.join(group)]))
        lines.append(COLUMN_SEPARATOR.join(
            [SUMMARY_TAG] + [f"{k}={v}" for k, v in self.summary().items()]))
        if include_wall_time and self._wall_time_s is not None:
            lines.append(f"{WALL_TIME_TAG}{COLUMN_SEPARATOR}{self._wall_time_s:.6f}")
        return lines

    def save(self, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for line in self.to_lines():
                f.write(line + '\n')
        logger.info("Saved report with %d duplicate groups to '%s'.", self.nb_duplicate_groups, path)

    @classmethod
    def load_file(cls, path):
        """Read a report written by :meth:`save`.

        Raises:
            TableFormatError: on a bad header, unsupported version or malformed line
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"Report file '{path}' does not exist.")

        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()

        if len(lines) == 0 or not lines[0].startswith(REPORT_MAGIC):
            raise TableFormatError(f"'{path}' is not a duplicate report.")
        if f"version={REPORT_FORMAT_VERSION}" not in lines[0].split(COLUMN_SEPARATOR)[1:]:
            raise TableFormatError(f"'{path}': unsupported duplicate report version.")

        report = cls()
        buckets = {}
        for line_number, line in enumerate(lines[1:], start=2):
            if len(line) == 0:
                continue
            columns = line.split(COLUMN_SEPARATOR)
            if columns[0] == SUMMARY_TAG:
                fields = dict(c.split('=', 1) for c in columns[1:] if '=' in c)
                report.comparisons = int(fields.get('comparisons', 0))
                continue
            if columns[0] == WALL_TIME_TAG:
                report.wall_time_s = float(columns[1])
                continue
            if len(columns) != 3 or any(len(c) == 0 for c in columns):
                raise TableFormatError(f"'{path}', line {line_number}: malformed group line.")
            key_text, representative, members = columns
            members = members.split(ID_SEPARATOR)
            if members[0] != representative:
                raise TableFormatError(
                    f"'{path}', line {line_number}: representative '{representative}' does not head its group.")
            buckets.setdefault(key_text, []).append(members)

        for key_text, groups in buckets.items():
            report.add_bucket(key_text, groups)
        return report
