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
"""Signature sources and corpus files.

A corpus on disk is either a directory holding one signature file per
record, the file name without suffix being the record ID, or a manifest
of ``record_id<TAB>path`` lines. A :class:`SignatureStore` resolves record
IDs to signatures, parsing files lazily on first access.

Ground truth files list one planted duplicate per line as
``dup_id<TAB>source_id``.
"""

import logging
import os
from collections.abc import Mapping

from ..exceptions import DuplicateRecordError, EmptyCorpusError, TableFormatError, UnknownRecordError
from ..utils.multiprocessing import chunked, effective_jobs, parallel_map
from ..utils.progressbar import ProgressBar
from .grid_index import GridParams, IndexKey, compute_index
from .signature import Signature, parse_signature, serialize_signature

logger = logging.getLogger(__name__)

DEFAULT_SIGNATURE_SUFFIX = '.sig'

MANIFEST_SEPARATOR = '\t'
COMMENT_PREFIX = '#'


def read_signature_file(path, record_id=None):
    """Parse one signature file, the record ID defaults to the file name without extension."""
    if record_id is None:
        record_id = os.path.splitext(os.path.basename(path))[0]
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse_signature(text, record_id)


class SignatureStore(Mapping):
    """Ordered, read-only mapping of record ID → Signature.

    Sources are either file paths, parsed on first access and cached, or
    signatures held in memory. The cache is not pickled, so a store shipped
    to worker processes only carries its sources.
    """

    def __init__(self, sources=None):
        self._sources = {}
        self._cache = {}
        if sources is not None:
            for record_id, source in sources:
                if record_id in self._sources:
                    raise DuplicateRecordError(record_id)
                self._sources[record_id] = source

    @classmethod
    def from_directory(cls, path, suffix=DEFAULT_SIGNATURE_SUFFIX):
        """One record per regular file ending in suffix, in file name order."""
        if not os.path.isdir(path):
            raise FileNotFoundError(f"Corpus directory '{path}' does not exist.")
        sources = []
        for name in sorted(os.listdir(path)):
            file_path = os.path.join(path, name)
            if not name.endswith(suffix) or not os.path.isfile(file_path):
                continue
            record_id = name[:-len(suffix)] if len(suffix) > 0 else os.path.splitext(name)[0]
            if len(record_id) == 0:
                logger.warning("Skip '%s', file name without record ID.", file_path)
                continue
            sources.append((record_id, file_path))
        logger.info("Found %d signature files in '%s'.", len(sources), path)
        return cls(sources)

    @classmethod
    def from_manifest(cls, path):
        """Records listed as ``record_id<TAB>path``, relative paths resolved against the manifest.

        Raises:
            TableFormatError: on a malformed line
            DuplicateRecordError: if a record ID is listed twice
        """
        base = os.path.dirname(os.path.abspath(path))
        sources = []
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, line in enumerate(f, start=1):
                line = line.rstrip('\r\n')
                if len(line.strip()) == 0 or line.startswith(COMMENT_PREFIX):
                    continue
                columns = line.split(MANIFEST_SEPARATOR)
                if len(columns) != 2 or len(columns[0]) == 0 or len(columns[1]) == 0:
                    raise TableFormatError(
                        f"'{path}', line {line_number}: expected 'record_id<TAB>path'.")
                record_id, file_path = columns
                if not os.path.isabs(file_path):
                    file_path = os.path.join(base, file_path)
                sources.append((record_id, file_path))
        logger.info("Read %d manifest entries from '%s'.", len(sources), path)
        return cls(sources)

    @classmethod
    def from_signatures(cls, signatures):
        return cls((s.record_id, s) for s in signatures)

    def subset(self, record_ids):
        """A store restricted to the given records, sources only."""
        store = type(self)()
        for record_id in record_ids:
            store._sources[record_id] = self._source(record_id)
        return store

    def _source(self, record_id):
        try:
            return self._sources[record_id]
        except KeyError:
            raise UnknownRecordError(record_id) from None

    def __getitem__(self, record_id):
        source = self._source(record_id)
        if isinstance(source, Signature):
            return source
        signature = self._cache.get(record_id)
        if signature is None:
            signature = read_signature_file(source, record_id)
            self._cache[record_id] = signature
        return signature

    def __contains__(self, record_id):
        return record_id in self._sources

    def __iter__(self):
        return iter(self._sources)

    def __len__(self):
        return len(self._sources)

    def __getstate__(self):
        return {'_sources': self._sources, '_cache': {}}

    def __repr__(self):
        return f"SignatureStore({len(self)} records)"


def write_corpus(signatures, directory, suffix=DEFAULT_SIGNATURE_SUFFIX):
    """Write one signature file per record, return the number of files written."""
    os.makedirs(directory, exist_ok=True)
    nb_written = 0
    for signature in signatures:
        path = os.path.join(directory, f"{signature.record_id}{suffix}")
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(serialize_signature(signature) + '\n')
        nb_written += 1
    logger.info("Wrote %d signature files to '%s'.", nb_written, directory)
    return nb_written


def write_ground_truth(pairs, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(f"{COMMENT_PREFIX}dup_id{MANIFEST_SEPARATOR}source_id\n")
        for dup_id, source_id in pairs:
            f.write(f"{dup_id}{MANIFEST_SEPARATOR}{source_id}\n")


def read_ground_truth(path):
    """Return the list of (dup_id, source_id) pairs of a ground truth file."""
    pairs = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip('\r\n')
            if len(line.strip()) == 0 or line.startswith(COMMENT_PREFIX):
                continue
            columns = line.split(MANIFEST_SEPARATOR)
            if len(columns) != 2 or len(columns[0]) == 0 or len(columns[1]) == 0:
                raise TableFormatError(
                    f"'{path}', line {line_number}: expected 'dup_id<TAB>source_id'.")
            pairs.append((columns[0], columns[1]))
    return pairs


def _index_chunk(task):
    store, n = task
    params = GridParams(n)
    return [(record_id, compute_index(store[record_id], params).counts) for record_id in store]


def index_corpus(store, grid_params=None, jobs=1):
    """Return the (record_id, IndexKey) pairs of all records in store order.

    Raises:
        EmptyCorpusError: if the store holds no record
    """
    if grid_params is None:
        grid_params = GridParams()
    if len(store) == 0:
        raise EmptyCorpusError("Empty corpus, nothing to index.")

    record_ids = list(store)
    jobs = effective_jobs(jobs)
    if jobs == 1:
        keys = []
        with ProgressBar(length=len(record_ids), label='Indexing') as pb:
            for record_id in record_ids:
                keys.append((record_id, compute_index(store[record_id], grid_params)))
                pb.update(1)
        return keys

    # a few chunks per worker evens out unequal file sizes
    tasks = [(store.subset(chunk), grid_params.n) for chunk in chunked(record_ids, 4 * jobs)]
    results = parallel_map(_index_chunk, tasks, jobs=jobs)
    return [(record_id, IndexKey(counts)) for chunk in results for record_id, counts in chunk]
