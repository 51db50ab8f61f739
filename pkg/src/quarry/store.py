"""Sharded inverted index and document store with lazy deletion.

Structure of the inverted index, per index:

    type -> shard -> field path -> term -> PostingEntry(df, {doc_id: tf})

and of the document store:

    type -> shard -> doc_id -> source document

Documents are routed to shards by a stable FNV-1a hash of their id, so
the same id lands in the same shard across process restarts. Deletion is
lazy: documents are marked and only physically purged at flush time.
"""

import json
import logging
import secrets
import threading
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field

from . import analysis, mapping
from .errors import DocumentError, NotFoundError

logger = logging.getLogger(__name__)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash; stable across processes and platforms."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def shard_of(doc_id: str, num_shards: int) -> int:
    """Shard number for a document id: fnv1a64(utf-8 bytes) mod num_shards."""
    return fnv1a_64(doc_id.encode("utf-8")) % num_shards


def generate_doc_id() -> str:
    """Random 128-bit document id as 32 lowercase hex characters."""
    return secrets.token_hex(16)


class ReadWriteLock:
    """Multiple concurrent readers or a single writer."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._cond:
                self._writing = False
                self._cond.notify_all()


@dataclass
class PostingEntry:
    """Document frequency plus the postings map doc_id -> term frequency."""

    doc_frequency: int = 0
    postings: dict[str, int] = dc_field(default_factory=dict)

    def to_pair(self) -> list:
        return [self.doc_frequency, dict(sorted(self.postings.items()))]

    @classmethod
    def from_pair(cls, pair) -> "PostingEntry":
        return cls(doc_frequency=pair[0], postings=dict(pair[1]))


class Index:
    """One index: meta, inverted index, document store, deletion list.

    Concurrency contract: every mutating operation runs under the write
    lock; ``get`` and search hold the read lock. The flush action may be
    scheduled through a debouncer (``flush_debouncer``), and persistence
    happens through the injected ``persist`` callable so this module
    stays independent of the on-disk format.
    """

    def __init__(self, meta: mapping.IndexMeta, persist=None):
        self.meta = meta
        self.lock = ReadWriteLock()
        self.persist = persist
        self.flush_debouncer = None  # set by the engine runtime
        shards = range(meta.settings.number_of_shards)
        self.inverted: dict[str, dict[int, dict]] = {
            t: {s: {} for s in shards} for t in meta.types
        }
        self.documents: dict[str, dict[int, dict]] = {
            t: {s: {} for s in shards} for t in meta.types
        }
        self.num_docs = 0
        self._deletions: list[tuple[str, str]] = []
        self._deleted: set[tuple[str, str]] = set()

    @property
    def num_shards(self) -> int:
        return self.meta.settings.number_of_shards

    # -- write operations ------------------------------------------------

    def add(self, doc_type: str, doc: dict, doc_id: str | None = None) -> str:
        """Index a document; generates an id when none is given.

        Adding to an id that already physically exists goes through
        update semantics (old postings removed first).
        """
        with self.lock.write():
            self._require_type(doc_type)
            if doc_id is None:
                doc_id = generate_doc_id()
            self._put_locked(doc_type, doc_id, doc)
        self._schedule_flush()
        return doc_id

    def update(self, doc_type: str, doc_id: str, doc: dict) -> tuple[str, bool]:
        """Replace the document at ``doc_id``; creates it when absent.

        Returns (doc_id, created) where created is False when a live
        document was replaced.
        """
        with self.lock.write():
            self._require_type(doc_type)
            existed = self._is_live(doc_type, doc_id)
            self._put_locked(doc_type, doc_id, doc)
        self._schedule_flush()
        return doc_id, not existed

    def delete(self, doc_type: str, doc_id: str) -> bool:
        """Mark a document for deletion; purge happens at flush.

        Returns False when the type/id is unknown or the document is
        already marked.
        """
        with self.lock.write():
            if doc_type not in self.meta.types:
                return False
            key = (doc_type, doc_id)
            if key in self._deleted or not self._present(doc_type, doc_id):
                return False
            self._deletions.append(key)
            self._deleted.add(key)
        self._schedule_flush()
        return True

    def flush(self) -> None:
        """Purge marked documents, then persist every shard.

        An I/O failure is logged; the in-memory state stays authoritative.
        """
        with self.lock.write():
            for doc_type, doc_id in list(self._deletions):
                if self._present(doc_type, doc_id):
                    self._degenerate_locked(doc_type, doc_id)
            self._deletions.clear()
            self._deleted.clear()
            if self.persist is not None:
                try:
                    self.persist(self.meta, self.inverted, self.documents)
                except Exception:
                    logger.exception(
                        "flush of index %r failed to persist", self.meta.name
                    )

    # -- read operations -------------------------------------------------

    def get(self, doc_type: str, doc_id: str) -> dict | None:
        """Stored source if present and not marked for deletion."""
        with self.lock.read():
            if (doc_type, doc_id) in self._deleted:
                return None
            if doc_type not in self.documents:
                return None
            shard = shard_of(doc_id, self.num_shards)
            return self.documents[doc_type][shard].get(doc_id)

    def is_deleted(self, doc_type: str, doc_id: str) -> bool:
        return (doc_type, doc_id) in self._deleted

    def live_ids(self, doc_type: str):
        """All live (not marked) doc ids of a type. Caller holds the read lock."""
        for shard_docs in self.documents[doc_type].values():
            for doc_id in shard_docs:
                if (doc_type, doc_id) not in self._deleted:
                    yield doc_id

    def live_count(self, doc_type: str | None = None) -> int:
        """Physically stored documents minus pending deletions."""
        types = [doc_type] if doc_type else list(self.documents)
        total = 0
        for t in types:
            total += sum(len(s) for s in self.documents[t].values())
        marked = sum(1 for t, _ in self._deleted if doc_type in (None, t))
        return total - marked

    def doc_frequency(self, doc_type: str, field_path: str, term: str) -> int:
        """Document frequency summed across shards. Caller holds the read lock."""
        total = 0
        for shard_fields in self.inverted[doc_type].values():
            entry = shard_fields.get(field_path, {}).get(term)
            if entry is not None:
                total += entry.doc_frequency
        return total

    def postings(self, doc_type: str, field_path: str, term: str):
        """Yield (doc_id, tf) across shards. Caller holds the read lock."""
        for shard in range(self.num_shards):
            entry = self.inverted[doc_type][shard].get(field_path, {}).get(term)
            if entry is not None:
                yield from entry.postings.items()

    # -- index maintenance -----------------------------------------------

    def generate(self, doc_type: str, doc_id: str, doc: dict) -> None:
        """Add a document's postings and source to the stores.

        The document must not currently be indexed under this id.
        """
        with self.lock.write():
            self._generate_locked(doc_type, doc_id, doc)

    def degenerate(self, doc_type: str, doc_id: str) -> None:
        """Remove a document's postings and source; inverse of generate."""
        with self.lock.write():
            if not self._present(doc_type, doc_id):
                raise NotFoundError(f"document {doc_id!r} is not indexed")
            self._degenerate_locked(doc_type, doc_id)

    # -- internals ---------------------------------------------------------

    def _put_locked(self, doc_type: str, doc_id: str, doc: dict) -> None:
        if self._present(doc_type, doc_id):
            self._degenerate_locked(doc_type, doc_id)
        self._generate_locked(doc_type, doc_id, doc)

    def _generate_locked(self, doc_type: str, doc_id: str, doc: dict) -> None:
        self._require_type(doc_type)
        if self._present(doc_type, doc_id):
            raise DocumentError(f"document {doc_id!r} is already indexed")
        shard = shard_of(doc_id, self.num_shards)
        field_terms = self._analyzed_field_terms(doc)
        shard_index = self.inverted[doc_type][shard]
        for field_path, counts in field_terms.items():
            field_index = shard_index.setdefault(field_path, {})
            for term, count in counts.items():
                entry = field_index.setdefault(term, PostingEntry())
                entry.postings[doc_id] = count
                entry.doc_frequency = len(entry.postings)
        # Canonical JSON round-trip: validates serializability and gives
        # the store its own copy with deterministic key order.
        source = json.loads(json.dumps(doc, sort_keys=True))
        self.documents[doc_type][shard][doc_id] = source
        self.num_docs += 1

    def _degenerate_locked(self, doc_type: str, doc_id: str) -> None:
        shard = shard_of(doc_id, self.num_shards)
        source = self.documents[doc_type][shard][doc_id]
        shard_index = self.inverted[doc_type][shard]
        for field_path, counts in self._analyzed_field_terms(source).items():
            field_index = shard_index.get(field_path, {})
            for term in counts:
                entry = field_index.get(term)
                if entry is None:
                    continue
                entry.postings.pop(doc_id, None)
                entry.doc_frequency = len(entry.postings)
                if not entry.postings:
                    del field_index[term]
            if not field_index and field_path in shard_index:
                del shard_index[field_path]
        del self.documents[doc_type][shard][doc_id]
        self.num_docs -= 1
        key = (doc_type, doc_id)
        if key in self._deleted:
            self._deleted.discard(key)
            self._deletions.remove(key)

    def _analyzed_field_terms(self, doc: dict) -> dict[str, Counter]:
        """Flatten and analyze a document into per-field term counts."""
        field_terms: dict[str, Counter] = {}
        for path, value in mapping.flatten_document(doc, self.meta):
            fm = self.meta.fields[path]
            if not fm.index:
                continue
            if fm.datatype == "text":
                index_analyzer, _ = analysis.resolve_analyzers(fm)
                tokens = analysis.analyze(index_analyzer, value)
            else:
                token = analysis.exact_term(value, fm.datatype)
                tokens = [token] if token else []
            if tokens:
                field_terms.setdefault(path, Counter()).update(tokens)
        return field_terms

    def _present(self, doc_type: str, doc_id: str) -> bool:
        """Physically stored, regardless of deletion marks."""
        if doc_type not in self.documents:
            return False
        shard = shard_of(doc_id, self.num_shards)
        return doc_id in self.documents[doc_type][shard]

    def _is_live(self, doc_type: str, doc_id: str) -> bool:
        return (
            self._present(doc_type, doc_id)
            and (doc_type, doc_id) not in self._deleted
        )

    def _require_type(self, doc_type: str) -> None:
        if doc_type not in self.meta.types:
            raise NotFoundError(
                f"type {doc_type!r} is not mapped in index {self.meta.name!r}"
            )

    def _schedule_flush(self) -> None:
        if self.flush_debouncer is not None:
            self.flush_debouncer.trigger()
