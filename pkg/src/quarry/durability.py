"""Debounced, compressed persistence of index snapshots.

On-disk layout, rooted at the engine data directory:

    <data_dir>/<index>/meta.json
    <data_dir>/<index>/<type>/inv_<shard>.bin
    <data_dir>/<index>/<type>/docs_<shard>.bin

Every ``.bin`` blob is canonical JSON (sorted keys, no whitespace)
compressed behind a 6-byte header: 4 ASCII magic bytes, one format
version byte, one codec id byte. Serialization is deterministic, so an
unchanged snapshot re-serializes to byte-identical blobs.
"""

import json
import logging
import threading
import zlib
from pathlib import Path

from .errors import CorruptBlobError
from .mapping import IndexMeta
from .store import PostingEntry

logger = logging.getLogger(__name__)

BLOB_MAGIC = b"QBLB"
BLOB_VERSION = 1
CODEC_ZLIB = 1
_HEADER_LEN = 6


class Debouncer:
    """Collapse rapid triggers into one action call after a quiet interval.

    Trailing-edge semantics: each trigger cancels the pending timer and
    schedules the action ``interval_ms`` after the latest trigger. The
    timer factory is injectable so tests can drive a fake clock.
    """

    def __init__(self, action, interval_ms: int, timer_factory=threading.Timer):
        if interval_ms <= 0:
            raise ValueError("interval_ms must be positive")
        self._action = action
        self._interval_s = interval_ms / 1000.0
        self._timer_factory = timer_factory
        self._lock = threading.Lock()
        self._timer = None

    @property
    def pending(self) -> bool:
        with self._lock:
            return self._timer is not None

    def trigger(self) -> None:
        """Schedule (or reschedule) the action after the quiet interval."""
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
            timer = self._timer_factory(self._interval_s, self._fire)
            timer.daemon = True
            self._timer = timer
            timer.start()

    def _fire(self) -> None:
        with self._lock:
            self._timer = None
        try:
            self._action()
        except Exception:
            logger.exception("debounced action failed")

    def cancel(self) -> None:
        """Drop any pending execution."""
        with self._lock:
            if self._timer is not None:
                self._timer.cancel()
                self._timer = None

    def fire_now(self) -> None:
        """Run the action immediately if one is pending (used at shutdown)."""
        with self._lock:
            pending = self._timer is not None
            if pending:
                self._timer.cancel()
                self._timer = None
        if pending:
            self._action()


def compress(data: bytes) -> bytes:
    """Wrap ``data`` in the blob header and compress the payload."""
    header = BLOB_MAGIC + bytes([BLOB_VERSION, CODEC_ZLIB])
    return header + zlib.compress(data, 6)


def decompress(blob: bytes) -> bytes:
    """Inverse of compress; raises CorruptBlobError on any bad input."""
    if len(blob) < _HEADER_LEN or blob[:4] != BLOB_MAGIC:
        raise CorruptBlobError("bad blob magic")
    version, codec = blob[4], blob[5]
    if version != BLOB_VERSION:
        raise CorruptBlobError(f"unsupported blob version {version}")
    if codec != CODEC_ZLIB:
        raise CorruptBlobError(f"unknown codec id {codec}")
    try:
        return zlib.decompress(blob[_HEADER_LEN:])
    except zlib.error as exc:
        raise CorruptBlobError(f"blob payload corrupt: {exc}") from exc


def _canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def write_meta(root, meta: IndexMeta) -> None:
    index_dir = Path(root) / meta.name
    index_dir.mkdir(parents=True, exist_ok=True)
    text = json.dumps(meta.to_json(), indent=2, sort_keys=True)
    (index_dir / "meta.json").write_text(text, encoding="utf-8")


def save_index(root, meta: IndexMeta, inverted: dict, documents: dict) -> None:
    """Persist meta plus one inverted-index and one doc-store blob per
    type and shard. Existing blobs are overwritten."""
    write_meta(root, meta)
    index_dir = Path(root) / meta.name
    for doc_type in sorted(meta.types):
        type_dir = index_dir / doc_type
        type_dir.mkdir(parents=True, exist_ok=True)
        for shard in range(meta.settings.number_of_shards):
            inv_payload = {
                field: {term: entry.to_pair() for term, entry in terms.items()}
                for field, terms in inverted[doc_type][shard].items()
            }
            docs_payload = documents[doc_type][shard]
            (type_dir / f"inv_{shard}.bin").write_bytes(
                compress(_canonical_json(inv_payload))
            )
            (type_dir / f"docs_{shard}.bin").write_bytes(
                compress(_canonical_json(docs_payload))
            )


def load_index(index_dir) -> tuple[IndexMeta, dict, dict]:
    """Reconstruct (meta, inverted, documents) from one index directory."""
    index_dir = Path(index_dir)
    meta_path = index_dir / "meta.json"
    meta = IndexMeta.from_json(json.loads(meta_path.read_text(encoding="utf-8")))
    inverted: dict = {}
    documents: dict = {}
    for doc_type in sorted(meta.types):
        inverted[doc_type] = {}
        documents[doc_type] = {}
        type_dir = index_dir / doc_type
        for shard in range(meta.settings.number_of_shards):
            inv_raw = decompress((type_dir / f"inv_{shard}.bin").read_bytes())
            docs_raw = decompress((type_dir / f"docs_{shard}.bin").read_bytes())
            inverted[doc_type][shard] = {
                field: {
                    term: PostingEntry.from_pair(pair)
                    for term, pair in terms.items()
                }
                for field, terms in json.loads(inv_raw).items()
            }
            documents[doc_type][shard] = json.loads(docs_raw)
    return meta, inverted, documents


def load_all(root) -> list[tuple[IndexMeta, dict, dict]]:
    """Load every index under ``root``.

    Directories without meta.json are skipped with a warning; an index
    whose blobs are corrupt or missing is rejected (logged as an error)
    while the remaining indices still load.
    """
    root = Path(root)
    loaded = []
    if not root.is_dir():
        return loaded
    for index_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        if not (index_dir / "meta.json").is_file():
            logger.warning("skipping %s: no meta.json", index_dir)
            continue
        try:
            loaded.append(load_index(index_dir))
        except Exception:
            logger.exception("failed to load index at %s; rejecting it", index_dir)
    return loaded
