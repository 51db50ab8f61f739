"""Engine runtime: configuration, bootstrap, and the index registry.

The engine loads every persisted index at startup and hands each one a
debounced flush, so indexing and retrieval share a single in-memory
store per index.
"""

import json
import logging
import re
import shutil
import threading
from dataclasses import dataclass
from pathlib import Path

from . import durability
from .errors import ConfigError, ConflictError, MappingError, NotFoundError
from .mapping import IndexMeta, validate_index_request
from .store import Index

logger = logging.getLogger(__name__)

# Names that would collide with fixed API routes.
_RESERVED_INDEX_NAMES = {"app", "apps"}
_INDEX_NAME_RE = re.compile(r"^[a-z0-9][a-z0-9_-]*$")


@dataclass
class EngineConfig:
    """Runtime configuration; mirrors the JSON config file."""

    bind_address: str = "127.0.0.1:9200"
    data_dir: str = "./data"
    debounce_ms: int = 1000
    default_size: int = 10
    static_dir: str | None = None

    def __post_init__(self):
        if self.debounce_ms <= 0:
            raise ConfigError("debounce_ms must be positive")
        if self.default_size <= 0:
            raise ConfigError("default_size must be positive")
        if ":" not in self.bind_address:
            raise ConfigError("bind_address must be host:port")

    @classmethod
    def from_file(cls, path) -> "EngineConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @property
    def host(self) -> str:
        return self.bind_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        try:
            return int(self.bind_address.rsplit(":", 1)[1])
        except ValueError as exc:
            raise ConfigError("bind_address port must be an integer") from exc


class Engine:
    """Composition root: owns the registry of live indices.

    Registry mutations (create/drop) are serialized under one lock;
    lookups read an immutable dict snapshot that is swapped atomically.
    """

    def __init__(self, config: EngineConfig):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self._indices: dict[str, Index] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def load_persisted(self) -> None:
        """Load every index found under the data directory."""
        for meta, inverted, documents in durability.load_all(self.data_dir):
            index = self._wire_index(meta)
            index.inverted = inverted
            index.documents = documents
            index.num_docs = sum(
                len(shard)
                for type_shards in documents.values()
                for shard in type_shards.values()
            )
            self._indices[meta.name] = index
            logger.info(
                "loaded index %r: %d docs, %d shards",
                meta.name,
                index.num_docs,
                meta.settings.number_of_shards,
            )

    def shutdown(self) -> None:
        """Cancel pending debounced flushes and flush everything once."""
        for index in self._indices.values():
            if index.flush_debouncer is not None:
                index.flush_debouncer.cancel()
            index.flush()

    # -- registry ----------------------------------------------------------

    def create_index(self, name: str, body: dict) -> IndexMeta:
        if not _INDEX_NAME_RE.match(name) or name in _RESERVED_INDEX_NAMES:
            raise MappingError(f"invalid index name {name!r}")
        with self._registry_lock:
            if name in self._indices:
                raise ConflictError(f"index {name!r} already exists")
            meta = validate_index_request(name, body)
            index = self._wire_index(meta)
            # Persist the full empty snapshot before acknowledging so a
            # restart always finds a loadable index.
            durability.save_index(
                self.data_dir, meta, index.inverted, index.documents
            )
            indices = dict(self._indices)
            indices[name] = index
            self._indices = indices
        return meta

    def drop_index(self, name: str) -> None:
        with self._registry_lock:
            index = self._indices.get(name)
            if index is None:
                raise NotFoundError(f"no such index {name!r}")
            if index.flush_debouncer is not None:
                index.flush_debouncer.cancel()
            indices = dict(self._indices)
            del indices[name]
            self._indices = indices
        shutil.rmtree(self.data_dir / name, ignore_errors=True)

    def index(self, name: str) -> Index:
        index = self._indices.get(name)
        if index is None:
            raise NotFoundError(f"no such index {name!r}")
        return index

    def indices(self) -> list[Index]:
        return list(self._indices.values())

    def info(self) -> dict:
        from . import __version__

        return {
            "name": "quarry",
            "version": __version__,
            "indices": [
                {
                    "name": index.meta.name,
                    "types": sorted(index.meta.types),
                    "num_docs": index.live_count(),
                }
                for index in sorted(self.indices(), key=lambda i: i.meta.name)
            ],
        }

    # -- internals -----------------------------------------------------------

    def _wire_index(self, meta: IndexMeta) -> Index:
        index = Index(
            meta,
            persist=lambda m, inv, docs: durability.save_index(
                self.data_dir, m, inv, docs
            ),
        )
        index.flush_debouncer = durability.Debouncer(
            index.flush, self.config.debounce_ms
        )
        return index


def bootstrap(config: EngineConfig) -> Engine:
    """Create the data directory, load persisted indices, return the engine."""
    try:
        Path(config.data_dir).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"data_dir {config.data_dir!r} is not usable: {exc}") from exc
    engine = Engine(config)
    engine.load_persisted()
    return engine
