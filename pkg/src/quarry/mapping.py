"""Index settings and mappings: validation and flattening.

Nested mappings and documents are rewritten into dotted single-level
field paths ("comment" containing "name" becomes "comment.name"), so the
rest of the engine only ever sees flat field maps.
"""

from dataclasses import dataclass, field as dc_field
from typing import Any

from . import analysis
from .errors import DocumentError, MappingError

DATATYPES = ("integer", "float", "double", "text", "keyword")
NUMERIC_DATATYPES = ("integer", "float", "double")


@dataclass(frozen=True)
class IndexSettings:
    """Per-index settings; shard count is immutable after creation."""

    number_of_shards: int = 1

    def __post_init__(self):
        if not isinstance(self.number_of_shards, int) or isinstance(
            self.number_of_shards, bool
        ):
            raise MappingError("number_of_shards must be an integer")
        if self.number_of_shards < 1:
            raise MappingError("number_of_shards must be >= 1")


@dataclass(frozen=True)
class FieldMapping:
    """One flattened field: dotted path, datatype, analyzers, index flag.

    ``analyzer``/``search_analyzer`` are resolved analyzer names and are
    only set for text fields.
    """

    path: str
    datatype: str
    analyzer: str | None = None
    search_analyzer: str | None = None
    index: bool = True

    @property
    def is_numeric(self) -> bool:
        return self.datatype in NUMERIC_DATATYPES


@dataclass(frozen=True)
class IndexMeta:
    """An index's name, settings, flattened fields, and declared types."""

    name: str
    settings: IndexSettings = dc_field(default_factory=IndexSettings)
    fields: dict[str, FieldMapping] = dc_field(default_factory=dict)
    types: frozenset[str] = frozenset()

    def to_json(self) -> dict:
        fields = {}
        for path in sorted(self.fields):
            fm = self.fields[path]
            entry: dict[str, Any] = {"type": fm.datatype, "index": fm.index}
            if fm.datatype == "text":
                entry["analyzer"] = fm.analyzer
                entry["search_analyzer"] = fm.search_analyzer
            fields[path] = entry
        return {
            "name": self.name,
            "settings": {"number_of_shards": self.settings.number_of_shards},
            "types": sorted(self.types),
            "fields": fields,
        }

    @classmethod
    def from_json(cls, data: dict) -> "IndexMeta":
        fields = {}
        for path, entry in data["fields"].items():
            fields[path] = FieldMapping(
                path=path,
                datatype=entry["type"],
                analyzer=entry.get("analyzer"),
                search_analyzer=entry.get("search_analyzer"),
                index=entry.get("index", True),
            )
        return cls(
            name=data["name"],
            settings=IndexSettings(data["settings"]["number_of_shards"]),
            fields=fields,
            types=frozenset(data["types"]),
        )


def flatten_mapping(properties: dict, prefix: str = "") -> dict[str, FieldMapping]:
    """Flatten one mapping tree into ``{dotted_path: FieldMapping}``.

    Nested fields are expanded into their dotted children and never
    appear themselves. Defaults are filled in: analyzer "standard",
    search_analyzer falling back to analyzer, index true.
    """
    if not isinstance(properties, dict):
        raise MappingError("'properties' must be an object")
    out: dict[str, FieldMapping] = {}
    for name, body in properties.items():
        if not isinstance(name, str) or not name:
            raise MappingError("field names must be non-empty strings")
        if "." in name:
            # Dot is reserved for path concatenation.
            raise MappingError(f"field name {name!r} must not contain '.'")
        if not isinstance(body, dict):
            raise MappingError(f"field {name!r}: mapping must be an object")
        path = f"{prefix}.{name}" if prefix else name
        datatype = body.get("type")
        if datatype == "nested":
            children = body.get("properties")
            if not isinstance(children, dict) or not children:
                raise MappingError(
                    f"nested field {path!r} must declare child 'properties'"
                )
            out.update(flatten_mapping(children, path))
            continue
        if datatype not in DATATYPES:
            raise MappingError(f"field {path!r}: unknown datatype {datatype!r}")
        analyzer = body.get("analyzer")
        search_analyzer = body.get("search_analyzer")
        if datatype != "text" and (analyzer or search_analyzer):
            raise MappingError(
                f"field {path!r}: analyzer is only valid on text fields"
            )
        if datatype == "text":
            analyzer = analyzer or "standard"
            search_analyzer = search_analyzer or analyzer
            for candidate in (analyzer, search_analyzer):
                if candidate not in analysis.ANALYZER_NAMES:
                    raise MappingError(
                        f"field {path!r}: unknown analyzer {candidate!r}"
                    )
        index_flag = body.get("index", True)
        if not isinstance(index_flag, bool):
            raise MappingError(f"field {path!r}: 'index' must be a boolean")
        out[path] = FieldMapping(
            path=path,
            datatype=datatype,
            analyzer=analyzer,
            search_analyzer=search_analyzer,
            index=index_flag,
        )
    return out


def merge_field_maps(maps: list[dict[str, FieldMapping]]) -> dict[str, FieldMapping]:
    """Merge per-type field maps, rejecting duplicate or ambiguous paths."""
    merged: dict[str, FieldMapping] = {}
    for field_map in maps:
        for path, fm in field_map.items():
            if path in merged:
                raise MappingError(f"duplicate field path {path!r}")
            merged[path] = fm
    # A leaf path must never also be a dotted prefix of another leaf.
    paths = sorted(merged)
    for i, path in enumerate(paths):
        for other in paths[i + 1 :]:
            if other.startswith(path + "."):
                raise MappingError(
                    f"field path {path!r} conflicts with nested path {other!r}"
                )
            if not other.startswith(path):
                break
    return merged


def validate_index_request(name: str, body: dict) -> IndexMeta:
    """Validate a create-index body (settings + mappings) into IndexMeta."""
    if not isinstance(body, dict):
        raise MappingError("request body must be a JSON object")
    settings_body = body.get("settings", {})
    if not isinstance(settings_body, dict):
        raise MappingError("'settings' must be an object")
    settings = IndexSettings(settings_body.get("number_of_shards", 1))
    mappings = body.get("mappings")
    if not isinstance(mappings, dict) or not mappings:
        raise MappingError("'mappings' must be a non-empty object of types")
    field_maps = []
    for type_name, type_body in mappings.items():
        if not isinstance(type_name, str) or not type_name:
            raise MappingError("type names must be non-empty strings")
        if not isinstance(type_body, dict) or "properties" not in type_body:
            raise MappingError(f"type {type_name!r} must declare 'properties'")
        field_maps.append(flatten_mapping(type_body["properties"]))
    fields = merge_field_maps(field_maps)
    return IndexMeta(
        name=name,
        settings=settings,
        fields=fields,
        types=frozenset(mappings),
    )


def flatten_document(doc: dict, meta: IndexMeta) -> list[tuple[str, Any]]:
    """Flatten a document into (dotted path, leaf value) pairs.

    Array values yield one pair per element. Fields absent from the
    mapping produce no pairs (they live only in the stored source).
    Null values are skipped. A value whose type contradicts the mapped
    datatype raises DocumentError.
    """
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    pairs: list[tuple[str, Any]] = []
    _walk_document(doc, "", meta.fields, pairs)
    return pairs


def _walk_document(node, path, fields, out):
    if isinstance(node, dict):
        if path in fields:
            raise DocumentError(
                f"field {path!r}: expected {fields[path].datatype}, got object"
            )
        for key, value in node.items():
            child = f"{path}.{key}" if path else str(key)
            _walk_document(value, child, fields, out)
        return
    if isinstance(node, list):
        for element in node:
            _walk_document(element, path, fields, out)
        return
    if path not in fields:
        return  # unmapped leaf: stored in _source, never indexed
    if node is None:
        return
    _check_datatype(node, fields[path])
    out.append((path, node))


def _check_datatype(value, fm: FieldMapping) -> None:
    kind = fm.datatype
    if kind == "integer":
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif kind in ("float", "double"):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    else:  # text, keyword
        ok = isinstance(value, str)
    if not ok:
        raise DocumentError(
            f"field {fm.path!r}: expected {kind}, got {type(value).__name__}"
        )
