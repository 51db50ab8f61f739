"""JSON query DSL: parsing and validation into a typed AST.

Accepted request bodies (``size`` optional, default 10):

    {"query": {"term":  {field: value}}, "size": n}
    {"query": {"match": {field: value}}}
    {"query": {"match": {field: {"query": value, "boost": b}}}}
    {"query": {"bool": {
        "should": [<term/match leaves>...],
        "filter": [{"range": {field: {"gte": x, "lt": y, ...}}}...]}}}

Bool clauses nest exactly one level: no bool inside bool, no range under
a leaf root. ``must`` is not supported and rejected explicitly.
"""

from dataclasses import dataclass, field as dc_field
from typing import Any

from . import analysis
from .errors import ParseError, UnknownFieldError
from .mapping import IndexMeta

DEFAULT_SIZE = 10

_RANGE_BOUNDS = ("gt", "lt", "gte", "lte")


@dataclass(frozen=True)
class LeafClause:
    """A term or match clause against a single field."""

    kind: str  # "term" | "match"
    field: str
    query: Any
    boost: float = 1.0

    def to_json(self) -> dict:
        return {self.kind: {self.field: {"query": self.query, "boost": self.boost}}}


@dataclass(frozen=True)
class RangeClause:
    """Numeric range predicate: a subset of gt/lt/gte/lte bounds."""

    field: str
    bounds: dict[str, float]

    def to_json(self) -> dict:
        return {"range": {self.field: dict(self.bounds)}}


@dataclass(frozen=True)
class BoolClause:
    """should (OR, scoring) and filter (non-scoring) clause lists."""

    should: tuple[LeafClause, ...] = ()
    filter: tuple[RangeClause, ...] = ()

    def to_json(self) -> dict:
        body: dict[str, Any] = {}
        if self.should:
            body["should"] = [c.to_json() for c in self.should]
        if self.filter:
            body["filter"] = [c.to_json() for c in self.filter]
        return {"bool": body}


@dataclass(frozen=True)
class QueryAst:
    """A parsed query: one leaf or bool root plus the result size."""

    root: LeafClause | BoolClause
    size: int = DEFAULT_SIZE

    def to_json(self) -> dict:
        return {"query": self.root.to_json(), "size": self.size}


def parse_query(body: Any, meta: IndexMeta, default_size: int = DEFAULT_SIZE) -> QueryAst:
    """Parse and validate a search body against an index mapping."""
    if not isinstance(body, dict):
        raise ParseError("search body must be a JSON object")
    unknown = set(body) - {"query", "size"}
    if unknown:
        raise ParseError(f"unsupported top-level keys: {sorted(unknown)}")
    if "query" not in body:
        raise ParseError("search body requires a top-level 'query' object")
    size = body.get("size", default_size)
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise ParseError("'size' must be a positive integer")
    root = _parse_root(body["query"], meta)
    return QueryAst(root=root, size=size)


def _parse_root(query: Any, meta: IndexMeta) -> LeafClause | BoolClause:
    kind, inner = _single_key(query, "query")
    if kind in ("term", "match"):
        return _parse_leaf(kind, inner, meta)
    if kind == "bool":
        return _parse_bool(inner, meta)
    if kind == "range":
        raise ParseError("range is only supported inside a bool filter")
    raise ParseError(f"unknown query clause {kind!r}")


def _parse_bool(body: Any, meta: IndexMeta) -> BoolClause:
    if not isinstance(body, dict):
        raise ParseError("'bool' must be an object")
    unknown = set(body) - {"should", "filter"}
    if unknown:
        raise ParseError(
            f"unsupported bool sections: {sorted(unknown)} "
            "(only 'should' and 'filter' are available)"
        )
    should = []
    for entry in _clause_list(body.get("should", []), "should"):
        kind, inner = _single_key(entry, "should clause")
        if kind == "bool":
            raise ParseError("bool queries nest only one level; no bool inside bool")
        if kind not in ("term", "match"):
            raise ParseError(f"unsupported should clause {kind!r}")
        should.append(_parse_leaf(kind, inner, meta))
    filters = []
    for entry in _clause_list(body.get("filter", []), "filter"):
        kind, inner = _single_key(entry, "filter clause")
        if kind != "range":
            raise ParseError(f"unsupported filter clause {kind!r} (only range)")
        filters.append(_parse_range(inner, meta))
    if not should and not filters:
        raise ParseError("bool query requires at least one should or filter clause")
    return BoolClause(should=tuple(should), filter=tuple(filters))


def _parse_leaf(kind: str, inner: Any, meta: IndexMeta) -> LeafClause:
    field, value = _single_key(inner, kind)
    fm = _lookup_field(field, meta)
    boost = 1.0
    if isinstance(value, dict):
        unknown = set(value) - {"query", "boost"}
        if unknown:
            raise ParseError(f"{kind} clause has unsupported keys: {sorted(unknown)}")
        if "query" not in value:
            raise ParseError(f"{kind} object form requires a 'query' key")
        boost = _check_boost(value.get("boost", 1.0))
        value = value["query"]
    if not _is_scalar(value):
        raise ParseError(f"{kind} query value for {field!r} must be a string or number")
    if fm.is_numeric and not isinstance(value, (int, float)):
        raise ParseError(f"field {field!r} is numeric; query value must be a number")
    return LeafClause(kind=kind, field=field, query=value, boost=boost)


def _parse_range(inner: Any, meta: IndexMeta) -> RangeClause:
    field, bounds = _single_key(inner, "range")
    fm = _lookup_field(field, meta)
    if not fm.is_numeric:
        raise ParseError(f"range filter requires a numeric field, got {field!r}")
    if not isinstance(bounds, dict) or not bounds:
        raise ParseError(f"range on {field!r} requires at least one bound")
    unknown = set(bounds) - set(_RANGE_BOUNDS)
    if unknown:
        raise ParseError(f"unknown range bounds: {sorted(unknown)}")
    for key, value in bounds.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"range bound {key!r} must be a number")
    if "gt" in bounds and "gte" in bounds:
        raise ParseError("range accepts gt or gte, not both")
    if "lt" in bounds and "lte" in bounds:
        raise ParseError("range accepts lt or lte, not both")
    lower = bounds.get("gt", bounds.get("gte"))
    upper = bounds.get("lt", bounds.get("lte"))
    if lower is not None and upper is not None and lower > upper:
        raise ParseError("range lower bound exceeds upper bound")
    return RangeClause(field=field, bounds=dict(bounds))


def analyze_leaf(clause: LeafClause, meta: IndexMeta) -> list[tuple[str, float]]:
    """Expand a leaf clause into (term, weight) pairs.

    Match clauses on text fields run through the field's search
    analyzer; term clauses and non-text fields produce a single exact
    token. The weight of every term is the clause boost.
    """
    fm = meta.fields[clause.field]
    if clause.kind == "match" and fm.datatype == "text":
        _, search_analyzer = analysis.resolve_analyzers(fm)
        tokens = analysis.analyze(search_analyzer, str(clause.query))
    else:
        tokens = [analysis.exact_term(clause.query, fm.datatype)]
    return [(token, clause.boost) for token in tokens if token]


def _lookup_field(field: str, meta: IndexMeta):
    fm = meta.fields.get(field)
    if fm is None:
        raise UnknownFieldError(f"unknown field {field!r}")
    if not fm.index:
        raise UnknownFieldError(f"field {field!r} is not indexed")
    return fm


def _single_key(obj: Any, where: str) -> tuple[str, Any]:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"{where} must be an object with exactly one key")
    return next(iter(obj.items()))


def _check_boost(boost: Any) -> float:
    if not isinstance(boost, (int, float)) or isinstance(boost, bool) or boost <= 0:
        raise ParseError("'boost' must be a positive number")
    return float(boost)


def _is_scalar(value: Any) -> bool:
    return isinstance(value, (str, int, float)) and not isinstance(value, bool)


def _clause_list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"bool {where!r} must be a list")
    return value
