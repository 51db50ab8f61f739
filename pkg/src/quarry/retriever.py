"""Query execution: TF-IDF inner-product scoring over the shared stores.

For a leaf clause, the query vector holds one dimension per distinct
term with value boost * idf(term); a document's vector holds
tf(term, doc) * idf(term). The document score is the inner product,

    score(doc) = sum over matching terms of boost * tf * idf^2,

and a bool query sums the leaf scores over its should clauses before
non-scoring range filters prune the candidates.
"""

import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass

from .errors import NotFoundError
from .querydsl import BoolClause, LeafClause, QueryAst, RangeClause, analyze_leaf
from .store import Index, shard_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchHit:
    index: str
    doc_type: str
    doc_id: str
    score: float
    source: dict

    def to_json(self) -> dict:
        return {
            "_index": self.index,
            "_type": self.doc_type,
            "_id": self.doc_id,
            "_score": self.score,
            "_source": self.source,
        }


@dataclass(frozen=True)
class SearchResponse:
    took_ms: int
    total: int
    max_score: float | None
    hits: tuple[SearchHit, ...]

    def to_json(self) -> dict:
        return {
            "took": self.took_ms,
            "hits": {
                "total": self.total,
                "max_score": self.max_score,
                "hits": [hit.to_json() for hit in self.hits],
            },
        }


def idf(df: int, n_docs: int) -> float:
    """Smoothed inverse document frequency: 1 + ln((N + 1) / (df + 1)).

    Strictly positive and defined at df = 0; collapses to exactly 1.0
    when every document contains the term.
    """
    return 1.0 + math.log((n_docs + 1) / (df + 1))


def score_leaf(index: Index, doc_type: str, clause: LeafClause) -> dict[str, float]:
    """Per-document scores for one leaf clause. Caller holds the read lock.

    Documents marked for deletion are excluded; documents matching no
    query term are absent from the result.
    """
    n_docs = index.live_count(doc_type)
    scores: defaultdict[str, float] = defaultdict(float)
    seen: set[str] = set()
    for term, weight in analyze_leaf(clause, index.meta):
        if term in seen:
            continue  # one vector dimension per distinct term
        seen.add(term)
        term_idf = idf(index.doc_frequency(doc_type, clause.field, term), n_docs)
        for doc_id, tf in index.postings(doc_type, clause.field, term):
            scores[doc_id] += weight * tf * term_idf * term_idf
    return {
        doc_id: score
        for doc_id, score in scores.items()
        if not index.is_deleted(doc_type, doc_id)
    }


def range_matches(clause: RangeClause, value) -> bool:
    """Whether a single numeric value satisfies every bound of the clause."""
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        logger.warning(
            "range filter on %r ignoring non-numeric value %r", clause.field, value
        )
        return False
    bounds = clause.bounds
    if "gt" in bounds and not value > bounds["gt"]:
        return False
    if "gte" in bounds and not value >= bounds["gte"]:
        return False
    if "lt" in bounds and not value < bounds["lt"]:
        return False
    if "lte" in bounds and not value <= bounds["lte"]:
        return False
    return True


def values_at_path(source: dict, path: str) -> list:
    """Leaf values found under a dotted path, descending through lists."""
    nodes = [source]
    for part in path.split("."):
        next_nodes = []
        for node in nodes:
            if isinstance(node, list):
                node_items = node
            else:
                node_items = [node]
            for item in node_items:
                if isinstance(item, dict) and part in item:
                    next_nodes.append(item[part])
        nodes = next_nodes
    leaves = []
    stack = list(nodes)
    while stack:
        node = stack.pop()
        if isinstance(node, list):
            stack.extend(node)
        else:
            leaves.append(node)
    return leaves


def filter_accepts(clause: RangeClause, source: dict) -> bool:
    """A document passes when any value at the field path matches; a
    missing field never matches."""
    return any(range_matches(clause, v) for v in values_at_path(source, clause.field))


def execute(ast: QueryAst, scopes: list[tuple[Index, list[str]]]) -> SearchResponse:
    """Run a parsed query over (index, types) scopes and rank the hits.

    Each scope is scored with its own document count and document
    frequencies; hits merge into one list sorted by (score desc, id asc).
    """
    started = time.perf_counter()
    hits: list[SearchHit] = []
    for index, doc_types in scopes:
        with index.lock.read():
            for doc_type in doc_types:
                if doc_type not in index.meta.types:
                    raise NotFoundError(
                        f"type {doc_type!r} is not mapped in index {index.meta.name!r}"
                    )
                hits.extend(_scope_hits(index, doc_type, ast.root))
    hits.sort(key=lambda h: (-h.score, h.doc_id, h.index, h.doc_type))
    top = tuple(hits[: ast.size])
    took_ms = int((time.perf_counter() - started) * 1000)
    return SearchResponse(
        took_ms=took_ms,
        total=len(hits),
        max_score=top[0].score if top else None,
        hits=top,
    )


def _scope_hits(index: Index, doc_type: str, root) -> list[SearchHit]:
    if isinstance(root, LeafClause):
        scores = score_leaf(index, doc_type, root)
    else:
        scores = _score_bool(index, doc_type, root)
    name = index.meta.name
    out = []
    for doc_id, score in scores.items():
        out.append(SearchHit(name, doc_type, doc_id, score, _source_of(index, doc_type, doc_id)))
    return out


def _score_bool(index: Index, doc_type: str, root: BoolClause) -> dict[str, float]:
    if root.should:
        scores: defaultdict[str, float] = defaultdict(float)
        for clause in root.should:
            for doc_id, score in score_leaf(index, doc_type, clause).items():
                scores[doc_id] += score
        candidates = dict(scores)
    else:
        # Filter-only bool: every live document passes through at 1.0.
        candidates = {doc_id: 1.0 for doc_id in index.live_ids(doc_type)}
    if not root.filter:
        return candidates
    surviving = {}
    for doc_id, score in candidates.items():
        source = _source_of(index, doc_type, doc_id)
        if all(filter_accepts(clause, source) for clause in root.filter):
            surviving[doc_id] = score
    return surviving


def _source_of(index: Index, doc_type: str, doc_id: str) -> dict:
    return index.documents[doc_type][shard_of(doc_id, index.num_shards)][doc_id]
