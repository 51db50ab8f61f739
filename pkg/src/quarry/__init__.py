"""quarry: a small structured search engine.

JSON documents are indexed into per-field, shard-partitioned inverted
indices and queried through a structured DSL (term, match, bool
should/filter, range, boost) ranked by TF-IDF inner-product scoring,
in process or over an Elasticsearch-shaped REST API.
"""

__version__ = "0.1.0"

from .analysis import AnalyzerConfig, analyze
from .engine import Engine, EngineConfig, bootstrap
from .errors import EngineError
from .mapping import IndexMeta, validate_index_request
from .querydsl import parse_query
from .retriever import execute
from .store import Index

__all__ = [
    "AnalyzerConfig",
    "analyze",
    "Engine",
    "EngineConfig",
    "bootstrap",
    "EngineError",
    "IndexMeta",
    "validate_index_request",
    "parse_query",
    "execute",
    "Index",
    "__version__",
]
