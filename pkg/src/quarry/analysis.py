"""Text analyzers: turn field values and query strings into index terms.

Four analyzers are available:

- ``standard``: split on word boundaries, lowercase, drop English stopwords.
- ``whitespace``: split on whitespace runs, case preserved.
- ``simple``: split on anything that is not a letter, lowercase.
- ``n_gram``: whitespace-split, then emit character n-grams of each token.
"""

import re
from dataclasses import dataclass

from .errors import AnalysisError

# The classic 33-word English stopword list.
DEFAULT_STOPWORDS = frozenset(
    "a an and are as at be but by for if in into is it no not of on or "
    "such that the their then there these they this to was will with".split()
)

ANALYZER_NAMES = ("standard", "whitespace", "simple", "n_gram")

# Maximal runs of alphanumerics (underscore excluded, Unicode-aware).
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class AnalyzerConfig:
    """Analyzer selection plus its tuning knobs.

    ``min_gram``/``max_gram`` apply to ``n_gram`` only; the smallest
    allowed gram size is 3. ``stopwords`` applies to ``standard`` only.
    """

    name: str = "standard"
    min_gram: int = 3
    max_gram: int = 3
    stopwords: frozenset[str] = DEFAULT_STOPWORDS

    def __post_init__(self):
        if self.name not in ANALYZER_NAMES:
            raise AnalysisError(f"unknown analyzer {self.name!r}")
        if not (3 <= self.min_gram <= self.max_gram):
            raise AnalysisError(
                f"invalid gram sizes: need 3 <= min_gram <= max_gram, "
                f"got min_gram={self.min_gram}, max_gram={self.max_gram}"
            )


def config_for(name: str) -> AnalyzerConfig:
    """Default AnalyzerConfig for an analyzer name; rejects unknown names."""
    return AnalyzerConfig(name=name)


def analyze(config: AnalyzerConfig, text: str) -> list[str]:
    """Tokenize ``text`` into an ordered list of non-empty terms."""
    if config.name == "standard":
        tokens = [m.group(0).lower() for m in _WORD_RE.finditer(text)]
        return [t for t in tokens if t not in config.stopwords]
    if config.name == "whitespace":
        return text.split()
    if config.name == "simple":
        return [run.lower() for run in _letter_runs(text)]
    if config.name == "n_gram":
        return _ngrams(config, text)
    raise AnalysisError(f"unknown analyzer {config.name!r}")


def _letter_runs(text: str) -> list[str]:
    runs: list[str] = []
    current: list[str] = []
    for ch in text:
        if ch.isalpha():
            current.append(ch)
        elif current:
            runs.append("".join(current))
            current = []
    if current:
        runs.append("".join(current))
    return runs


def _ngrams(config: AnalyzerConfig, text: str) -> list[str]:
    out: list[str] = []
    for token in text.split():
        if len(token) < config.min_gram:
            # Too short to gram: emit whole.
            out.append(token)
            continue
        for size in range(config.min_gram, config.max_gram + 1):
            for start in range(len(token) - size + 1):
                out.append(token[start : start + size])
    return out


def resolve_analyzers(field) -> tuple[AnalyzerConfig, AnalyzerConfig]:
    """(index analyzer, search analyzer) configs for a text field mapping.

    The search analyzer falls back to the index analyzer, which itself
    defaults to "standard". Keyword and numeric fields bypass analysis
    entirely and never reach this function.
    """
    index_name = field.analyzer or "standard"
    search_name = field.search_analyzer or index_name
    return config_for(index_name), config_for(search_name)


def exact_term(value, datatype: str) -> str:
    """Single unanalyzed token for keyword and numeric values.

    Numbers are canonicalized per the field datatype so that the same
    token is produced at index time and query time (6 and 6.0 both map
    to "6.0" in a float field).
    """
    if datatype == "integer":
        return str(int(value))
    if datatype in ("float", "double"):
        return repr(float(value))
    return value if isinstance(value, str) else repr(value)
