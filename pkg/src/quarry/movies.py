"""Movie demo gateway: CSV ingestion and search/recommendation queries.

Translates user-facing parameters (pick a field, type a query, optional
genre and minimum rating) into the engine's structured query DSL, and
builds more-like-this recommendation queries from a movie's own fields,
with genres and plot keywords boosted above cast and director.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

from . import querydsl, retriever
from .engine import Engine
from .errors import NotFoundError, ParseError

logger = logging.getLogger(__name__)

MOVIE_INDEX = "movies"
MOVIE_TYPE = "movie"
SEARCH_FIELDS = ("movie_title", "director_name", "actor_names")

# Columns the ingester needs from an IMDB-5000-style CSV.
REQUIRED_COLUMNS = (
    "movie_title",
    "director_name",
    "actor_1_name",
    "actor_2_name",
    "actor_3_name",
    "genres",
    "plot_keywords",
    "imdb_score",
)

SAMPLE_CSV = Path(__file__).parent / "data" / "movies_sample.csv"

RECOMMEND_BOOSTS = {"genres": 2.0, "plot_keywords": 2.0}


def movie_index_body() -> dict:
    """Settings and mappings for the movies index.

    actor_names and genres use the whitespace analyzer so values keep
    their exact casing and punctuation ("Sci-Fi", "Cheadle") and stay
    addressable by exact term queries.
    """
    return {
        "settings": {"number_of_shards": 2},
        "mappings": {
            MOVIE_TYPE: {
                "properties": {
                    "movie_title": {"type": "text", "analyzer": "standard"},
                    "director_name": {"type": "text", "analyzer": "standard"},
                    "actor_names": {"type": "text", "analyzer": "whitespace"},
                    "genres": {"type": "text", "analyzer": "whitespace"},
                    "plot_keywords": {"type": "text", "analyzer": "standard"},
                    "imdb_score": {"type": "float"},
                }
            }
        },
    }


@dataclass(frozen=True)
class MovieSearchParams:
    """Validated parameters of the movie search form."""

    field: str
    query: str
    genre: str | None = None
    min_score: float | None = None

    def __post_init__(self):
        if self.field not in SEARCH_FIELDS:
            raise ParseError(
                f"'field' must be one of {', '.join(SEARCH_FIELDS)}"
            )
        if not self.query or not self.query.strip():
            raise ParseError("'q' must be a non-empty query string")
        if self.min_score is not None and not 0.0 <= self.min_score <= 10.0:
            raise ParseError("'min_score' must be between 0 and 10")


def parse_movie_row(row: dict) -> dict | None:
    """One CSV row into a movie document; None when the row is unusable."""
    title = (row.get("movie_title") or "").strip()
    if not title:
        return None
    try:
        imdb_score = float((row.get("imdb_score") or "").strip())
    except ValueError:
        return None
    if not 0.0 <= imdb_score <= 10.0:
        return None
    actors = [
        (row.get(col) or "").strip()
        for col in ("actor_1_name", "actor_2_name", "actor_3_name")
    ]
    return {
        "movie_title": title,
        "director_name": (row.get("director_name") or "").strip(),
        "actor_names": [a for a in actors if a],
        "genres": _split_multi(row.get("genres")),
        "plot_keywords": _split_multi(row.get("plot_keywords")),
        "imdb_score": imdb_score,
    }


def _split_multi(cell: str | None) -> list[str]:
    # Kaggle convention: multi-valued cells are "|"-separated.
    if not cell:
        return []
    return [part.strip() for part in cell.split("|") if part.strip()]


def ingest_csv(path, engine: Engine) -> int:
    """Index every well-formed row of a movie CSV; returns rows indexed.

    Creates the movies index when it does not exist yet. Malformed rows
    are skipped and counted in a warning.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in REQUIRED_COLUMNS if col not in header]
        if missing:
            raise ParseError(f"CSV is missing required columns: {missing}")
        try:
            index = engine.index(MOVIE_INDEX)
        except NotFoundError:
            engine.create_index(MOVIE_INDEX, movie_index_body())
            index = engine.index(MOVIE_INDEX)
        indexed = 0
        skipped = 0
        for row in reader:
            doc = parse_movie_row(row)
            if doc is None:
                skipped += 1
                continue
            index.add(MOVIE_TYPE, doc)
            indexed += 1
    if skipped:
        logger.warning("skipped %d malformed rows in %s", skipped, path)
    return indexed


def build_search_query(params: MovieSearchParams) -> dict:
    """Search form parameters into a bool should/filter query body."""
    should = [{"match": {params.field: params.query}}]
    if params.genre:
        should.append({"match": {"genres": params.genre}})
    bool_body: dict = {"should": should}
    if params.min_score is not None:
        bool_body["filter"] = [{"range": {"imdb_score": {"gte": params.min_score}}}]
    return {"query": {"bool": bool_body}}


def build_recommendation_query(movie: dict) -> dict:
    """More-like-this query from a movie's own fields.

    Genres and plot keywords carry boost 2.0; actors and director stay
    at the default weight.
    """
    should: list[dict] = []
    for actor in movie.get("actor_names") or []:
        should.append({"match": {"actor_names": actor}})
    if movie.get("director_name"):
        should.append({"match": {"director_name": movie["director_name"]}})
    for field in ("genres", "plot_keywords"):
        for value in movie.get(field) or []:
            should.append(
                {"match": {field: {"query": value, "boost": RECOMMEND_BOOSTS[field]}}}
            )
    if not should:
        raise ParseError("movie has no fields to recommend from")
    return {"query": {"bool": {"should": should}}}


def search_movies(engine: Engine, params: MovieSearchParams, size: int | None = None) -> dict:
    """Run the search-form query and return the engine response."""
    index = engine.index(MOVIE_INDEX)
    body = build_search_query(params)
    if size is not None:
        body["size"] = size
    ast = querydsl.parse_query(body, index.meta, engine.config.default_size)
    return retriever.execute(ast, [(index, [MOVIE_TYPE])]).to_json()


def recommend_movies(engine: Engine, movie_id: str, size: int | None = None) -> dict:
    """Recommendations for one movie, excluding the movie itself."""
    index = engine.index(MOVIE_INDEX)
    movie = index.get(MOVIE_TYPE, movie_id)
    if movie is None:
        raise NotFoundError(f"no such movie {movie_id!r}")
    wanted = size if size is not None else engine.config.default_size
    body = build_recommendation_query(movie)
    body["size"] = wanted + 1  # room to drop the movie itself
    ast = querydsl.parse_query(body, index.meta, engine.config.default_size)
    response = retriever.execute(ast, [(index, [MOVIE_TYPE])])
    self_matched = any(h.doc_id == movie_id for h in response.hits)
    hits = tuple(h for h in response.hits if h.doc_id != movie_id)[:wanted]
    return retriever.SearchResponse(
        took_ms=response.took_ms,
        total=response.total - 1 if self_matched else response.total,
        max_score=hits[0].score if hits else None,
        hits=hits,
    ).to_json()
