"""Shared fixtures: movie corpus, metas, and engine factories."""

import pytest


def pytest_runtest_logreport(report):
    # One PASS/FAIL line per acceptance criterion when run with -s.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        outcome = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"[acceptance] {name}: {outcome}")

from quarry.engine import EngineConfig, bootstrap
from quarry.mapping import validate_index_request
from quarry.movies import MOVIE_TYPE, movie_index_body
from quarry.store import Index

# The compound movie query exercised end to end: six should clauses
# (three of them boosted to 2.0, one an exact term) plus a rating floor.
COMPOUND_MOVIE_QUERY = {
    "query": {
        "bool": {
            "should": [
                {"match": {"director_name": "Shane Black"}},
                {"match": {"plot_keywords": {"query": "human bomb", "boost": 2.0}}},
                {"match": {"actor_names": "Robert Downey Jr."}},
                {"term": {"actor_names": "Cheadle"}},
                {"match": {"genres": {"query": "Action", "boost": 2.0}}},
                {"match": {"genres": {"query": "Sci-Fi", "boost": 2.0}}},
            ],
            "filter": [{"range": {"imdb_score": {"gte": 6.0}}}],
        }
    }
}

MOVIE_FIXTURE = [
    (
        "movie-01",
        {
            "movie_title": "Iron Man 3",
            "director_name": "Shane Black",
            "actor_names": ["Robert Downey Jr.", "Don Cheadle", "Guy Pearce"],
            "genres": ["Action", "Adventure", "Sci-Fi"],
            "plot_keywords": ["extremis", "human bomb", "mandarin"],
            "imdb_score": 7.2,
        },
    ),
    (
        "movie-02",
        {
            "movie_title": "Iron Man",
            "director_name": "Jon Favreau",
            "actor_names": ["Robert Downey Jr.", "Gwyneth Paltrow", "Jeff Bridges"],
            "genres": ["Action", "Adventure", "Sci-Fi"],
            "plot_keywords": ["arc reactor", "billionaire", "superhero"],
            "imdb_score": 7.9,
        },
    ),
    (
        "movie-03",
        {
            "movie_title": "Avengers: Age of Ultron",
            "director_name": "Joss Whedon",
            "actor_names": ["Robert Downey Jr.", "Chris Hemsworth", "Scarlett Johansson"],
            "genres": ["Action", "Adventure", "Sci-Fi"],
            "plot_keywords": ["artificial intelligence", "robot", "superhero"],
            "imdb_score": 7.4,
        },
    ),
    (
        "movie-04",
        {
            "movie_title": "The Nice Guys",
            "director_name": "Shane Black",
            "actor_names": ["Ryan Gosling", "Russell Crowe", "Kim Basinger"],
            "genres": ["Action", "Comedy", "Crime"],
            "plot_keywords": ["detective", "los angeles", "private investigator"],
            "imdb_score": 7.4,
        },
    ),
    (
        "movie-05",
        {
            "movie_title": "Kiss Kiss Bang Bang",
            "director_name": "Shane Black",
            "actor_names": ["Robert Downey Jr.", "Val Kilmer", "Michelle Monaghan"],
            "genres": ["Comedy", "Crime", "Mystery"],
            "plot_keywords": ["actor", "detective", "murder"],
            "imdb_score": 7.6,
        },
    ),
    (
        "movie-06",
        {
            "movie_title": "Sharknado",
            "director_name": "Anthony C. Ferrante",
            "actor_names": ["Ian Ziering", "Tara Reid", "John Heard"],
            "genres": ["Comedy", "Horror", "Sci-Fi"],
            "plot_keywords": ["flood", "shark", "tornado"],
            "imdb_score": 3.3,
        },
    ),
    (
        "movie-07",
        {
            "movie_title": "Batman & Robin",
            "director_name": "Joel Schumacher",
            "actor_names": ["George Clooney", "Arnold Schwarzenegger", "Chris O'Donnell"],
            "genres": ["Action", "Sci-Fi"],
            "plot_keywords": ["batsuit", "ice", "sidekick"],
            "imdb_score": 3.7,
        },
    ),
    (
        "movie-08",
        {
            "movie_title": "The Dark Knight",
            "director_name": "Christopher Nolan",
            "actor_names": ["Christian Bale", "Heath Ledger", "Aaron Eckhart"],
            "genres": ["Action", "Crime", "Drama"],
            "plot_keywords": ["clown", "joker", "vigilante"],
            "imdb_score": 9.0,
        },
    ),
    (
        "movie-09",
        {
            "movie_title": "Speed 2: Cruise Control",
            "director_name": "Jan de Bont",
            "actor_names": ["Sandra Bullock", "Jason Patric", "Willem Dafoe"],
            "genres": ["Action", "Adventure", "Thriller"],
            "plot_keywords": ["bomb", "cruise ship", "hijacker"],
            "imdb_score": 3.8,
        },
    ),
    (
        "movie-10",
        {
            "movie_title": "Gravity",
            "director_name": "Alfonso Cuaron",
            "actor_names": ["Sandra Bullock", "George Clooney", "Ed Harris"],
            "genres": ["Drama", "Sci-Fi", "Thriller"],
            "plot_keywords": ["astronaut", "orbit", "survival"],
            "imdb_score": 7.8,
        },
    ),
]


def movie_meta(num_shards: int = 2):
    body = movie_index_body()
    body["settings"]["number_of_shards"] = num_shards
    return validate_index_request("movies", body)


def build_movie_index(num_shards: int = 2) -> Index:
    index = Index(movie_meta(num_shards))
    for doc_id, doc in MOVIE_FIXTURE:
        index.add(MOVIE_TYPE, doc, doc_id)
    return index


@pytest.fixture
def movie_index() -> Index:
    return build_movie_index()


@pytest.fixture
def engine(tmp_path):
    eng = bootstrap(
        EngineConfig(data_dir=str(tmp_path / "data"), debounce_ms=60_000)
    )
    yield eng
    eng.shutdown()
