"""The movie demo: ingest the bundled CSV, search, and recommend.

Run with: python demos/06_movies.py
"""

import tempfile

from quarry.engine import EngineConfig, bootstrap
from quarry.movies import (
    SAMPLE_CSV,
    MovieSearchParams,
    ingest_csv,
    recommend_movies,
    search_movies,
)

engine = bootstrap(EngineConfig(data_dir=tempfile.mkdtemp(), debounce_ms=60_000))
count = ingest_csv(SAMPLE_CSV, engine)
print(f"indexed {count} movies from {SAMPLE_CSV.name}")

# The search form: pick a field, type a query, optionally constrain
# genre and minimum IMDb score.
params = MovieSearchParams(
    field="director_name", query="Shane Black", genre="Action", min_score=6.0
)
response = search_movies(engine, params)
print("\nsearch: director 'Shane Black', genre Action, score >= 6.0")
for hit in response["hits"]["hits"]:
    src = hit["_source"]
    print(f"  {src['imdb_score']:>4}  {src['movie_title']}  {src['genres']}")

# Recommendations reuse the engine: the selected movie's actors,
# director, genres, and plot keywords become a boosted bool query.
top_id = response["hits"]["hits"][0]["_id"]
top_title = response["hits"]["hits"][0]["_source"]["movie_title"]
recs = recommend_movies(engine, top_id, size=5)
print(f"\nbecause you liked {top_title!r}:")
for hit in recs["hits"]["hits"]:
    src = hit["_source"]
    print(f"  {hit['_score']:>7.3f}  {src['movie_title']}  {src['genres']}")
engine.shutdown()
