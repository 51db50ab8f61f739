"""HTTP layer: Elasticsearch-shaped routes over one engine instance.

Three controllers share the app: service info at the root, index
creation/deletion at /{index}, and document CRUD plus search under
/{index}/{type}. The movie demo gateway lives under /apps/movies and an
optional static UI is mounted at /app.
"""

import json
import logging
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from starlette.exceptions import HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import movies, querydsl, retriever
from .engine import Engine
from .errors import DocumentError, EngineError, NotFoundError, ParseError, UnknownFieldError

logger = logging.getLogger(__name__)


def _error_body(error_type: str, reason: str) -> dict:
    return {"error": {"type": error_type, "reason": reason}}


async def _read_json(request: Request):
    try:
        return json.loads(await request.body())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"request body is not valid JSON: {exc}") from exc


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="quarry", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        return JSONResponse(
            _error_body(exc.error_type, str(exc)), status_code=exc.status
        )

    @app.exception_handler(HTTPException)
    async def http_error_handler(request: Request, exc: HTTPException):
        return JSONResponse(
            _error_body("http_error", str(exc.detail)), status_code=exc.status_code
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            _error_body("bad_request", str(exc.errors())), status_code=400
        )

    @app.exception_handler(Exception)
    async def unexpected_error_handler(request: Request, exc: Exception):
        logger.exception("unhandled error on %s %s", request.method, request.url.path)
        return JSONResponse(
            _error_body("internal_error", "unexpected engine error"), status_code=500
        )

    # -- info controller -------------------------------------------------

    @app.get("/")
    async def info():
        return engine.info()

    # -- search: global, per index, per type -----------------------------

    @app.api_route("/_search", methods=["GET", "POST"])
    async def search_all(request: Request):
        body = await _read_json(request)
        return _global_search(engine, body)

    # -- movie demo gateway ----------------------------------------------

    @app.get("/apps/movies/search")
    async def movie_search(
        field: str, q: str, genre: str | None = None,
        min_score: float | None = None, size: int | None = None,
    ):
        params = movies.MovieSearchParams(
            field=field, query=q, genre=genre, min_score=min_score
        )
        return movies.search_movies(engine, params, size)

    @app.get("/apps/movies/{movie_id}/recommend")
    async def movie_recommend(movie_id: str, size: int | None = None):
        return movies.recommend_movies(engine, movie_id, size)

    # -- index controller -------------------------------------------------

    @app.put("/{index}")
    async def create_index(index: str, request: Request):
        body = await _read_json(request)
        engine.create_index(index, body)
        return {"acknowledged": True, "index": index}

    @app.delete("/{index}")
    async def delete_index(index: str):
        engine.drop_index(index)
        return {"acknowledged": True}

    @app.api_route("/{index}/_search", methods=["GET", "POST"])
    async def search_index(index: str, request: Request):
        body = await _read_json(request)
        idx = engine.index(index)
        ast = querydsl.parse_query(body, idx.meta, engine.config.default_size)
        scopes = [(idx, sorted(idx.meta.types))]
        return retriever.execute(ast, scopes).to_json()

    # -- index query controller: documents --------------------------------

    @app.post("/{index}/{doc_type}", status_code=201)
    async def add_document(index: str, doc_type: str, request: Request):
        doc = await _read_json(request)
        if not isinstance(doc, dict):
            raise DocumentError("document must be a JSON object")
        doc_id = engine.index(index).add(doc_type, doc)
        return {
            "_index": index,
            "_type": doc_type,
            "_id": doc_id,
            "result": "created",
        }

    @app.api_route("/{index}/{doc_type}/_search", methods=["GET", "POST"])
    async def search_type(index: str, doc_type: str, request: Request):
        body = await _read_json(request)
        idx = engine.index(index)
        if doc_type not in idx.meta.types:
            raise NotFoundError(f"type {doc_type!r} is not mapped in index {index!r}")
        ast = querydsl.parse_query(body, idx.meta, engine.config.default_size)
        return retriever.execute(ast, [(idx, [doc_type])]).to_json()

    @app.put("/{index}/{doc_type}/{doc_id}")
    async def put_document(index: str, doc_type: str, doc_id: str, request: Request):
        doc = await _read_json(request)
        if not isinstance(doc, dict):
            raise DocumentError("document must be a JSON object")
        _, created = engine.index(index).update(doc_type, doc_id, doc)
        body = {
            "_index": index,
            "_type": doc_type,
            "_id": doc_id,
            "result": "created" if created else "updated",
        }
        return JSONResponse(body, status_code=201 if created else 200)

    @app.get("/{index}/{doc_type}/{doc_id}")
    async def get_document(index: str, doc_type: str, doc_id: str):
        source = engine.index(index).get(doc_type, doc_id)
        if source is None:
            return JSONResponse({"found": False}, status_code=404)
        return {"found": True, "_source": source}

    @app.delete("/{index}/{doc_type}/{doc_id}")
    async def delete_document(index: str, doc_type: str, doc_id: str):
        if not engine.index(index).delete(doc_type, doc_id):
            raise NotFoundError(
                f"document {doc_id!r} does not exist or is already marked for deletion"
            )
        return {"result": "deleted"}

    static_dir = engine.config.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    return app


def _global_search(engine: Engine, body) -> dict:
    """Search every index and type; merge hits by score.

    Indices whose mapping does not know the queried fields are skipped;
    a malformed query body is an error regardless of mappings.
    """
    ast = None
    scopes = []
    grammar_error: ParseError | None = None
    for index in sorted(engine.indices(), key=lambda i: i.meta.name):
        try:
            parsed = querydsl.parse_query(body, index.meta, engine.config.default_size)
        except UnknownFieldError:
            continue
        except ParseError as exc:
            grammar_error = exc
            break
        ast = ast or parsed
        scopes.append((index, sorted(index.meta.types)))
    if grammar_error is not None:
        raise grammar_error
    if ast is None:
        return retriever.SearchResponse(0, 0, None, ()).to_json()
    return retriever.execute(ast, scopes).to_json()
