"""Command line entry points: serve the engine, ingest movie CSVs."""

import argparse
import logging
import sys

from .engine import EngineConfig, bootstrap
from .errors import ConfigError

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_DATA_DIR_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quarry")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the search engine HTTP server")
    serve.add_argument("--config", help="JSON config file mirroring EngineConfig")
    serve.add_argument("--bind", help="host:port to bind (default 127.0.0.1:9200)")
    serve.add_argument("--data-dir", help="directory for persisted indices")
    serve.add_argument("--static-dir", help="directory of UI assets served at /app")

    ingest = sub.add_parser("ingest", help="index a movie CSV through a running engine")
    ingest.add_argument("--csv", required=True, help="path to an IMDB-5000-style CSV")
    ingest.add_argument("--url", required=True, help="base URL of the engine")
    return parser


def _load_config(args) -> EngineConfig:
    config = EngineConfig.from_file(args.config) if args.config else EngineConfig()
    overrides = {}
    if args.bind:
        overrides["bind_address"] = args.bind
    if args.data_dir:
        overrides["data_dir"] = args.data_dir
    if args.static_dir:
        overrides["static_dir"] = args.static_dir
    if overrides:
        fields = {
            name: getattr(config, name) for name in config.__dataclass_fields__
        }
        fields.update(overrides)
        config = EngineConfig(**fields)
    return config


def serve(args) -> int:
    import uvicorn

    from .api import create_app

    try:
        config = _load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        engine = bootstrap(config)
    except ConfigError as exc:
        print(f"data dir error: {exc}", file=sys.stderr)
        return EXIT_DATA_DIR_ERROR
    app = create_app(engine)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    finally:
        engine.shutdown()
    return EXIT_OK


def ingest(args) -> int:
    """Ingest a CSV into a running engine over HTTP."""
    import csv

    import httpx

    from .errors import ParseError
    from .movies import (
        MOVIE_INDEX,
        MOVIE_TYPE,
        REQUIRED_COLUMNS,
        movie_index_body,
        parse_movie_row,
    )

    base = args.url.rstrip("/")
    with httpx.Client(base_url=base, timeout=30.0) as client:
        created = client.put(f"/{MOVIE_INDEX}", json=movie_index_body())
        if created.status_code not in (200, 400):  # 400: already exists
            print(f"index creation failed: {created.text}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        indexed = 0
        skipped = 0
        try:
            with open(args.csv, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                header = reader.fieldnames or []
                missing = [c for c in REQUIRED_COLUMNS if c not in header]
                if missing:
                    raise ParseError(f"CSV is missing required columns: {missing}")
                for row in reader:
                    doc = parse_movie_row(row)
                    if doc is None:
                        skipped += 1
                        continue
                    client.post(f"/{MOVIE_INDEX}/{MOVIE_TYPE}", json=doc).raise_for_status()
                    indexed += 1
        except (OSError, ParseError) as exc:
            print(f"ingest failed: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
    print(f"indexed {indexed} movies ({skipped} rows skipped)")
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return serve(args)
    if args.command == "ingest":
        return ingest(args)
    return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
