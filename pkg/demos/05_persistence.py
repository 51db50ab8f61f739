"""Snapshots on disk: compressed blobs per type and shard, reloaded at boot.

Run with: python demos/05_persistence.py
"""

import json
import tempfile
from pathlib import Path

from quarry.engine import EngineConfig, bootstrap
from quarry.querydsl import parse_query
from quarry.retriever import execute

data_dir = Path(tempfile.mkdtemp()) / "data"
config = EngineConfig(data_dir=str(data_dir), debounce_ms=60_000)

engine = bootstrap(config)
engine.create_index(
    "library",
    {
        "settings": {"number_of_shards": 2},
        "mappings": {"book": {"properties": {"title": {"type": "text"}}}},
    },
)
index = engine.index("library")
index.add("book", {"title": "Dune"}, "b1")
index.add("book", {"title": "Solaris"}, "b2")
engine.shutdown()  # flushes: meta.json plus inv_/docs_ blobs per shard

print("on-disk layout:")
for path in sorted(data_dir.rglob("*")):
    if path.is_file():
        print(" ", path.relative_to(data_dir), f"({path.stat().st_size} bytes)")

print("\nmeta.json:")
print(json.dumps(json.loads((data_dir / "library" / "meta.json").read_text()), indent=2)[:400])

# A fresh engine finds everything again.
reborn = bootstrap(config)
loaded = reborn.index("library")
ast = parse_query({"query": {"match": {"title": "dune solaris"}}}, loaded.meta)
response = execute(ast, [(loaded, ["book"])])
print("\nafter restart:", [(h.doc_id, h.source["title"]) for h in response.hits])
reborn.shutdown()
