"""The REST surface end to end against a live local server.

Run with: python demos/07_http_api.py
"""

import json
import tempfile
import threading
import time

import httpx
import uvicorn

from quarry.api import create_app
from quarry.engine import EngineConfig, bootstrap

engine = bootstrap(EngineConfig(data_dir=tempfile.mkdtemp(), debounce_ms=2000))
server = uvicorn.Server(
    uvicorn.Config(create_app(engine), host="127.0.0.1", port=0, log_level="warning")
)
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.02)
port = server.servers[0].sockets[0].getsockname()[1]
base = f"http://127.0.0.1:{port}"
print("engine listening on", base)

with httpx.Client(base_url=base) as client:
    print("\nGET / ->", client.get("/").json())

    client.put("/zoo", json={
        "mappings": {"animal": {"properties": {
            "name": {"type": "text"},
            "legs": {"type": "integer"},
        }}},
    })
    for name, legs in [("red panda", 4), ("panda", 4), ("ostrich", 2)]:
        client.post("/zoo/animal", json={"name": name, "legs": legs})

    # Elasticsearch-shaped search URLs, body on GET included.
    body = json.dumps({"query": {"bool": {
        "should": [{"match": {"name": "panda"}}],
        "filter": [{"range": {"legs": {"gte": 4}}}],
    }}})
    hits = client.request("GET", "/_search", content=body).json()["hits"]
    print("\nGET /_search for four-legged pandas:")
    for hit in hits["hits"]:
        print(f"  {hit['_score']:.4f}  {hit['_source']}")

server.should_exit = True
engine.shutdown()
