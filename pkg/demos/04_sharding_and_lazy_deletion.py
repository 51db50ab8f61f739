"""Shard routing by id hash, and deletion that defers the purge to flush.

Run with: python demos/04_sharding_and_lazy_deletion.py
"""

from quarry.mapping import validate_index_request
from quarry.store import Index, shard_of

meta = validate_index_request(
    "inbox",
    {
        "settings": {"number_of_shards": 4},
        "mappings": {"msg": {"properties": {"text": {"type": "text"}}}},
    },
)
index = Index(meta)

# Each id hashes (FNV-1a 64) to a fixed shard, stable across restarts.
for doc_id in ("m1", "m2", "m3", "m4", "m5"):
    index.add("msg", {"text": f"message {doc_id}"}, doc_id)
    print(f"{doc_id} -> shard {shard_of(doc_id, 4)}")

# Deleting only marks. The document stays on disk and in memory until a
# flush rebuilds the stores; reads already treat it as gone.
print("\ndelete m3:", index.delete("msg", "m3"))
print("get m3 after delete:", index.get("msg", "m3"))
print("delete m3 again (already marked):", index.delete("msg", "m3"))
print("physically present pre-flush:", "m3" in index.documents["msg"][shard_of("m3", 4)])

index.flush()
print("physically present post-flush:", "m3" in index.documents["msg"][shard_of("m3", 4)])
print("num_docs:", index.num_docs)
