"""Index a handful of documents and run structured queries in process.

Run with: python demos/02_index_and_search.py
"""

import json

from quarry.mapping import validate_index_request
from quarry.querydsl import parse_query
from quarry.retriever import execute
from quarry.store import Index

# An index is declared by its settings (shard count) and typed mappings.
# Nested fields flatten into dotted paths: author.name becomes one field.
meta = validate_index_request(
    "library",
    {
        "settings": {"number_of_shards": 2},
        "mappings": {
            "book": {
                "properties": {
                    "title": {"type": "text"},
                    "author": {
                        "type": "nested",
                        "properties": {"name": {"type": "keyword"}},
                    },
                    "year": {"type": "integer"},
                }
            }
        },
    },
)
print("flattened fields:", sorted(meta.fields))

index = Index(meta)
index.add("book", {"title": "Dune", "author": {"name": "Herbert"}, "year": 1965}, "b1")
index.add("book", {"title": "Dune Messiah", "author": {"name": "Herbert"}, "year": 1969}, "b2")
index.add("book", {"title": "Solaris", "author": {"name": "Lem"}, "year": 1961}, "b3")

# A match query is analyzed ("dune" matches both Dune titles); documents
# containing rarer terms score higher through the idf weight.
for body in [
    {"query": {"match": {"title": "dune"}}},
    {"query": {"term": {"author.name": "Lem"}}},
    {"query": {"bool": {
        "should": [{"match": {"title": "dune solaris"}}],
        "filter": [{"range": {"year": {"gte": 1965}}}],
    }}},
]:
    ast = parse_query(body, meta)
    response = execute(ast, [(index, ["book"])])
    print("\nquery:", json.dumps(body))
    for hit in response.hits:
        print(f"  {hit.doc_id}  score={hit.score:.4f}  {hit.source['title']}")
