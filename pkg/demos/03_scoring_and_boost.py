"""How scores come together: tf, idf, boost, and clause summation.

Run with: python demos/03_scoring_and_boost.py
"""

from quarry.mapping import validate_index_request
from quarry.querydsl import parse_query
from quarry.retriever import execute, idf
from quarry.store import Index

meta = validate_index_request(
    "notes",
    {"mappings": {"note": {"properties": {"body": {"type": "text"}}}}},
)
index = Index(meta)
index.add("note", {"body": "bomb"}, "n1")
index.add("note", {"body": "bomb bomb defusal"}, "n2")
index.add("note", {"body": "calm meadow"}, "n3")

# The idf weight is 1 + ln((N+1)/(df+1)): a term present in every
# document still contributes (weight 1), a rare term contributes more.
print("idf(df=3, N=3) =", idf(3, 3))
print("idf(df=2, N=3) =", idf(2, 3))
print("idf(df=0, N=3) =", idf(0, 3))

# Per matching term, a document earns boost * tf * idf^2: the query
# vector dimension is boost * idf, the document's is tf * idf.
response = execute(parse_query({"query": {"match": {"body": "bomb"}}}, meta), [(index, ["note"])])
print("\nmatch 'bomb' (tf matters):")
for hit in response.hits:
    print(f"  {hit.doc_id}  score={hit.score:.6f}  body={hit.source['body']!r}")

# Boost multiplies a clause's contribution; bool sums its should clauses.
boosted = {
    "query": {"bool": {"should": [
        {"match": {"body": "defusal"}},
        {"match": {"body": {"query": "meadow", "boost": 2.0}}},
    ]}}
}
response = execute(parse_query(boosted, meta), [(index, ["note"])])
print("\nbool with boosted 'meadow' clause:")
for hit in response.hits:
    print(f"  {hit.doc_id}  score={hit.score:.6f}  body={hit.source['body']!r}")
