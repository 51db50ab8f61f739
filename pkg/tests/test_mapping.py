"""Mapping flattening, validation, and document flattening."""

from collections import Counter

import pytest

from quarry.errors import DocumentError, MappingError
from quarry.mapping import (
    FieldMapping,
    IndexMeta,
    IndexSettings,
    flatten_document,
    flatten_mapping,
    validate_index_request,
)


def meta_for(properties, name="idx", shards=1, type_name="doc"):
    return validate_index_request(
        name,
        {
            "settings": {"number_of_shards": shards},
            "mappings": {type_name: {"properties": properties}},
        },
    )


def test_nested_field_flattens_to_dotted_path():
    fields = flatten_mapping(
        {"comment": {"type": "nested", "properties": {"name": {"type": "text"}}}}
    )
    assert list(fields) == ["comment.name"]
    assert fields["comment.name"].datatype == "text"


def test_flat_text_field_gets_defaults():
    fields = flatten_mapping({"title": {"type": "text"}})
    fm = fields["title"]
    assert fm.analyzer == "standard"
    assert fm.search_analyzer == "standard"
    assert fm.index is True


def test_three_level_nesting_flattens_to_single_entry():
    fields = flatten_mapping(
        {
            "a": {
                "type": "nested",
                "properties": {
                    "b": {
                        "type": "nested",
                        "properties": {"c": {"type": "keyword"}},
                    }
                },
            }
        }
    )
    assert list(fields) == ["a.b.c"]
    assert fields["a.b.c"].datatype == "keyword"


def test_flattening_already_flat_mapping_is_identity():
    properties = {
        "title": {"type": "text", "analyzer": "whitespace"},
        "year": {"type": "integer", "index": False},
    }
    once = flatten_mapping(properties)
    again = flatten_mapping(
        {
            path: {
                "type": fm.datatype,
                "index": fm.index,
                **({"analyzer": fm.analyzer, "search_analyzer": fm.search_analyzer}
                   if fm.datatype == "text" else {}),
            }
            for path, fm in once.items()
        }
    )
    assert once == again


def test_unknown_datatype_rejected():
    with pytest.raises(MappingError):
        flatten_mapping({"f": {"type": "geo_point"}})


def test_analyzer_on_non_text_field_rejected():
    with pytest.raises(MappingError):
        flatten_mapping({"f": {"type": "integer", "analyzer": "standard"}})


def test_dotted_field_name_rejected():
    with pytest.raises(MappingError):
        flatten_mapping({"a.b": {"type": "text"}})


def test_nested_without_properties_rejected():
    with pytest.raises(MappingError):
        flatten_mapping({"a": {"type": "nested"}})


def test_unknown_search_analyzer_rejected():
    with pytest.raises(MappingError):
        flatten_mapping({"f": {"type": "text", "search_analyzer": "nope"}})


def test_duplicate_path_across_types_rejected():
    with pytest.raises(MappingError):
        validate_index_request(
            "idx",
            {
                "mappings": {
                    "a": {"properties": {"f": {"type": "text"}}},
                    "b": {"properties": {"f": {"type": "keyword"}}},
                }
            },
        )


def test_leaf_conflicting_with_nested_prefix_rejected():
    with pytest.raises(MappingError):
        validate_index_request(
            "idx",
            {
                "mappings": {
                    "a": {"properties": {"c": {"type": "text"}}},
                    "b": {
                        "properties": {
                            "c": {
                                "type": "nested",
                                "properties": {"d": {"type": "text"}},
                            }
                        }
                    },
                }
            },
        )


def test_validate_request_reads_shards():
    meta = validate_index_request(
        "idx",
        {
            "settings": {"number_of_shards": 2},
            "mappings": {"doc": {"properties": {"title": {"type": "text"}}}},
        },
    )
    assert meta.settings.number_of_shards == 2
    assert meta.types == frozenset({"doc"})


def test_validate_request_defaults_to_one_shard():
    meta = validate_index_request(
        "idx", {"mappings": {"doc": {"properties": {"t": {"type": "text"}}}}}
    )
    assert meta.settings.number_of_shards == 1


@pytest.mark.parametrize("shards", [0, -1, "2", 1.5])
def test_invalid_shard_count_rejected(shards):
    with pytest.raises(MappingError):
        validate_index_request(
            "idx",
            {
                "settings": {"number_of_shards": shards},
                "mappings": {"doc": {"properties": {"t": {"type": "text"}}}},
            },
        )


@pytest.mark.parametrize("body", [None, [], "x", {}, {"settings": {}}, {"mappings": []}])
def test_malformed_body_rejected(body):
    with pytest.raises(MappingError):
        validate_index_request("idx", body)


# -- document flattening ----------------------------------------------------


def test_nested_document_flattens_to_dotted_pair():
    meta = meta_for(
        {"comment": {"type": "nested", "properties": {"name": {"type": "text"}}}}
    )
    assert flatten_document({"comment": {"name": "bob"}}, meta) == [
        ("comment.name", "bob")
    ]


def test_flat_document_passes_through():
    meta = meta_for({"title": {"type": "text"}})
    assert flatten_document({"title": "x"}, meta) == [("title", "x")]


def test_array_values_expand_per_element():
    meta = meta_for({"actor_names": {"type": "text"}})
    assert flatten_document({"actor_names": ["A", "B"]}, meta) == [
        ("actor_names", "A"),
        ("actor_names", "B"),
    ]


def test_array_of_nested_objects_expands():
    meta = meta_for(
        {"comments": {"type": "nested", "properties": {"name": {"type": "keyword"}}}}
    )
    doc = {"comments": [{"name": "a"}, {"name": "b"}]}
    assert flatten_document(doc, meta) == [
        ("comments.name", "a"),
        ("comments.name", "b"),
    ]


def test_wrong_datatype_rejected():
    meta = meta_for({"year": {"type": "integer"}})
    with pytest.raises(DocumentError):
        flatten_document({"year": "not a number"}, meta)
    with pytest.raises(DocumentError):
        flatten_document({"year": True}, meta)


def test_object_in_scalar_field_rejected():
    meta = meta_for({"title": {"type": "text"}})
    with pytest.raises(DocumentError):
        flatten_document({"title": {"x": 1}}, meta)


def test_unmapped_fields_produce_no_pairs():
    meta = meta_for({"title": {"type": "text"}})
    assert flatten_document({"title": "x", "extra": 99}, meta) == [("title", "x")]


def test_null_values_skipped():
    meta = meta_for({"title": {"type": "text"}})
    assert flatten_document({"title": None}, meta) == []


def test_flatten_round_trip_preserves_leaf_multiset():
    meta = meta_for(
        {
            "a": {
                "type": "nested",
                "properties": {
                    "b": {"type": "keyword"},
                    "c": {"type": "integer"},
                },
            },
            "tags": {"type": "keyword"},
        }
    )
    doc = {"a": [{"b": "x", "c": 1}, {"b": "y", "c": 2}], "tags": ["t1", "t2", "t1"]}
    pairs = flatten_document(doc, meta)
    expected = Counter(
        [("a.b", "x"), ("a.c", 1), ("a.b", "y"), ("a.c", 2),
         ("tags", "t1"), ("tags", "t2"), ("tags", "t1")]
    )
    assert Counter(pairs) == expected


def test_meta_json_round_trip():
    meta = meta_for(
        {
            "title": {"type": "text", "analyzer": "n_gram"},
            "year": {"type": "integer", "index": False},
        },
        shards=3,
    )
    assert IndexMeta.from_json(meta.to_json()) == meta


def test_settings_validation():
    assert IndexSettings().number_of_shards == 1
    with pytest.raises(MappingError):
        IndexSettings(0)


def test_field_mapping_is_numeric():
    assert FieldMapping("f", "double").is_numeric
    assert not FieldMapping("f", "keyword").is_numeric
