import pytest
from hypothesis import given
from hypothesis import strategies as st

from cblock.core import Record, SchemaTypeError, ValidationError
from cblock.hashing import NULL_KEY, HashSpec, apply_hash, enumerate_hash_space, hash_value, make_spec


def rec(**attrs):
    return Record("r", attrs)


@pytest.mark.parametrize("spec,value,key", [
    (make_spec("title", "prefix", 3), "Titanic", "TIT"),
    (make_spec("year", "round", 10), 1994, "1990"),
    (make_spec("title", "longest_token"), "The Dark Knight", "KNIGHT"),
    (make_spec("title", "suffix", 3), "Titanic", "NIC"),
    (make_spec("title", "prefix", 5), "Up", "UP"),
    (make_spec("title", "suffix", 5), "Up", "UP"),
    (make_spec("title", "identity"), "Up", "UP"),
    (make_spec("year", "identity"), 1994, "1994"),
    (make_spec("director", "first_name"), "Akira Kurosawa", "AKIRA"),
    (make_spec("director", "last_name"), "Akira Kurosawa", "KUROSAWA"),
    (make_spec("title", "longest_token"), "ab cd ef", "AB"),
    (make_spec("title", "freq_chars", 2), "banana", "AN"),
    (make_spec("title", "freq_chars", 3), "Abba cd", "ABC"),
    (make_spec("year", "round", 5), 1999, "1995"),
])
def test_hash_values(spec, value, key):
    assert hash_value(spec, value) == key


@pytest.mark.parametrize("spec", enumerate_hash_space({"t": "string", "y": "integer"}))
def test_null_key(spec):
    assert apply_hash(spec, rec()) == NULL_KEY


def test_interval_partition_lookup():
    spec = HashSpec("y:ip", "year", "interval_partition", {"boundaries": [1900, 1951], "ordering": "numeric"})
    assert hash_value(spec, 1994) == "1"
    assert hash_value(spec, 1900) == "0"
    assert hash_value(spec, 1800) == "0"
    assert hash_value(spec, None) == NULL_KEY
    one = HashSpec("y:one", "year", "interval_partition", {"boundaries": [1900], "ordering": "numeric"})
    assert {hash_value(one, y) for y in (1, 1900, 5000)} == {"0"}


@pytest.mark.parametrize("kind,param", [("prefix", 0), ("round", 0), ("freq_chars", -1)])
def test_bad_params(kind, param):
    with pytest.raises(ValidationError):
        make_spec("a", kind, param)


def test_unsorted_boundaries():
    with pytest.raises(ValidationError):
        HashSpec("x", "a", "interval_partition", {"boundaries": [3, 1]})


def test_type_mismatch():
    with pytest.raises(SchemaTypeError):
        make_spec("title", "round", 10).check({"title": "string"})
    with pytest.raises(SchemaTypeError):
        make_spec("year", "longest_token").check({"year": "integer"})
    with pytest.raises(SchemaTypeError):
        hash_value(make_spec("year", "round", 10), "1994")


def test_space_counts():
    assert len(enumerate_hash_space({"title": "string"}, (1, 3, 5), (5, 10))) == 13
    assert [s.id for s in enumerate_hash_space({"year": "integer"}, (1, 3, 5), (5, 10))] == [
        "year:identity", "year:round:5", "year:round:10",
    ]
    assert enumerate_hash_space({}) == []


def test_space_order_and_ids_stable():
    space = enumerate_hash_space({"z": "integer", "a": "string"}, (3, 1), (10,))
    ids = [s.id for s in space]
    assert ids[0] == "a:identity" and ids[1] == "a:prefix:1" and ids[-1] == "z:round:10"
    assert len(set(ids)) == len(ids)


def test_spec_json_roundtrip():
    for spec in enumerate_hash_space({"t": "string", "y": "integer"}):
        assert HashSpec.from_json(spec.to_json()) == spec


texts = st.text(alphabet="abcXYZ 12", max_size=12)


@given(texts, st.integers(1, 6))
def test_prefix_refinement(value, K):
    longer, shorter = make_spec("t", "prefix", K + 1), make_spec("t", "prefix", K)
    other = value[::-1]
    if hash_value(longer, value) == hash_value(longer, other):
        assert hash_value(shorter, value) == hash_value(shorter, other)


@given(st.lists(texts, min_size=1, max_size=15), st.sampled_from(enumerate_hash_space({"t": "string"})))
def test_hash_partitions_records(values, spec):
    keys = [hash_value(spec, v) for v in values]
    assert keys == [hash_value(spec, v) for v in values]
    groups = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    assert sorted(i for g in groups.values() for i in g) == list(range(len(values)))


@given(st.integers(-10_000, 10_000), st.integers(1, 50))
def test_round_is_floor_multiple(x, k):
    key = int(hash_value(make_spec("y", "round", k), x))
    assert key % k == 0 and key <= x < key + k
