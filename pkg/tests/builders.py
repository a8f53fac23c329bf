"""Small fixtures built by hand or drawn at random for the tests."""

import random

from cblock.core import Dataset, Record, TrainingSet
from cblock.hashing import make_spec


def make_dataset(rows, schema=None):
    """rows: list of (id, attrs) tuples; schema inferred when not given."""
    records = [Record(rid, attrs) for rid, attrs in rows]
    if schema is None:
        schema = {}
        for _, attrs in rows:
            for k, v in attrs.items():
                if v is not None:
                    schema[k] = "integer" if isinstance(v, int) else "string"
                else:
                    schema.setdefault(k, "string")
    return Dataset(schema, records)


def random_instance(rng: random.Random, n_max=20, attrs=("a", "b", "c", "d"), alphabet="xyz"):
    """Random small string dataset, identity specs over its attributes, and pairs."""
    n = rng.randint(4, n_max)
    rows = [(f"r{i:02d}", {a: rng.choice(alphabet) for a in attrs}) for i in range(n)]
    ds = make_dataset(rows, {a: "string" for a in attrs})
    ids = ds.ids()
    pairs = {frozenset(rng.sample(ids, 2)) for _ in range(rng.randint(1, n))}
    ts = TrainingSet(tuple(tuple(sorted(p)) for p in sorted(pairs, key=sorted)))
    specs = [make_spec(a, "identity") for a in attrs]
    return ds, ts, specs
