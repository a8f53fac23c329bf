"""Records, datasets, labeled pairs, canopy assignments and recall."""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

STRING = "string"
INTEGER = "integer"
ATTR_TYPES = (STRING, INTEGER)

Value = Union[str, int, None]
Pair = tuple[str, str]


class ValidationError(ValueError):
    """Input data violates a documented invariant."""


class ParseError(ValidationError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaTypeError(ValidationError, TypeError):
    pass


@dataclass(frozen=True)
class Record:
    id: str
    attrs: Mapping[str, Value]

    def get(self, name: str) -> Value:
        return self.attrs.get(name)


@dataclass
class Dataset:
    schema: dict[str, str]
    records: list[Record]
    _index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for name, kind in self.schema.items():
            if kind not in ATTR_TYPES:
                raise ValidationError(f"attribute {name!r}: unknown type {kind!r}")
        index = {}
        for i, rec in enumerate(self.records):
            if not rec.id:
                raise ValidationError(f"record #{i} has an empty id")
            if rec.id in index:
                raise ValidationError(f"duplicate record id {rec.id!r}")
            index[rec.id] = i
            for name, value in rec.attrs.items():
                _check_value(self.schema, name, value, rec.id)
        self._index = index

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __contains__(self, rid: str) -> bool:
        return rid in self._index

    def position(self, rid: str) -> int:
        return self._index[rid]

    def ids(self) -> list[str]:
        return [r.id for r in self.records]


def _check_value(schema: Mapping[str, str], name: str, value: Value, rid: str) -> None:
    if name not in schema:
        raise ValidationError(f"record {rid!r}: attribute {name!r} not in schema")
    if value is None:
        return
    kind = schema[name]
    if kind == INTEGER and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaTypeError(f"record {rid!r}: {name!r} should be integer, got {value!r}")
    if kind == STRING and not isinstance(value, str):
        raise SchemaTypeError(f"record {rid!r}: {name!r} should be string, got {value!r}")


@dataclass(frozen=True)
class TrainingSet:
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.pairs:
            if a == b:
                raise ValidationError(f"self-pair ({a}, {b})")
            key = frozenset((a, b))
            if key in seen:
                raise ValidationError(f"duplicate pair ({a}, {b})")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair], dataset: Optional[Dataset] = None) -> "TrainingSet":
        """Unordered de-duplication, keeping the first orientation seen."""
        seen = set()
        out = []
        for a, b in pairs:
            if a == b:
                raise ValidationError(f"self-pair ({a}, {b})")
            if dataset is not None:
                for rid in (a, b):
                    if rid not in dataset:
                        raise ValidationError(f"unknown record id {rid!r}")
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                out.append((a, b))
        return cls(tuple(out))

    def without(self, drop: Iterable[Pair]) -> "TrainingSet":
        gone = {frozenset(p) for p in drop}
        return TrainingSet(tuple(p for p in self.pairs if frozenset(p) not in gone))


@dataclass
class CanopyAssignment:
    """One record-id -> canopy-id map per disjoint round."""

    rounds: list[dict[str, str]]

    def stats(self, round_index: int = 0) -> "CanopyStats":
        return CanopyStats(dict(Counter(self.rounds[round_index].values())))

    def all_stats(self) -> list["CanopyStats"]:
        return [self.stats(i) for i in range(len(self.rounds))]

    def concat(self, other: "CanopyAssignment") -> "CanopyAssignment":
        return CanopyAssignment(self.rounds + other.rounds)

    def check_covers(self, ids: Iterable[str]) -> None:
        ids = list(ids)
        for r, mapping in enumerate(self.rounds):
            missing = [rid for rid in ids if rid not in mapping]
            if missing:
                raise ValidationError(f"round {r}: {len(missing)} records unassigned, e.g. {missing[0]!r}")


@dataclass
class CanopyStats:
    sizes: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    @property
    def max_size(self) -> int:
        return max(self.sizes.values(), default=0)


def recall(assign: CanopyAssignment, pairs: TrainingSet) -> float:
    """Fraction of pairs co-blocked in at least one round."""
    if len(pairs) == 0:
        raise ValidationError("recall is undefined for an empty training set")
    return len(covered_pairs(assign, pairs)) / len(pairs)


def covered_pairs(assign: CanopyAssignment, pairs: Iterable[Pair]) -> list[Pair]:
    out = []
    for a, b in pairs:
        for mapping in assign.rounds:
            ca = mapping[a]
            if ca == mapping[b]:
                out.append((a, b))
                break
    return out


# ---------------------------------------------------------------- file io

def load_schema(path: Union[str, Path]) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        try:
            schema = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(schema, dict):
        raise ValidationError(f"{path}: schema must be a JSON object")
    return {str(k): str(v) for k, v in schema.items()}


def infer_schema(records: Sequence[Record]) -> dict[str, str]:
    schema: dict[str, str] = {}
    for rec in records:
        for name, value in rec.attrs.items():
            if value is None:
                schema.setdefault(name, STRING)
            elif isinstance(value, int) and not isinstance(value, bool):
                schema[name] = INTEGER
            else:
                schema[name] = STRING
    return schema


def load_dataset(path: Union[str, Path], schema_path: Union[str, Path, None] = None) -> Dataset:
    """Read a JSON-lines dataset; without a schema file types are inferred."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc), lineno) from exc
            if not isinstance(obj, dict) or "id" not in obj:
                raise ParseError("expected an object with an 'id' field", lineno)
            attrs = obj.get("attrs") or {}
            if not isinstance(attrs, dict):
                raise ParseError("'attrs' must be an object", lineno)
            records.append(Record(str(obj["id"]), attrs))
    schema = load_schema(schema_path) if schema_path is not None else infer_schema(records)
    return Dataset(schema, records)


def save_dataset(dataset: Dataset, path: Union[str, Path], schema_path: Union[str, Path, None] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in dataset.records:
            fh.write(json.dumps({"id": rec.id, "attrs": dict(rec.attrs)}, ensure_ascii=False) + "\n")
    if schema_path is not None:
        with open(schema_path, "w", encoding="utf-8") as fh:
            json.dump(dataset.schema, fh, indent=2, sort_keys=True)
            fh.write("\n")


def read_pair_rows(path: Union[str, Path]) -> list[Pair]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 columns, got {len(row)}", lineno)
            rows.append((row[0].strip(), row[1].strip()))
    return rows


def load_pairs(path: Union[str, Path], dataset: Dataset) -> TrainingSet:
    return TrainingSet.from_pairs(read_pair_rows(path), dataset)


def save_pairs(pairs: TrainingSet, path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(pairs.pairs)


def write_assignment(assign: CanopyAssignment, path: Union[str, Path], order: Optional[Sequence[str]] = None) -> None:
    """TSV `record_id, round_index, canopy_id`, one block per round."""
    with open(path, "w", encoding="utf-8") as fh:
        for r, mapping in enumerate(assign.rounds):
            for rid in order if order is not None else mapping:
                fh.write(f"{rid}\t{r}\t{mapping[rid]}\n")


def read_assignment(path: Union[str, Path]) -> CanopyAssignment:
    rounds: list[dict[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected record_id<TAB>round_index<TAB>canopy_id", lineno)
            rid, r, cid = parts
            try:
                r = int(r)
            except ValueError as exc:
                raise ParseError(f"bad round index {r!r}", lineno) from exc
            while len(rounds) <= r:
                rounds.append({})
            rounds[r][rid] = cid
    return CanopyAssignment(rounds)
