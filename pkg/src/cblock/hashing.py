"""Atomic single-attribute hash functions and the enumerated hash space."""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .core import INTEGER, STRING, Record, SchemaTypeError, ValidationError, Value

NULL_KEY = "⟂NULL"

# declaration order doubles as the enumeration (and tie-break) order
KINDS = (
    "identity",
    "prefix",
    "suffix",
    "freq_chars",
    "longest_token",
    "first_name",
    "last_name",
    "round",
    "interval_partition",
)
_LENGTH_KINDS = {"prefix", "suffix", "freq_chars"}
_STRING_ONLY = {"longest_token", "first_name", "last_name"}
_INTEGER_ONLY = {"round"}
ORDERINGS = ("lexicographic", "numeric", "last_name_first")


@dataclass(frozen=True)
class HashSpec:
    id: str
    attribute: str
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown hash kind {self.kind!r}")
        if self.kind in _LENGTH_KINDS and int(self.params.get("K", 0)) < 1:
            raise ValidationError(f"{self.id}: K must be >= 1")
        if self.kind == "round" and int(self.params.get("k", 0)) < 1:
            raise ValidationError(f"{self.id}: k must be >= 1")
        if self.kind == "interval_partition":
            bounds = list(self.params.get("boundaries", ()))
            if not bounds:
                raise ValidationError(f"{self.id}: empty boundary list")
            ordering = self.params.get("ordering", "lexicographic")
            if ordering not in ORDERINGS:
                raise ValidationError(f"{self.id}: unknown ordering {ordering!r}")
            if any(a >= b for a, b in zip(bounds, bounds[1:])):
                raise ValidationError(f"{self.id}: boundaries must be strictly increasing")

    def check(self, schema: Mapping[str, str]) -> None:
        if self.attribute not in schema:
            raise ValidationError(f"{self.id}: attribute {self.attribute!r} not in schema")
        kind = schema[self.attribute]
        if self.kind in _STRING_ONLY and kind != STRING:
            raise SchemaTypeError(f"{self.id}: {self.kind} needs a string attribute")
        if self.kind in _INTEGER_ONLY and kind != INTEGER:
            raise SchemaTypeError(f"{self.id}: {self.kind} needs an integer attribute")

    def to_json(self) -> dict:
        return {"id": self.id, "attribute": self.attribute, "kind": self.kind, "params": dict(self.params)}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "HashSpec":
        return cls(obj["id"], obj["attribute"], obj["kind"], dict(obj.get("params") or {}))


def make_spec(attribute: str, kind: str, param: Optional[int] = None) -> HashSpec:
    if kind in _LENGTH_KINDS:
        return HashSpec(f"{attribute}:{kind}:{param}", attribute, kind, {"K": param})
    if kind == "round":
        return HashSpec(f"{attribute}:round:{param}", attribute, kind, {"k": param})
    return HashSpec(f"{attribute}:{kind}", attribute, kind, {})


def order_key(value: Value, ordering: str):
    """Sort key of an attribute value under a named total ordering."""
    if ordering == "numeric":
        return int(value) if not isinstance(value, str) else float(value)
    text = str(value).upper()
    if ordering == "last_name_first":
        tokens = text.split()
        return " ".join(tokens[-1:] + tokens[:-1])
    return text


def _freq_chars(text: str, k: int) -> str:
    counts = Counter(ch for ch in text if ch.isalnum())
    top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return "".join(sorted(ch for ch, _ in top))


def _longest_token(text: str) -> str:
    best = ""
    for tok in text.split():
        if len(tok) > len(best):
            best = tok
    return best


def hash_value(spec: HashSpec, value: Value) -> str:
    if value is None:
        return NULL_KEY
    kind = spec.kind
    if kind == "round":
        if not isinstance(value, int):
            raise SchemaTypeError(f"{spec.id}: round needs an integer, got {value!r}")
        k = spec.params["k"]
        return str(value - value % k)
    if kind == "interval_partition":
        ordering = spec.params.get("ordering", "lexicographic")
        idx = bisect_right(spec.params["boundaries"], order_key(value, ordering)) - 1
        return str(max(idx, 0))
    if kind in _STRING_ONLY and not isinstance(value, str):
        raise SchemaTypeError(f"{spec.id}: {kind} needs a string, got {value!r}")
    text = value.upper() if isinstance(value, str) else str(value)
    if kind == "identity":
        return text
    if kind == "prefix":
        return text[: spec.params["K"]]
    if kind == "suffix":
        return text[-spec.params["K"]:]
    if kind == "freq_chars":
        return _freq_chars(text, spec.params["K"])
    if kind == "longest_token":
        return _longest_token(text)
    tokens = text.split()
    if not tokens:
        return ""
    return tokens[0] if kind == "first_name" else tokens[-1]


def apply_hash(spec: HashSpec, record: Record) -> str:
    return hash_value(spec, record.get(spec.attribute))


def enumerate_hash_space(
    schema: Mapping[str, str],
    K_values: Sequence[int] = (1, 3, 5),
    k_values: Sequence[int] = (5, 10),
) -> list[HashSpec]:
    """The default space: per string attribute identity, prefix/suffix/freq_chars
    for every K, longest token and first/last name; per integer attribute
    identity and round(k) for every k."""
    if not K_values or not k_values:
        raise ValidationError("K_values and k_values must be non-empty")
    specs = []
    for attr in sorted(schema):
        if schema[attr] == STRING:
            specs.append(make_spec(attr, "identity"))
            for kind in ("prefix", "suffix", "freq_chars"):
                specs.extend(make_spec(attr, kind, K) for K in sorted(K_values))
            specs.extend(make_spec(attr, kind) for kind in ("longest_token", "first_name", "last_name"))
        elif schema[attr] == INTEGER:
            specs.append(make_spec(attr, "identity"))
            specs.extend(make_spec(attr, "round", k) for k in sorted(k_values))
    return specs
