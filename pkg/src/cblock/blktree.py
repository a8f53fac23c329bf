"""Disjoint blocking functions: BlkTrees, their restricted forms, and applying them.

Learners work on integer-coded hash keys (one numpy array per hash spec,
computed once per dataset by :class:`KeyTable`), so every candidate split is a
handful of vectorised group-bys. Greedy scores are compared as exact
fractions.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core import CanopyAssignment, CanopyStats, Dataset, Pair, Record, TrainingSet, ValidationError
from .hashing import HashSpec, apply_hash

OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"
EXPECTED = "expected"
STRATEGIES = (OPTIMISTIC, PESSIMISTIC, EXPECTED)
LANGUAGES = ("random", "single", "chain", "chaintree", "blktree")


@dataclass(frozen=True)
class BuildLimits:
    max_depth: int = 16
    # None disables the rejection of hashes with many oversized children
    max_oversized_children: Optional[int] = 8


# ------------------------------------------------------------------ scoring

def combine_elim(broken: int, oversized: Iterable[tuple[int, int]], S: int, strategy: str) -> Fraction:
    """Elimination score from the number of broken pairs and the
    (size, pairs inside) of every child canopy larger than ``S``."""
    if strategy == OPTIMISTIC:
        return Fraction(broken)
    score = Fraction(broken)
    for size, inside in oversized:
        if strategy == PESSIMISTIC:
            score += inside
        elif strategy == EXPECTED:
            parts = -(-size // S)
            score += Fraction(inside * (parts - 1), parts)
        else:
            raise ValidationError(f"unknown strategy {strategy!r}")
    return score


def elim_count(
    canopy: Iterable[Record],
    pairs: Iterable[Pair],
    spec: HashSpec,
    S: int,
    strategy: str = OPTIMISTIC,
) -> Fraction:
    """Score of splitting ``canopy`` with ``spec``; lower is better."""
    if S < 1:
        raise ValidationError("S must be >= 1")
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}")
    key_of = {rec.id: apply_hash(spec, rec) for rec in canopy}
    sizes: dict[str, int] = {}
    for key in key_of.values():
        sizes[key] = sizes.get(key, 0) + 1
    broken = 0
    inside: dict[str, int] = {}
    for a, b in pairs:
        if key_of[a] != key_of[b]:
            broken += 1
        else:
            inside[key_of[a]] = inside.get(key_of[a], 0) + 1
    oversized = [(n, inside.get(k, 0)) for k, n in sizes.items() if n > S]
    return combine_elim(broken, oversized, S, strategy)


# --------------------------------------------------------------- key table

class KeyTable:
    """Integer-coded hash keys of every record, per spec, computed lazily."""

    def __init__(self, dataset: Dataset, space: Sequence[HashSpec]):
        self.dataset = dataset
        self.space = list(space)
        self.by_id = {s.id: s for s in self.space}
        self._codes: dict[str, np.ndarray] = {}
        self._keys: dict[str, list[str]] = {}
        for spec in self.space:
            spec.check(dataset.schema)

    def codes(self, spec_id: str) -> np.ndarray:
        if spec_id not in self._codes:
            spec = self.by_id[spec_id]
            lookup: dict[str, int] = {}
            keys: list[str] = []
            out = np.empty(len(self.dataset), dtype=np.int64)
            for i, rec in enumerate(self.dataset.records):
                key = apply_hash(spec, rec)
                code = lookup.get(key)
                if code is None:
                    code = lookup[key] = len(keys)
                    keys.append(key)
                out[i] = code
            self._codes[spec_id] = out
            self._keys[spec_id] = keys
        return self._codes[spec_id]

    def key(self, spec_id: str, code: int) -> str:
        keys = self._keys.get(spec_id)
        if keys is None:
            self.codes(spec_id)
            keys = self._keys[spec_id]
        return keys[code]

    def n_keys(self, spec_id: str) -> int:
        self.codes(spec_id)
        return len(self._keys[spec_id])

    def pair_positions(self, pairs: Iterable[Pair]) -> tuple[np.ndarray, np.ndarray]:
        pos = self.dataset.position
        plist = list(pairs)
        pa = np.fromiter((pos(a) for a, _ in plist), dtype=np.int64, count=len(plist))
        pb = np.fromiter((pos(b) for _, b in plist), dtype=np.int64, count=len(plist))
        return pa, pb


# ------------------------------------------------------------------- model

@dataclass
class BlkNode:
    hash: str
    children: dict[str, "BlkNode"] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"hash": self.hash, "children": {k: self.children[k].to_json() for k in sorted(self.children)}}

    @classmethod
    def from_json(cls, obj: dict) -> "BlkNode":
        return cls(obj["hash"], {k: cls.from_json(v) for k, v in (obj.get("children") or {}).items()})

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children.values()), default=0)

    def paths(self, prefix: tuple[str, ...] = ()) -> Iterable[tuple[str, ...]]:
        """Hash-id sequence of every root-to-node path."""
        here = prefix + (self.hash,)
        yield here
        for child in self.children.values():
            yield from child.paths(here)


@dataclass
class BlockingModel:
    language: str
    max_size: int
    seed: int = 42
    root: Optional[BlkNode] = None
    specs: list[HashSpec] = field(default_factory=list)
    chain: list[str] = field(default_factory=list)
    build_size: Optional[int] = None
    fallback: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.language not in LANGUAGES:
            raise ValidationError(f"unknown language {self.language!r}")
        if self.max_size < 1:
            raise ValidationError("max_size must be >= 1")
        self._spec_map = {s.id: s for s in self.specs}

    @property
    def spec_map(self) -> dict[str, HashSpec]:
        return self._spec_map

    def height(self) -> int:
        if self.language == "chain":
            return len(self.chain)
        return self.root.height() if self.root is not None else 0

    def to_json(self) -> dict:
        obj = {
            "language": self.language,
            "max_size": self.max_size,
            "seed": self.seed,
            "root": self.root.to_json() if self.root is not None else None,
            "specs": [s.to_json() for s in self.specs],
            "fallback": list(self.fallback),
        }
        if self.language == "chain":
            obj["chain"] = list(self.chain)
        if self.build_size is not None and self.build_size != self.max_size:
            obj["build_size"] = self.build_size
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "BlockingModel":
        return cls(
            language=obj["language"],
            max_size=int(obj["max_size"]),
            seed=int(obj.get("seed", 42)),
            root=BlkNode.from_json(obj["root"]) if obj.get("root") else None,
            specs=[HashSpec.from_json(s) for s in obj.get("specs", [])],
            chain=list(obj.get("chain", [])),
            build_size=obj.get("build_size"),
            fallback=list(obj.get("fallback", [])),
        )


def _used_specs(space: Sequence[HashSpec], ids: Iterable[str]) -> list[HashSpec]:
    ids = set(ids)
    return [s for s in space if s.id in ids]


def _tree_spec_ids(node: Optional[BlkNode]) -> set[str]:
    if node is None:
        return set()
    out = {node.hash}
    for child in node.children.values():
        out |= _tree_spec_ids(child)
    return out


def render(path: Sequence[tuple[str, str]]) -> str:
    return "/".join(f"{h}={k}" for h, k in path)


# ---------------------------------------------------------------- learners

def _require_space(space: Sequence[HashSpec]) -> None:
    if not space:
        raise ValidationError("hash space is empty")


def _require_size(S: int) -> None:
    if S < 1:
        raise ValidationError("S must be >= 1")


def _table(dataset: Dataset, space: Sequence[HashSpec], table: Optional[KeyTable]) -> KeyTable:
    if table is not None and table.dataset is dataset:
        missing = [s for s in space if s.id not in table.by_id]
        if not missing:
            return table
    return KeyTable(dataset, space)


@dataclass
class _Split:
    score: Fraction
    uniq: np.ndarray
    counts: np.ndarray


class _Grower:
    def __init__(self, table: KeyTable, space, S, strategy, limits, pa, pb):
        self.table = table
        self.space = list(space)
        self.S = S
        self.strategy = strategy
        self.limits = limits
        self.pa = pa
        self.pb = pb
        self.fallback: list[str] = []

    def evaluate(self, spec_id: str, idx: np.ndarray, pidx: np.ndarray) -> Optional[_Split]:
        codes = self.table.codes(spec_id)
        uniq, counts = np.unique(codes[idx], return_counts=True)
        if len(uniq) < 2:
            return None
        big = counts > self.S
        cap = self.limits.max_oversized_children
        if cap is not None and int(big.sum()) > cap:
            return None
        ca = codes[self.pa[pidx]]
        cb = codes[self.pb[pidx]]
        same = ca == cb
        broken = int(len(pidx) - same.sum())
        oversized = []
        if self.strategy != OPTIMISTIC and big.any():
            inside = np.bincount(np.searchsorted(uniq, ca[same]), minlength=len(uniq))
            oversized = [(int(n), int(p)) for n, p in zip(counts[big], inside[big])]
        return _Split(combine_elim(broken, oversized, self.S, self.strategy), uniq, counts)

    def grow(self, idx, pidx, used: frozenset, depth: int, path: tuple) -> Optional[BlkNode]:
        best_id, best = None, None
        for spec in self.space:
            if spec.id in used:
                continue
            split = self.evaluate(spec.id, idx, pidx)
            if split is not None and (best is None or split.score < best.score):
                best_id, best = spec.id, split
        if best is None:
            self.fallback.append(render(path))
            return None
        node = BlkNode(best_id)
        codes = self.table.codes(best_id)
        node_codes = codes[idx]
        pair_codes = codes[self.pa[pidx]]
        pair_same = pair_codes == codes[self.pb[pidx]]
        for code in best.uniq[best.counts > self.S]:
            key = self.table.key(best_id, int(code))
            child_path = path + ((best_id, key),)
            if depth >= self.limits.max_depth:
                self.fallback.append(render(child_path))
                continue
            child = self.grow(
                idx[node_codes == code],
                pidx[pair_same & (pair_codes == code)],
                used | {best_id},
                depth + 1,
                child_path,
            )
            if child is not None:
                node.children[key] = child
        return node


def build_blktree(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    strategy: str = OPTIMISTIC,
    limits: Optional[BuildLimits] = None,
    seed: int = 42,
    build_factor: int = 1,
    table: Optional[KeyTable] = None,
) -> BlockingModel:
    """Greedy recursive BlkTree: every node larger than the bound takes the
    eligible hash with the lowest elimination score; oversized children recurse."""
    _require_space(space)
    _require_size(S)
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}")
    if build_factor < 1:
        raise ValidationError("build_factor must be >= 1")
    limits = limits or BuildLimits()
    bound = max(1, S // build_factor)
    table = _table(dataset, space, table)
    pa, pb = table.pair_positions(pairs)
    root = None
    fallback: list[str] = []
    if len(dataset) > bound and limits.max_depth >= 1:
        grower = _Grower(table, space, bound, strategy, limits, pa, pb)
        root = grower.grow(np.arange(len(dataset)), np.arange(len(pa)), frozenset(), 1, ())
        fallback = grower.fallback
    return BlockingModel(
        "blktree", S, seed, root, _used_specs(space, _tree_spec_ids(root)),
        build_size=bound, fallback=fallback,
    )


def build_single_hash(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    seed: int = 42,
    table: Optional[KeyTable] = None,
    **_ignored,
) -> BlockingModel:
    """Best single hash by pairs kept inside canopies of size <= S."""
    _require_space(space)
    _require_size(S)
    if len(dataset) <= S:
        return BlockingModel("single", S, seed)
    table = _table(dataset, space, table)
    pa, pb = table.pair_positions(pairs)
    best_id, best_cov = None, -1
    for spec in space:
        codes = table.codes(spec.id)
        sizes = np.bincount(codes)
        ca = codes[pa]
        ok = (ca == codes[pb]) & (sizes[ca] <= S)
        cov = int(ok.sum())
        if cov > best_cov:
            best_id, best_cov = spec.id, cov
    return BlockingModel("single", S, seed, BlkNode(best_id), _used_specs(space, [best_id]))


def _refine(cur: np.ndarray, codes: np.ndarray, n_keys: int) -> np.ndarray:
    _, inv = np.unique(cur * n_keys + codes, return_inverse=True)
    return inv.reshape(-1)


def _oversized_mass(groups: np.ndarray, S: int) -> int:
    sizes = np.bincount(groups)
    return int(sizes[sizes > S].sum())


def _score_refinement(new, pa, pb, was_same, S, strategy) -> Fraction:
    now_same = new[pa] == new[pb]
    broken = int((was_same & ~now_same).sum())
    if strategy == OPTIMISTIC:
        return Fraction(broken)
    sizes = np.bincount(new)
    inside = np.bincount(new[pa][now_same], minlength=len(sizes))
    big = np.nonzero(sizes > S)[0]
    return combine_elim(broken, zip(sizes[big].tolist(), inside[big].tolist()), S, strategy)


def build_chain(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    strategy: str = OPTIMISTIC,
    limits: Optional[BuildLimits] = None,
    seed: int = 42,
    table: Optional[KeyTable] = None,
    **_ignored,
) -> BlockingModel:
    """Greedy conjunction applied to every canopy regardless of its size."""
    _require_space(space)
    _require_size(S)
    limits = limits or BuildLimits()
    table = _table(dataset, space, table)
    pa, pb = table.pair_positions(pairs)
    cur = np.zeros(len(dataset), dtype=np.int64)
    chain: list[str] = []
    while len(chain) < limits.max_depth:
        mass = _oversized_mass(cur, S)
        if mass == 0:
            break
        was_same = cur[pa] == cur[pb]
        best = None
        for spec in space:
            if spec.id in chain:
                continue
            new = _refine(cur, table.codes(spec.id), table.n_keys(spec.id))
            if _oversized_mass(new, S) >= mass:
                continue
            score = _score_refinement(new, pa, pb, was_same, S, strategy)
            if best is None or score < best[0]:
                best = (score, spec.id, new)
        if best is None:
            break
        chain.append(best[1])
        cur = best[2]
    return BlockingModel("chain", S, seed, None, _used_specs(space, chain), chain=chain)


def build_chain_tree(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    strategy: str = OPTIMISTIC,
    limits: Optional[BuildLimits] = None,
    seed: int = 42,
    table: Optional[KeyTable] = None,
    **_ignored,
) -> BlockingModel:
    """One hash per level, applied only to canopies still larger than S."""
    _require_space(space)
    _require_size(S)
    limits = limits or BuildLimits()
    table = _table(dataset, space, table)
    pa, pb = table.pair_positions(pairs)
    n = len(dataset)
    # group id per record; -1 once a record has settled in a small canopy
    group = np.zeros(n, dtype=np.int64) if n > S else np.full(n, -1, dtype=np.int64)
    # per active group: (parent node, key) it hangs from, None for the root
    anchors: list[Optional[tuple[BlkNode, str]]] = [None]
    root: Optional[BlkNode] = None
    chain: list[str] = []
    while len(chain) < limits.max_depth and (group >= 0).any():
        active = np.nonzero(group >= 0)[0]
        g = group[active]
        mass = len(active)
        pin = (group[pa] >= 0) & (group[pa] == group[pb])
        local = np.full(n, -1, dtype=np.int64)
        local[active] = np.arange(len(active))
        qa, qb = local[pa[pin]], local[pb[pin]]
        still = np.ones(len(qa), dtype=bool)
        best = None
        for spec in space:
            if spec.id in chain:
                continue
            codes = table.codes(spec.id)
            _, inv = np.unique(g * table.n_keys(spec.id) + codes[active], return_inverse=True)
            inv = inv.reshape(-1)
            if _oversized_mass(inv, S) >= mass:
                continue
            score = _score_refinement(inv, qa, qb, still, S, strategy)
            if best is None or score < best[0]:
                best = (score, spec.id)
        if best is None:
            break
        spec_id = best[1]
        chain.append(spec_id)
        codes = table.codes(spec_id)
        nodes = []
        for anchor in anchors:
            node = BlkNode(spec_id)
            if anchor is None:
                root = node
            else:
                anchor[0].children[anchor[1]] = node
            nodes.append(node)
        combo = g * table.n_keys(spec_id) + codes[active]
        uniq, inv, counts = np.unique(combo, return_inverse=True, return_counts=True)
        inv = inv.reshape(-1)
        new_group = np.full(n, -1, dtype=np.int64)
        new_anchors = []
        for j in np.nonzero(counts > S)[0]:
            parent = int(uniq[j] // table.n_keys(spec_id))
            key = table.key(spec_id, int(uniq[j] % table.n_keys(spec_id)))
            new_group[active[inv == j]] = len(new_anchors)
            new_anchors.append((nodes[parent], key))
        group, anchors = new_group, new_anchors
    fallback = []
    if root is not None and anchors:
        # render the unresolved oversized canopies by walking their records
        seen = set()
        for pos in np.nonzero(group >= 0)[0]:
            cid = _walk_tree(root, {s.id: s for s in space}, dataset.records[pos])
            if cid not in seen:
                seen.add(cid)
                fallback.append(cid)
    elif root is None and n > S:
        fallback.append("")
    return BlockingModel("chaintree", S, seed, root, _used_specs(space, chain), fallback=fallback)


def build_random(dataset: Dataset, S: int, seed: int = 42, **_ignored) -> BlockingModel:
    _require_size(S)
    return BlockingModel("random", S, seed)


def learn(
    language: str,
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    strategy: str = OPTIMISTIC,
    limits: Optional[BuildLimits] = None,
    seed: int = 42,
    table: Optional[KeyTable] = None,
    build_factor: int = 1,
) -> BlockingModel:
    """Dispatch to the learner for ``language``."""
    if language == "random":
        return build_random(dataset, S, seed)
    if language == "single":
        return build_single_hash(dataset, pairs, space, S, seed=seed, table=table)
    if language == "chain":
        return build_chain(dataset, pairs, space, S, strategy, limits, seed, table)
    if language == "chaintree":
        return build_chain_tree(dataset, pairs, space, S, strategy, limits, seed, table)
    if language == "blktree":
        return build_blktree(dataset, pairs, space, S, strategy, limits, seed, build_factor, table)
    raise ValidationError(f"unknown language {language!r}")


# ------------------------------------------------------------------- apply

def _walk_tree(root: Optional[BlkNode], specs: dict[str, HashSpec], record: Record) -> str:
    parts = []
    node = root
    while node is not None:
        spec = specs[node.hash]
        key = apply_hash(spec, record)
        parts.append(f"{node.hash}={key}")
        node = node.children.get(key)
    return "/".join(parts)


def canopy_key(model: BlockingModel, record: Record) -> str:
    """Canopy of one record before any random splitting of oversized canopies."""
    specs = model.spec_map
    if model.language == "chain":
        return "/".join(f"{h}={apply_hash(specs[h], record)}" for h in model.chain)
    return _walk_tree(model.root, specs, record)


def _check_attrs(model: BlockingModel, dataset: Dataset) -> None:
    for spec in model.specs:
        if spec.attribute not in dataset.schema:
            raise ValidationError(f"model hash {spec.id} needs attribute {spec.attribute!r}, absent from the data")
        spec.check(dataset.schema)


def _adaptive_keys(model: BlockingModel, records: Sequence[Record]) -> list[str]:
    """Level-synchronous walk that stops descending once a group fits."""
    specs = model.spec_map
    out = [""] * len(records)
    frontier = [(model.root, (), list(range(len(records))))]
    while frontier:
        nxt = []
        for node, path, members in frontier:
            if node is None or len(members) <= model.max_size:
                label = render(path)
                for i in members:
                    out[i] = label
                continue
            groups: dict[str, list[int]] = {}
            spec = specs[node.hash]
            for i in members:
                groups.setdefault(apply_hash(spec, records[i]), []).append(i)
            for key, sub in groups.items():
                nxt.append((node.children.get(key), path + ((node.hash, key),), sub))
        frontier = nxt
    return out


def _table_keys(model: BlockingModel, table: KeyTable) -> list[str]:
    """Same canopy keys as :func:`canopy_key`, grouped through cached codes."""
    n = len(table.dataset)
    labels = [""] * n
    if model.language == "chain":
        if not model.chain:
            return labels
        cols = [table.codes(h) for h in model.chain]
        combos, inv = np.unique(np.stack(cols, axis=1), axis=0, return_inverse=True)
        names = [
            "/".join(f"{h}={table.key(h, int(c))}" for h, c in zip(model.chain, row))
            for row in combos
        ]
        return [names[i] for i in inv.reshape(-1)]
    if model.root is None:
        return labels
    stack = [(model.root, "", np.arange(n))]
    while stack:
        node, prefix, idx = stack.pop()
        codes = table.codes(node.hash)[idx]
        uniq, inv = np.unique(codes, return_inverse=True)
        inv = inv.reshape(-1)
        for j, code in enumerate(uniq):
            key = table.key(node.hash, int(code))
            label = f"{prefix}/{node.hash}={key}" if prefix else f"{node.hash}={key}"
            sub = idx[inv == j]
            child = node.children.get(key)
            if child is not None:
                stack.append((child, label, sub))
            else:
                for i in sub.tolist():
                    labels[i] = label
    return labels


def split_oversized(members: dict[str, list[str]], S: int, seed: int) -> dict[str, str]:
    """Balanced, seeded random split of every canopy larger than S into
    ceil(n/S) parts suffixed ``#i``; each canopy's split depends only on
    (seed, canopy id, members in file order)."""
    out: dict[str, str] = {}
    for cid, rids in members.items():
        n = len(rids)
        if n <= S:
            for rid in rids:
                out[rid] = cid
            continue
        parts = -(-n // S)
        order = list(rids)
        random.Random(f"{seed}|{cid}").shuffle(order)
        for i, rid in enumerate(order):
            out[rid] = f"{cid}#{i * parts // n}"
    return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CBLOCK_THREADS", "1")))
    except ValueError:
        return 1


def assign_canopies(
    model: BlockingModel,
    dataset: Dataset,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    table: Optional[KeyTable] = None,
) -> tuple[CanopyAssignment, CanopyStats]:
    """Run every record through the model, then split canopies larger than
    ``model.max_size`` at random.

    ``table`` (key codes already computed for this dataset) only speeds the
    walk up; the result is the same."""
    seed = model.seed if seed is None else seed
    S = model.max_size
    records = dataset.records
    adaptive = model.build_size is not None and model.build_size < S
    usable = (
        table is not None and table.dataset is dataset and not adaptive
        and all(s.id in table.by_id and table.by_id[s.id] == s for s in model.specs)
    )
    if model.language == "random":
        parts = max(1, -(-len(records) // S))
        draws = np.random.default_rng(seed).integers(0, parts, size=len(records))
        keys = [str(int(d)) for d in draws]
    elif usable:
        keys = _table_keys(model, table)
    elif adaptive:
        _check_attrs(model, dataset)
        keys = _adaptive_keys(model, records)
    else:
        _check_attrs(model, dataset)
        threads = threads or _threads()
        if threads > 1 and len(records) > 4 * threads:
            step = -(-len(records) // threads)
            chunks = [records[i:i + step] for i in range(0, len(records), step)]
            with ThreadPoolExecutor(threads) as pool:
                keys = [k for part in pool.map(lambda c: [canopy_key(model, r) for r in c], chunks) for k in part]
        else:
            keys = [canopy_key(model, r) for r in records]
    members: dict[str, list[str]] = {}
    for rec, key in zip(records, keys):
        members.setdefault(key, []).append(rec.id)
    mapping = split_oversized(members, S, seed)
    mapping = {rec.id: mapping[rec.id] for rec in records}
    assign = CanopyAssignment([mapping])
    return assign, assign.stats(0)


def random_baseline(dataset: Dataset, S: int, seed: int = 42) -> CanopyAssignment:
    """Uniform draw into ceil(|U|/S) canopies; overfull draws are split like any
    other oversized canopy."""
    _require_size(S)
    return assign_canopies(build_random(dataset, S, seed), dataset)[0]


# --------------------------------------------------------------- persistence

def save_model(model, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model.dumps())


def load_model(path: Union[str, Path]):
    """Load a single-round model, or a multi-round one when the JSON has ``rounds``."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if "rounds" in obj:
        from .multiround import MultiRoundModel

        return MultiRoundModel.from_json(obj)
    return BlockingModel.from_json(obj)
