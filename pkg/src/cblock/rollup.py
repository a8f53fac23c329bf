"""Greedy roll-up of small canopies under the size bound.

Each step merges the feasible pair maximising benefit / min(size), where
benefit counts labeled pairs split between the two canopies. Ratios are exact
fractions; ties go to the lexicographically smallest (id1, id2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import Pair, ValidationError

Canopy = tuple[str, frozenset]


@dataclass
class RollupPlan:
    groups: dict[str, list[str]]
    merged_pairs_gained: int

    def remap(self) -> dict[str, str]:
        """input canopy id -> output canopy id"""
        return {old: new for new, olds in self.groups.items() for old in olds}


def benefit(d1: Iterable[str], d2: Iterable[str], pairs: Iterable[Pair]) -> int:
    d1, d2 = set(d1), set(d2)
    if d1 & d2:
        raise ValidationError("benefit() needs disjoint canopies")
    return sum(1 for a, b in pairs if (a in d1 and b in d2) or (a in d2 and b in d1))


def merged_id(members: Sequence[str]) -> str:
    return "roll(" + "+".join(sorted(members)) + ")"


def _prepare(canopies: Sequence[tuple[str, Iterable[str]]], pairs: Iterable[Pair]):
    ids = []
    owner: dict[str, int] = {}
    sizes = []
    for i, (cid, recs) in enumerate(canopies):
        recs = list(recs)
        for r in recs:
            if r in owner:
                raise ValidationError(f"record {r!r} appears in more than one canopy")
            owner[r] = i
        ids.append(cid)
        sizes.append(len(recs))
    if len(set(ids)) != len(ids):
        raise ValidationError("canopy ids must be unique")
    cross: list[dict[int, int]] = [dict() for _ in ids]
    for a, b in pairs:
        i, j = owner.get(a), owner.get(b)
        if i is None or j is None or i == j:
            continue
        cross[i][j] = cross[i].get(j, 0) + 1
        cross[j][i] = cross[j].get(i, 0) + 1
    return ids, sizes, cross


def _pair_key(ids, i, j):
    a, b = ids[i], ids[j]
    return (a, b) if a <= b else (b, a)


def _finish(ids, members, alive, gained) -> RollupPlan:
    groups = {}
    for i in sorted(alive, key=lambda k: ids[k]):
        groups[ids[i]] = sorted(members[i])
    return RollupPlan(groups, gained)


def _merge(ids, sizes, cross, members, alive, i, j):
    """Fold canopy j into slot i."""
    members[i] = members[i] + members[j]
    ids[i] = merged_id(members[i])
    sizes[i] += sizes[j]
    alive.discard(j)
    row_j = cross[j]
    row_j.pop(i, None)
    cross[i].pop(j, None)
    for k, v in row_j.items():
        cross[i][k] = cross[i].get(k, 0) + v
        ck = cross[k]
        ck.pop(j, None)
        ck[i] = ck.get(i, 0) + v
    cross[j] = {}


def rollup_naive(canopies, pairs, S: int, min_benefit: int = 0) -> RollupPlan:
    """Full re-scan of every candidate pair at each step."""
    ids, sizes, cross = _prepare(canopies, list(pairs))
    members = [[cid] for cid in ids]
    alive = set(range(len(ids)))
    gained = 0
    while True:
        best = None
        order = sorted(alive)
        for x, i in enumerate(order):
            for j in order[x + 1:]:
                if sizes[i] + sizes[j] > S:
                    continue
                ben = cross[i].get(j, 0)
                cand = (Fraction(ben, min(sizes[i], sizes[j]) or 1), _pair_key(ids, i, j), i, j, ben)
                if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                    best = cand
        if best is None or best[4] < min_benefit:
            break
        _, _, i, j, ben = best
        gained += ben
        _merge(ids, sizes, cross, members, alive, i, j)
    return _finish(ids, members, alive, gained)


def rollup(
    canopies: Sequence[tuple[str, Iterable[str]]],
    pairs: Iterable[Pair],
    S: int,
    min_benefit: int = 0,
) -> RollupPlan:
    """Greedy roll-up with one maintained merge candidate per canopy.

    The candidate of canopy D is the partner D' with |D'| >= |D| and
    |D| + |D'| <= S of maximal benefit, so its ratio is benefit / |D|; the best
    pair overall is the best of these candidates.
    """
    if min_benefit < 0:
        raise ValidationError("min_benefit must be >= 0")
    ids, sizes, cross = _prepare(canopies, list(pairs))
    members = [[cid] for cid in ids]
    alive = set(range(len(ids)))
    cand: dict[int, Optional[tuple]] = {}

    def rank(i, j):
        ben = cross[i].get(j, 0)
        return (Fraction(ben, min(sizes[i], sizes[j]) or 1), _pair_key(ids, i, j), j, ben)

    def better(a, b):
        return b is None or a[0] > b[0] or (a[0] == b[0] and a[1] < b[1])

    def eligible(i, j):
        return j != i and sizes[j] >= sizes[i] and sizes[i] + sizes[j] <= S

    def recompute(i):
        best = None
        for j in alive:
            if eligible(i, j):
                r = rank(i, j)
                if better(r, best):
                    best = r
        cand[i] = best

    for i in range(len(ids)):
        recompute(i)
    gained = 0
    while True:
        best_i, best = None, None
        for i in alive:
            c = cand[i]
            if c is not None and better(c, best):
                best_i, best = i, c
        if best is None or best[3] < min_benefit:
            break
        i, j = best_i, best[2]
        gained += best[3]
        _merge(ids, sizes, cross, members, alive, i, j)
        cand.pop(j, None)
        recompute(i)
        for k in alive:
            if k == i:
                continue
            c = cand[k]
            if c is not None and c[2] in (i, j):
                recompute(k)
            elif eligible(k, i):
                r = rank(k, i)
                if better(r, c):
                    cand[k] = r
    return _finish(ids, members, alive, gained)
