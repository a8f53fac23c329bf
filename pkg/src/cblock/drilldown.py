"""Recall-optimal contiguous partitioning of one attribute's ordered domain.

The domain is the sorted list of distinct values; a partition is a list of
cut positions, run ``r`` spanning ``values[cuts[r-1]:cuts[r]]``. Runs are
closed index ranges ``(i, j)``, so the open/closed interval variants collapse
to cut positions between adjacent values.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .core import Dataset, Pair, ValidationError, Value
from .hashing import ORDERINGS, HashSpec, order_key

CostFn = Callable[[int, int], float]


class InfeasibleError(ValidationError):
    """Some single value already costs more than the bound."""


@dataclass(frozen=True)
class OrderedDomain:
    values: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.values) != len(self.weights):
            raise ValidationError("values and weights differ in length")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValidationError("domain values must be strictly increasing")
        if any(w < 1 for w in self.weights):
            raise ValidationError("weights must be >= 1")

    def __len__(self) -> int:
        return len(self.values)

    def index(self, value) -> int:
        i = bisect_left(self.values, value)
        if i == len(self.values) or self.values[i] != value:
            raise ValidationError(f"value {value!r} not in domain")
        return i

    def weight_cost(self) -> CostFn:
        """Default cost: total weight of the run."""
        prefix = [0]
        for w in self.weights:
            prefix.append(prefix[-1] + w)
        return lambda i, j: prefix[j + 1] - prefix[i]


@dataclass(frozen=True)
class DccPartition:
    """Run starts after the first: ``cuts[r]`` is the first index of run r+1."""

    cuts: tuple
    size: int

    def runs(self) -> list[tuple[int, int]]:
        starts = (0,) + tuple(self.cuts)
        ends = tuple(c - 1 for c in self.cuts) + (self.size - 1,)
        return list(zip(starts, ends))


def index_pairs(domain: OrderedDomain, pairs: Iterable[tuple]) -> list[tuple[int, int]]:
    """Value pairs -> (lo, hi) index pairs, dropping pairs with lo == hi."""
    out = []
    for a, b in pairs:
        i, j = domain.index(a), domain.index(b)
        if i > j:
            i, j = j, i
        if i != j:
            out.append((i, j))
    return out


def broken_count(run: tuple[int, int], pairs: Iterable[tuple[int, int]]) -> int:
    """Pairs whose low end lies in the run and whose high end lies past it."""
    i, j = run
    return sum(1 for lo, hi in pairs if i <= lo <= j < hi)


def _max_end(cost: CostFn, a: int, n: int, S: float) -> int:
    """Largest j with cost(a..j) <= S, by binary search on a monotone cost."""
    if cost(a, a) > S:
        raise InfeasibleError(f"value at index {a} alone costs {cost(a, a)} > {S}")
    lo, hi = a, n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cost(a, mid) <= S:
            lo = mid
        else:
            hi = mid - 1
    return lo


class _Problem:
    def __init__(self, n: int, pairs: Sequence[tuple[int, int]], cost: CostFn, S: float):
        self.n = n
        self.cost = cost
        self.S = S
        self.pairs = sorted((lo, hi) for lo, hi in pairs if lo != hi)
        self.los = [lo for lo, _ in self.pairs]
        self.endpoints = sorted({e for p in self.pairs for e in p})
        self._Y: dict[int, int] = {}

    def Y(self, a: int) -> int:
        if a not in self._Y:
            self._Y[a] = _max_end(self.cost, a, self.n, self.S)
        return self._Y[a]

    def candidates(self, a: int) -> list[tuple[int, int]]:
        """(end P, pairs broken by run [a, P]) for every interesting end P, largest P first."""
        Y = self.Y(a)
        ends = {Y}
        lo_i = bisect_right(self.endpoints, a)
        hi_i = bisect_right(self.endpoints, Y)
        ends.update(e - 1 for e in self.endpoints[lo_i:hi_i])
        # pairs starting inside [a, Y]; B(a, P) = #(lo <= P) - #(hi <= P) among them
        s, t = bisect_left(self.los, a), bisect_right(self.los, Y)
        los = self.los[s:t]
        his = sorted(hi for _, hi in self.pairs[s:t])
        return [(P, bisect_right(los, P) - bisect_right(his, P)) for P in sorted(ends, reverse=True)]

    def has_pairs_from(self, a: int) -> bool:
        return bisect_left(self.los, a) < len(self.los)


def _solve(problem: _Problem) -> tuple[int, dict[int, tuple[int, int]]]:
    """Memoised suffix recursion evaluated bottom-up over the reachable starts.

    Returns the optimum and, per start, (violations, chosen end)."""
    n = problem.n
    if n == 0:
        return 0, {}
    starts, stack = {0}, [0]
    succ: dict[int, list[tuple[int, int]]] = {}
    while stack:
        a = stack.pop()
        if problem.has_pairs_from(a):
            cands = problem.candidates(a)
        else:
            cands = [(problem.Y(a), 0)]
        succ[a] = cands
        for P, _ in cands:
            if P + 1 < n and P + 1 not in starts:
                starts.add(P + 1)
                stack.append(P + 1)
    memo: dict[int, tuple[int, int]] = {}
    for a in sorted(starts, reverse=True):
        best = None
        for P, broken in succ[a]:
            v = broken + (memo[P + 1][0] if P + 1 < n else 0)
            if best is None or v < best[0]:
                best = (v, P)
        memo[a] = best
    return memo[0][0], memo


def drill_down(
    domain: OrderedDomain,
    pairs: Iterable[tuple[int, int]],
    S: float,
    cost_fn: Optional[CostFn] = None,
) -> tuple[DccPartition, int]:
    """Optimal partition of ``domain`` into contiguous runs of cost <= S.

    ``pairs`` are (lo, hi) value indices. Returns the partition and its number
    of split pairs. Among optimal partitions, ends are taken as large as
    possible from the left, so without pairs the runs are greedily maximal.
    """
    cost = cost_fn or domain.weight_cost()
    n = len(domain)
    problem = _Problem(n, list(pairs), cost, S)
    if n == 0:
        return DccPartition((), 0), 0
    violations, memo = _solve(problem)
    cuts = []
    a = 0
    while True:
        P = memo[a][1]
        if P + 1 >= n:
            break
        cuts.append(P + 1)
        a = P + 1
    return DccPartition(tuple(cuts), n), violations


def drill_down_recursive(n: int, pairs: Sequence[tuple[int, int]], cost: CostFn, S: float, memoize: bool = True) -> int:
    """Top-down form of the same recursion; for small domains."""
    problem = _Problem(n, pairs, cost, S)
    memo: dict[int, int] = {}

    def V(a: int) -> int:
        if a >= n:
            return 0
        if memoize and a in memo:
            return memo[a]
        if not problem.has_pairs_from(a):
            best = V(problem.Y(a) + 1)
        else:
            best = min(b + V(P + 1) for P, b in problem.candidates(a))
        memo[a] = best
        return best

    return V(0)


def nondisjoint_drilldown(
    pairs: Iterable[tuple[int, int]], cost_fn: CostFn, S: float
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """One interval per pair when it fits under the bound: (kept, uncovered)."""
    kept, dropped = [], []
    for lo, hi in pairs:
        lo, hi = min(lo, hi), max(lo, hi)
        (kept if cost_fn(lo, hi) <= S else dropped).append((lo, hi))
    return kept, dropped


# ------------------------------------------------------- dataset helpers

def domain_from_values(values: Iterable[Value], ordering: str = "lexicographic") -> tuple[OrderedDomain, dict]:
    """Ordered domain of the non-null values plus value -> order key map."""
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}")
    counts: Counter = Counter()
    keymap = {}
    for v in values:
        if v is None:
            continue
        k = order_key(v, ordering)
        keymap[v] = k
        counts[k] += 1
    keys = sorted(counts)
    return OrderedDomain(tuple(keys), tuple(counts[k] for k in keys)), keymap


def partition_to_hash(
    attribute: str,
    ordering: str,
    domain: OrderedDomain,
    partition: DccPartition,
    spec_id: Optional[str] = None,
) -> HashSpec:
    """Interval hash keyed by run index; values outside the domain clamp to the end runs."""
    if partition.size == 0 or len(domain) == 0:
        raise ValidationError("cannot build a hash from an empty partition")
    starts = [domain.values[i] for i, _ in partition.runs()]
    spec_id = spec_id or f"{attribute}:interval_partition:{ordering}:{len(starts)}"
    return HashSpec(spec_id, attribute, "interval_partition", {"boundaries": starts, "ordering": ordering})


def drill_down_attribute(
    dataset: Dataset,
    pairs: Iterable[Pair],
    attribute: str,
    S: float,
    ordering: str = "lexicographic",
) -> tuple[HashSpec, int]:
    """Drill down one attribute of a dataset; record counts are the run cost."""
    if attribute not in dataset.schema:
        raise ValidationError(f"attribute {attribute!r} not in schema")
    domain, keymap = domain_from_values((r.get(attribute) for r in dataset.records), ordering)
    value_of = {r.id: r.get(attribute) for r in dataset.records}
    vpairs = []
    for a, b in pairs:
        va, vb = value_of[a], value_of[b]
        if va is None or vb is None:
            continue
        vpairs.append((keymap[va], keymap[vb]))
    partition, violations = drill_down(domain, index_pairs(domain, vpairs), S)
    return partition_to_hash(attribute, ordering, domain, partition), violations
