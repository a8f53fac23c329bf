"""Canopy-to-machine assignment and its latency envelope."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .core import CanopyStats, ValidationError


@dataclass
class MachineAssignment:
    machine_of: dict[str, int]
    loads: list[int]
    sizes: dict[str, int]

    @property
    def machines(self) -> int:
        return len(self.loads)


def assign_to_machines(stats: CanopyStats, m: int) -> MachineAssignment:
    """Longest-first greedy: canopies by |C|^2 descending (ties by id), each to
    the least-loaded machine (ties by lowest index)."""
    if m < 1:
        raise ValidationError("need at least one machine")
    if not stats.sizes:
        raise ValidationError("no canopies to assign")
    order = sorted(stats.sizes, key=lambda c: (-stats.sizes[c] ** 2, c))
    heap = [(0, j) for j in range(m)]
    loads = [0] * m
    machine_of = {}
    for cid in order:
        load, j = heapq.heappop(heap)
        load += stats.sizes[cid] ** 2
        loads[j] = load
        machine_of[cid] = j
        heapq.heappush(heap, (load, j))
    return MachineAssignment(machine_of, loads, dict(stats.sizes))


def assignment_cost(assign: MachineAssignment) -> tuple[int, Fraction, bool]:
    """(max machine load, X, X <= cost <= 2X) with
    X = max(max |C|^2, sum |C|^2 / m), computed exactly."""
    squares = [n * n for n in assign.sizes.values()]
    cost = max(assign.loads)
    X = max(Fraction(max(squares)), Fraction(sum(squares), assign.machines))
    return cost, X, X <= cost <= 2 * X
