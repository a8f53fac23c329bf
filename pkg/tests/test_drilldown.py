import random
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import make_dataset
from cblock.core import ValidationError
from cblock.drilldown import (
    DccPartition,
    InfeasibleError,
    OrderedDomain,
    broken_count,
    domain_from_values,
    drill_down,
    drill_down_attribute,
    drill_down_recursive,
    index_pairs,
    nondisjoint_drilldown,
    partition_to_hash,
)
from cblock.hashing import hash_value
from oracles import drilldown_bruteforce, partition_split_count

ONE_TO_SIX = OrderedDomain(tuple(range(1, 7)), (1,) * 6)


def size_cost(i, j):
    return j - i + 1


def test_broken_count():
    assert broken_count((0, 5), [(1, 3)]) == 0
    assert broken_count((0, 2), [(1, 3), (0, 4), (3, 4)]) == 2
    assert broken_count((0, 2), index_pairs(ONE_TO_SIX, [(1, 2), (2, 5)])) == 1


def test_worked_example():
    pairs = index_pairs(ONE_TO_SIX, [(1, 2), (2, 3), (5, 6)])
    part, violations = drill_down(ONE_TO_SIX, pairs, 3)
    assert violations == 0
    assert part.runs() == [(0, 2), (3, 5)]
    assert drilldown_bruteforce([1] * 6, pairs, 3) == 0


def test_no_pairs_gives_greedy_maximal_runs():
    part, violations = drill_down(ONE_TO_SIX, [], 4)
    assert violations == 0 and part.runs() == [(0, 3), (4, 5)]


def test_unavoidable_split():
    dom = OrderedDomain((1, 2, 3, 4), (1, 1, 1, 1))
    part, violations = drill_down(dom, index_pairs(dom, [(1, 4)]), 2)
    assert violations == 1
    assert drilldown_bruteforce([1] * 4, [(0, 3)], 2) == 1


def test_whole_domain_fits():
    part, violations = drill_down(ONE_TO_SIX, [(0, 5), (1, 4)], 100)
    assert violations == 0 and part.runs() == [(0, 5)]


def test_infeasible_value():
    dom = OrderedDomain((1, 2), (1, 5))
    with pytest.raises(InfeasibleError):
        drill_down(dom, [], 3)


def test_domain_validation():
    with pytest.raises(ValidationError):
        OrderedDomain((2, 1), (1, 1))
    with pytest.raises(ValidationError):
        OrderedDomain((1, 2), (1, 0))


def test_custom_cost():
    part, violations = drill_down(ONE_TO_SIX, [(0, 1)], 2, cost_fn=lambda i, j: 2 * (j - i + 1))
    assert part.runs() == [(k, k) for k in range(6)] and violations == 1


def test_partition_to_hash():
    dom = OrderedDomain(tuple(range(1900, 2001)), (1,) * 101)
    spec = partition_to_hash("year", "numeric", dom, DccPartition((51,), 101))
    assert spec.params["boundaries"] == [1900, 1951]
    assert hash_value(spec, 1994) == "1"
    assert hash_value(spec, 1700) == "0" and hash_value(spec, 3000) == "1"
    const = partition_to_hash("year", "numeric", dom, DccPartition((), 101))
    assert {hash_value(const, y) for y in (1900, 1950, 2000)} == {"0"}
    with pytest.raises(ValidationError):
        partition_to_hash("year", "numeric", OrderedDomain((), ()), DccPartition((), 0))


def test_example_partition_becomes_two_key_hash():
    pairs = index_pairs(ONE_TO_SIX, [(1, 2), (2, 3), (5, 6)])
    part, _ = drill_down(ONE_TO_SIX, pairs, 3)
    spec = partition_to_hash("v", "numeric", ONE_TO_SIX, part)
    assert {hash_value(spec, v) for v in range(1, 7)} == {"0", "1"}


def test_nondisjoint_intervals():
    kept, dropped = nondisjoint_drilldown([(2, 3), (1, 6), (4, 4), (5, 1)], size_cost, 2)
    assert kept == [(2, 3), (4, 4)]
    assert dropped == [(1, 6), (1, 5)]


def test_drill_down_attribute_on_dataset():
    rows = [(f"r{i}", {"name": n}) for i, n in enumerate(["ann b", "bob c", "ann b", "cat a", None, "dan d"])]
    ds = make_dataset(rows)
    pairs = [("r0", "r2"), ("r1", "r3"), ("r0", "r4")]
    # ordered by last name: A CAT(1) B ANN(2) C BOB(1) D DAN(1); the r1-r3 run weighs 4
    assert drill_down_attribute(ds, pairs, "name", 2, "last_name_first")[1] == 1
    spec, violations = drill_down_attribute(ds, pairs, "name", 4, "last_name_first")
    assert violations == 0
    assert hash_value(spec, "bob c") == hash_value(spec, "cat a")
    assert hash_value(spec, "ann b") == hash_value(spec, "ANN B")
    with pytest.raises(ValidationError):
        drill_down_attribute(ds, [], "nope", 2)


def test_orderings():
    dom, keymap = domain_from_values(["b x", "a y", None, "c w"], "last_name_first")
    assert dom.values == ("W C", "X B", "Y A")
    dom, _ = domain_from_values([10, 9, 100], "numeric")
    assert dom.values == (9, 10, 100)
    with pytest.raises(ValidationError):
        domain_from_values([1], "random")


@st.composite
def instances(draw):
    n = draw(st.integers(1, 12))
    weights = draw(st.lists(st.integers(1, 4), min_size=n, max_size=n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
    pairs = [(min(a, b), max(a, b)) for a, b in pairs if a != b]
    S = draw(st.integers(max(weights), sum(weights) + 1))
    return weights, pairs, S


@given(instances())
def test_matches_bruteforce_and_is_feasible(case):
    weights, pairs, S = case
    dom = OrderedDomain(tuple(range(len(weights))), tuple(weights))
    part, violations = drill_down(dom, pairs, S)
    assert violations == drilldown_bruteforce(weights, pairs, S)
    assert partition_split_count(part.runs(), pairs) == violations
    cost = dom.weight_cost()
    assert all(cost(i, j) <= S for i, j in part.runs())
    runs = part.runs()
    assert runs[0][0] == 0 and runs[-1][1] == len(weights) - 1
    assert all(b[0] == a[1] + 1 for a, b in zip(runs, runs[1:]))


@given(instances())
def test_memoised_equals_plain_recursion(case):
    weights, pairs, S = case
    dom = OrderedDomain(tuple(range(len(weights))), tuple(weights))
    cost = dom.weight_cost()
    plain = drill_down_recursive(len(weights), pairs, cost, S, memoize=False)
    assert plain == drill_down_recursive(len(weights), pairs, cost, S) == drill_down(dom, pairs, S)[1]


def test_near_linear_growth_in_pairs():
    rng = random.Random(0)
    n = 20_000
    dom = OrderedDomain(tuple(range(n)), (1,) * n)

    def run(m):
        pairs = []
        for _ in range(m):
            a = rng.randrange(n - 1)
            pairs.append((a, min(n - 1, a + rng.randint(1, 40))))
        t0 = time.perf_counter()
        drill_down(dom, pairs, 50)
        return time.perf_counter() - t0

    run(500)
    small, large = min(run(2_000) for _ in range(2)), min(run(16_000) for _ in range(2))
    # 8x the pairs; quadratic growth would be ~64x
    assert large < 24 * small
