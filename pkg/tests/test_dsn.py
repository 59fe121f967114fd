"""Exact directed Steiner network subsolver vs its exhaustive oracle."""

import random
from fractions import Fraction

import pytest

from ftnet import BudgetExceededError, DsnInstance, InfeasibleError, dsn_oracle, dsn_solve


def D(vertices, arcs, pairs):
    return DsnInstance(
        vertices=tuple(vertices),
        arcs=tuple((u, v, Fraction(c)) for u, v, c in arcs),
        pairs=tuple(pairs),
    )


def test_single_pair_is_shortest_path():
    d = D(
        ["a", "b", "c"],
        [("a", "b", 1), ("b", "c", 2), ("a", "c", 5)],
        [("a", "c")],
    )
    cost, arcs = dsn_solve(d)
    assert cost == 3
    assert arcs == (0, 1)
    assert dsn_oracle(d)[0] == 3


def test_shared_middle_arc_beats_direct_links():
    d = D(
        ["s1", "s2", "m", "m2", "t1", "t2"],
        [
            ("s1", "m", 1),
            ("s2", "m", 1),
            ("m", "m2", 1),
            ("m2", "t1", 1),
            ("m2", "t2", 1),
            ("s1", "t1", 10),
            ("s2", "t2", 10),
        ],
        [("s1", "t1"), ("s2", "t2")],
    )
    cost, arcs = dsn_solve(d)
    assert cost == 5
    assert arcs == (0, 1, 2, 3, 4)
    assert dsn_oracle(d)[0] == 5


def test_disconnected_pair_raises():
    d = D(["a", "b", "c"], [("a", "b", 1)], [("a", "c")])
    with pytest.raises(InfeasibleError):
        dsn_solve(d)
    with pytest.raises(InfeasibleError):
        dsn_oracle(d)


def test_trivial_pair_costs_nothing():
    d = D(["a", "b"], [("a", "b", 3)], [("a", "a")])
    assert dsn_solve(d) == (0, ())


def test_zero_cost_arcs_ride_free():
    d = D(
        ["a", "b", "c"],
        [("a", "b", 0), ("b", "c", 2), ("a", "c", 3)],
        [("a", "c")],
    )
    cost, arcs = dsn_solve(d)
    assert cost == 2
    assert 0 in arcs  # the free arc is part of the returned connection


def test_pair_bound_enforced():
    d = D(["a", "b"], [("a", "b", 1)], [("a", "b")] * 4)
    with pytest.raises(BudgetExceededError):
        dsn_solve(d)


def test_oracle_priced_arc_bound():
    arcs = [("a", "b", i + 1) for i in range(19)]
    d = D(["a", "b"], arcs, [("a", "b")])
    with pytest.raises(BudgetExceededError):
        dsn_oracle(d)


def test_solution_minimal_in_positive_arcs():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(4, 6)
        verts = [f"n{i}" for i in range(n)]
        arcs = []
        for _ in range(rng.randint(6, 11)):
            u, v = rng.sample(verts, 2)
            arcs.append((u, v, rng.choice([0, 1, 2, 4])))
        pairs = [tuple(rng.sample(verts, 2)) for _ in range(rng.randint(1, 2))]
        d = D(verts, arcs, pairs)
        try:
            cost, chosen = dsn_solve(d)
        except InfeasibleError:
            continue
        positives = [j for j in chosen if d.arcs[j][2] > 0]
        for j in positives:
            remaining = [x for x in chosen if x != j]
            sub = D(
                verts,
                [(d.arcs[x][0], d.arcs[x][1], d.arcs[x][2]) for x in remaining],
                pairs,
            )
            try:
                sub_cost, _ = dsn_solve(sub)
                still_ok = True
            except InfeasibleError:
                still_ok = False
            assert not still_ok or sub_cost > cost - d.arcs[j][2] or cost == 0


def test_agrees_with_oracle_on_random_corpus():
    rng = random.Random(99)
    for trial in range(60):
        n = rng.randint(4, 7)
        verts = [f"n{i}" for i in range(n)]
        arcs = []
        for _ in range(rng.randint(6, 13)):
            u, v = rng.sample(verts, 2)
            arcs.append((u, v, rng.choice([0, 1, 2, 3, 5])))
        pairs = [tuple(rng.sample(verts, 2)) for _ in range(rng.randint(1, 3))]
        d = D(verts, arcs, pairs)
        try:
            got = dsn_solve(d)[0]
        except InfeasibleError:
            got = None
        try:
            want = dsn_oracle(d)[0]
        except InfeasibleError:
            want = None
        assert got == want, trial
