"""Max-flow, min-cost flow, and path decomposition."""

import itertools
from fractions import Fraction

import pytest

from ftnet import (
    UNBOUNDED,
    CapacityProfile,
    InfeasibleError,
    max_flow,
    min_cost_flow,
    path_decompose,
)
from conftest import mk


def diamond(flag="s"):
    return mk(
        [("s", "a", 1, flag), ("a", "t", 1, flag), ("s", "b", 1, flag), ("b", "t", 1, flag)],
        k=1,
    )


def test_diamond_unit_caps():
    inst = diamond()
    value, cut = max_flow(inst, CapacityProfile.uniform(inst, 1), "s", "t")
    assert value == 2
    assert set(cut.ids) in ({0, 2}, {1, 3})


def test_parallel_unit_caps():
    inst = mk([("s", "t", 1, "v")] * 5, k=1)
    value, _ = max_flow(inst, CapacityProfile.uniform(inst, 1), "s", "t")
    assert value == 5


def test_disconnected_sink_empty_cut():
    inst = mk([("s", "a", 1, "s")], k=0)
    value, cut = max_flow(inst, CapacityProfile.uniform(inst, 1), "s", "t")
    assert value == 0
    assert cut.ids == ()


def test_unbounded_value_detected():
    inst = mk([("s", "t", 1, "s"), ("s", "t", 1, "v")], k=1)
    caps = CapacityProfile((UNBOUNDED, 1))
    value, _ = max_flow(inst, caps, "s", "t")
    assert value is UNBOUNDED


def test_maxflow_equals_cut_capacity():
    inst = mk(
        [
            ("s", "a", 1, "s"),
            ("s", "b", 1, "s"),
            ("a", "b", 1, "s"),
            ("a", "t", 1, "s"),
            ("b", "t", 1, "s"),
        ],
        k=0,
    )
    for caps in itertools.product([0, 1, 2, 3], repeat=5):
        profile = CapacityProfile(caps)
        value, cut = max_flow(inst, profile, "s", "t")
        assert value == sum(caps[j] for j in cut.ids)


def test_min_cost_parallel_pair():
    inst = mk([("s", "t", 1, "v"), ("s", "t", 2, "v")], k=1)
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 2)
    assert res.cost == 3
    assert res.support.ids == (0, 1)


def test_target_zero():
    inst = diamond()
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 0)
    assert res.value == 0
    assert res.cost == 0
    assert res.support.ids == ()
    assert res.decomposition == ()


def test_diamond_two_units():
    inst = diamond()
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 2)
    assert res.cost == 4
    assert res.support.ids == (0, 1, 2, 3)


def test_infeasible_reports_cut():
    inst = mk([("s", "t", 1, "v")], k=0)
    with pytest.raises(InfeasibleError) as err:
        min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 2)
    assert err.value.cut == (0,)


def test_rerouting_uses_residual_arcs():
    # cheap greedy path must be partially undone to reach value 2
    inst = mk(
        [
            ("s", "a", 0, "s"),
            ("a", "t", 0, "s"),
            ("s", "b", 3, "s"),
            ("b", "a", 0, "s"),
            ("a", "c", 0, "s"),
            ("c", "t", 3, "s"),
        ],
        k=0,
    )
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 2)
    assert res.value == 2
    assert res.cost == 6


def test_flow_conservation_and_capacities():
    inst = mk(
        [("s", "a", 1, "s"), ("a", "t", 2, "s"), ("s", "b", 2, "s"), ("b", "t", 1, "s"), ("a", "b", 1, "s")],
        k=0,
    )
    caps = CapacityProfile((2, 1, 2, 2, 1))
    res = min_cost_flow(inst, caps, 3)
    for j, f in enumerate(res.flows):
        assert 0 <= f <= caps.caps[j]
    balance = {v: 0 for v in inst.vertices}
    for j, f in enumerate(res.flows):
        balance[inst.arcs[j].tail] += f
        balance[inst.arcs[j].head] -= f
    assert balance["s"] == 3 and balance["t"] == -3
    assert all(b == 0 for v, b in balance.items() if v not in ("s", "t"))


def _enumerate_min_cost(inst, caps, target):
    """Independent oracle: all integral flow vectors within capacities."""
    m = len(inst.arcs)
    ranges = [range(0, min(c, target) + 1) for c in caps.caps]
    best = None
    for vector in itertools.product(*ranges):
        balance = {v: 0 for v in inst.vertices}
        for j, f in enumerate(vector):
            balance[inst.arcs[j].tail] += f
            balance[inst.arcs[j].head] -= f
        if balance[inst.source] != target or balance[inst.sink] != -target:
            continue
        if any(b != 0 for v, b in balance.items() if v not in (inst.source, inst.sink)):
            continue
        cost = sum(vector[j] * inst.arcs[j].weight for j in range(m))
        if best is None or cost < best:
            best = cost
    return best


def test_min_cost_flow_matches_exhaustive_enumeration():
    inst = mk(
        [
            ("s", "a", 2, "s"),
            ("s", "b", 1, "s"),
            ("a", "b", 1, "s"),
            ("b", "a", 4, "s"),
            ("a", "t", 1, "s"),
            ("b", "t", 3, "s"),
            ("s", "t", 9, "s"),
        ],
        k=0,
    )
    for caps in [(1, 1, 1, 1, 1, 1, 1), (2, 1, 1, 2, 2, 1, 1), (2, 2, 0, 1, 1, 2, 2)]:
        profile = CapacityProfile(caps)
        for target in (1, 2, 3):
            want = _enumerate_min_cost(inst, profile, target)
            if want is None:
                with pytest.raises(InfeasibleError):
                    min_cost_flow(inst, profile, target)
            else:
                assert min_cost_flow(inst, profile, target).cost == want


def test_decompose_single_path():
    inst = mk([("s", "a", 1, "s"), ("a", "t", 1, "s")], k=0)
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 1)
    assert res.decomposition == (((0, 1), 1),)
    assert path_decompose(res) == [((0, 1), 1)]


def test_decompose_diamond():
    res = min_cost_flow(diamond(), CapacityProfile.uniform(diamond(), 1), 2)
    paths = path_decompose(res)
    assert len(paths) == 2
    assert all(amount == 1 for _p, amount in paths)
    assert sum(amount for _p, amount in paths) == res.value


def test_decompose_parallel_family():
    inst = mk([("s", "t", 1, "v")] * 4, k=2)
    res = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), 3)
    paths = path_decompose(res)
    assert len(paths) == 3
    assert all(len(p) == 1 for p, _a in paths)


def test_cycle_cancellation_never_increases_cost():
    import ftnet.flows as fl

    inst = mk(
        [("s", "a", 1, "s"), ("a", "b", 1, "s"), ("b", "a", 1, "s"), ("a", "t", 1, "s")],
        k=0,
    )
    # hand-built flow with a superfluous a->b->a cycle
    flow = [1, 1, 1, 1]
    cancelled, paths = fl._decompose(inst, "s", "t", flow)
    assert cancelled == [1, 0, 0, 1]
    assert paths == [((0, 3), 1)]
    cost = sum(c * inst.arcs[j].weight for j, c in enumerate(cancelled))
    original = sum(f * inst.arcs[j].weight for j, f in enumerate(flow))
    assert cost <= original
