"""Approximation algorithms and their factor guarantees."""

from fractions import Fraction

import pytest

from ftnet import (
    GenSpec,
    ValidationError,
    approx_ftp_k,
    approx_ftp_kplus1,
    brute_force_ftp,
    ftp_feasible_cut,
    ftp_feasible_enum,
    generate,
    solve_1ftp,
)
from conftest import mk


def test_flow_rounding_is_exact_on_parallel_family():
    inst = generate(GenSpec(family="parallel", p=5, k=1))
    sol = approx_ftp_kplus1(inst)
    assert sol.cost == 2 == brute_force_ftp(inst)[0]
    assert len(sol.ids) == 2


def test_flow_rounding_all_safe_is_shortest_path():
    inst = mk([("s", "a", 1, "s"), ("a", "t", 1, "s"), ("s", "t", 3, "s")], k=2)
    sol = approx_ftp_kplus1(inst)
    assert sol.ids == (0, 1)
    assert sol.cost == 2


def test_metric_assembly_on_parallel_family():
    inst = generate(GenSpec(family="parallel", p=3, k=1))
    sol = approx_ftp_k(inst)
    assert sol.cost == 2
    one_fault = solve_1ftp(inst)
    assert sol.cost == one_fault.cost


def test_bridge_then_parallel_block():
    inst = mk(
        [
            ("s", "m", 1, "s"),
            ("m", "t", 1, "v"),
            ("m", "t", 1, "v"),
            ("m", "t", 1, "v"),
        ],
        k=1,
    )
    sol = approx_ftp_k(inst)
    assert sol.cost == 3 == brute_force_ftp(inst)[0]


def test_all_safe_graph_gives_shortest_path():
    inst = mk(
        [("s", "a", 2, "s"), ("a", "t", 2, "s"), ("s", "t", 5, "s")],
        k=2,
    )
    sol = approx_ftp_k(inst)
    assert sol.cost == 4
    assert sol.ids == (0, 1)


def test_k_approx_requires_positive_k():
    inst = mk([("s", "t", 1, "s")], k=0)
    with pytest.raises(ValidationError):
        approx_ftp_k(inst)


def test_factor_bounds_on_random_corpus():
    for seed in range(20):
        for k in (1, 2):
            inst = generate(
                GenSpec(family="random", n=7, arc_count=12, k=k, seed=1000 + seed, weight_hi=6)
            )
            opt = brute_force_ftp(inst)[0]
            a_plus = approx_ftp_kplus1(inst)
            a_k = approx_ftp_k(inst)
            assert a_plus.cost <= (k + 1) * opt
            assert a_k.cost <= k * opt
            for sol in (a_plus, a_k):
                assert ftp_feasible_cut(inst, sol).feasible
                assert ftp_feasible_enum(inst, sol).feasible


def test_ratio_to_fractional_optimum_on_parallel_family():
    for p, k in ((5, 1), (10, 2), (50, 3)):
        inst = generate(GenSpec(family="parallel", p=p, k=k))
        for algorithm in (approx_ftp_kplus1, approx_ftp_k):
            sol = algorithm(inst)
            assert sol.cost == k + 1
            fractional = Fraction(p, p - k)
            assert sol.cost / fractional == Fraction((k + 1) * (p - k), p)
