"""Cut-based vs enumeration-based feasibility verifiers."""

import random

import pytest

from ftnet import (
    BudgetExceededError,
    GenSpec,
    ValidationError,
    ftf_feasible_cut,
    ftf_feasible_enum,
    ftp_feasible_cut,
    ftp_feasible_enum,
    generate,
    max_flow,
    CapacityProfile,
    with_mode,
)
from conftest import mk


def parallel(p, k=None, ell=None):
    return mk([("s", "t", 1, "v")] * p, k=k, ell=ell)


# -- path mode


def test_two_of_three_parallel_survive_one_fault():
    inst = parallel(3, k=1)
    for verify in (ftp_feasible_cut, ftp_feasible_enum):
        verdict = verify(inst, [0, 1])
        assert verdict.feasible and verdict.witness is None


def test_two_arcs_fail_two_faults():
    inst = parallel(3, k=2)
    for verify in (ftp_feasible_cut, ftp_feasible_enum):
        verdict = verify(inst, [0, 1])
        assert not verdict.feasible
        assert verdict.witness == (0, 1)


def test_single_safe_arc_survives_any_k():
    for k in (0, 1, 5):
        inst = mk([("s", "t", 1, "s"), ("s", "t", 1, "v")], k=k)
        for verify in (ftp_feasible_cut, ftp_feasible_enum):
            assert verify(inst, [0]).feasible


def test_empty_set_infeasible_with_empty_witness():
    inst = parallel(2, k=1)
    for verify in (ftp_feasible_cut, ftp_feasible_enum):
        verdict = verify(inst, [])
        assert not verdict.feasible
        assert verdict.witness == ()


def test_ftp_witness_replays():
    inst = mk(
        [("s", "a", 1, "v"), ("a", "t", 1, "v"), ("s", "t", 5, "v")],
        k=1,
    )
    verdict = ftp_feasible_cut(inst, [0, 1])
    assert not verdict.feasible
    survivors = set([0, 1]) - set(verdict.witness)
    caps = CapacityProfile.build(inst, lambda i, a: 1 if i in survivors else 0)
    value, _ = max_flow(inst, caps, "s", "t")
    assert value == 0


def test_enum_budget():
    inst = parallel(14, k=7)
    with pytest.raises(BudgetExceededError):
        ftp_feasible_enum(inst, range(14), scenario_budget=10)


def test_mode_mismatch_rejected():
    inst = parallel(2, ell=1)
    with pytest.raises(ValidationError):
        ftp_feasible_cut(inst, [0])


# -- flow mode


def test_ell_plus_one_disjoint_vulnerable_paths():
    inst = parallel(3, ell=2)
    for verify in (ftf_feasible_cut, ftf_feasible_enum):
        assert verify(inst, [0, 1, 2]).feasible


def test_ell_safe_paths_suffice():
    inst = mk([("s", "t", 1, "s"), ("s", "t", 1, "s"), ("s", "t", 1, "v")], ell=2)
    for verify in (ftf_feasible_cut, ftf_feasible_enum):
        assert verify(inst, [0, 1]).feasible


def test_vulnerable_member_breaks_ell_paths():
    inst = mk([("s", "t", 1, "s"), ("s", "t", 1, "v"), ("s", "t", 1, "v")], ell=2)
    for verify in (ftf_feasible_cut, ftf_feasible_enum):
        verdict = verify(inst, [0, 1])
        assert not verdict.feasible
        assert verdict.witness == (1,)


def test_too_few_paths_yield_empty_witness():
    inst = parallel(3, ell=2)
    for verify in (ftf_feasible_cut, ftf_feasible_enum):
        verdict = verify(inst, [0])
        assert not verdict.feasible
        assert verdict.witness == ()


# -- cross-verifier agreement and monotonicity


def test_random_agreement():
    rng = random.Random(4242)
    for trial in range(120):
        k = rng.choice([1, 2, 3])
        inst = generate(GenSpec(family="random", n=7, arc_count=11, k=k, seed=trial))
        subset = [j for j in range(len(inst.arcs)) if rng.random() < 0.6]
        assert ftp_feasible_cut(inst, subset).feasible == ftp_feasible_enum(inst, subset).feasible
        finst = with_mode(inst, "ftf", ell=rng.choice([1, 2, 3]))
        subset = [j for j in range(len(finst.arcs)) if rng.random() < 0.7]
        assert ftf_feasible_cut(finst, subset).feasible == ftf_feasible_enum(finst, subset).feasible


def test_feasibility_is_monotone():
    rng = random.Random(7)
    for trial in range(25):
        inst = generate(GenSpec(family="random", n=6, arc_count=10, k=1, seed=900 + trial))
        subset = [j for j in range(len(inst.arcs)) if rng.random() < 0.5]
        if ftp_feasible_cut(inst, subset).feasible:
            bigger = set(subset) | {rng.randrange(len(inst.arcs))}
            assert ftp_feasible_cut(inst, bigger).feasible
