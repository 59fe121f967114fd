"""Verifiers deciding whether an arc set is a feasible solution.

Each problem family gets two independent routes: a fast cut-based check
built on max-flow, and a literal scenario-enumeration check against the
problem definition. The two must always agree; the test suite crosses
them on randomized (instance, subset) pairs.

Cut characterizations used here:

* fault-tolerant path: S survives every set of at most k vulnerable-arc
  failures iff the min s-t cut of (V, S) with capacity 1 on vulnerable
  and unbounded on safe arcs is at least k+1.
* fault-tolerant flow: S keeps `ell` disjoint s-t paths under any single
  vulnerable-arc failure iff every s-t cut of (V, S) has at least `ell`
  safe arcs or at least `ell`+1 arcs; with integer capacities `ell` on
  vulnerable and `ell`+1 on safe arcs this is exactly "every cut has
  scaled capacity at least ell*(ell+1)", which keeps the check in
  integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import BudgetExceededError, ValidationError
from .flows import UNBOUNDED, CapacityProfile, max_flow
from .instance import Instance, normalize_ids

ENUM_SCENARIO_BUDGET = 200_000


@dataclass(frozen=True)
class Verdict:
    """Feasibility answer with a replayable counterexample when negative.

    `witness` is a fault scenario (arc ids, possibly empty) that breaks
    the solution; it is present exactly when `feasible` is False. An
    empty witness means the arc set fails with no faults at all.
    """

    feasible: bool
    witness: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.feasible != (self.witness is None):
            raise ValidationError("witness must be present iff infeasible")


def _require_mode(inst: Instance, mode: str, op: str):
    if inst.mode != mode:
        raise ValidationError(f"{op} requires a {mode} instance, got {inst.mode}")


# ---------------------------------------------------------------------------
# fault-tolerant path


def ftp_feasible_cut(inst: Instance, solution) -> Verdict:
    """Cut-based check: min cut under (vulnerable=1, safe=unbounded) >= k+1.

    A violating min cut contains no safe arcs (those have unbounded
    capacity), so its vulnerable arcs form a scenario of at most k
    failures that disconnects the terminals; that scenario is returned
    as the witness.
    """
    _require_mode(inst, "ftp", "ftp_feasible_cut")
    ids = set(normalize_ids(solution))
    caps = CapacityProfile.build(
        inst,
        lambda i, a: 0 if i not in ids else (1 if a.vulnerable else UNBOUNDED),
    )
    value, cut = max_flow(inst, caps, inst.source, inst.sink)
    if value is UNBOUNDED or value >= inst.k + 1:
        return Verdict(True)
    witness = tuple(sorted(cut.ids))
    assert all(inst.arcs[i].vulnerable for i in witness), "violating cut holds a safe arc"
    assert len(witness) <= inst.k
    return Verdict(False, witness)


def ftp_feasible_enum(
    inst: Instance, solution, scenario_budget: int = ENUM_SCENARIO_BUDGET
) -> Verdict:
    """Definition-level check: replay every scenario of <= k failures.

    Scenarios are enumerated smallest-first and in lexicographic id
    order, so the reported witness is deterministic. The empty scenario
    is always included: the purchased set itself must connect the
    terminals.
    """
    _require_mode(inst, "ftp", "ftp_feasible_enum")
    ids = set(normalize_ids(solution))
    vulnerable = sorted(i for i in ids if inst.arcs[i].vulnerable)
    count = sum(comb(len(vulnerable), size) for size in range(0, inst.k + 1))
    if count > scenario_budget:
        raise BudgetExceededError(
            f"{count} scenarios exceed the enumeration budget {scenario_budget}"
        )
    adjacency: dict[str, list[int]] = {v: [] for v in inst.vertices}
    for i in ids:
        adjacency[inst.arcs[i].tail].append(i)
    for size in range(0, min(inst.k, len(vulnerable)) + 1):
        for scenario in itertools.combinations(vulnerable, size):
            if not _reaches(inst, adjacency, set(scenario)):
                return Verdict(False, scenario)
    return Verdict(True)


def _reaches(inst: Instance, adjacency, removed: set[int]) -> bool:
    seen = {inst.source}
    stack = [inst.source]
    while stack:
        u = stack.pop()
        if u == inst.sink:
            return True
        for i in adjacency[u]:
            if i in removed:
                continue
            h = inst.arcs[i].head
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return inst.sink in seen


# ---------------------------------------------------------------------------
# fault-tolerant flow


def ftf_feasible_cut(inst: Instance, solution) -> Verdict:
    """Scaled-capacity cut check for fault-tolerant flows.

    Capacities: `ell` on vulnerable arcs, `ell`+1 on safe arcs; feasible
    iff the min s-t cut is at least ell*(ell+1). A violating cut has at
    most `ell` arcs in total: with fewer than `ell` arcs the solution
    lacks `ell` disjoint paths outright (empty witness), otherwise some
    cut arc is vulnerable and its failure is the witness.
    """
    _require_mode(inst, "ftf", "ftf_feasible_cut")
    ids = set(normalize_ids(solution))
    ell = inst.ell
    caps = CapacityProfile.build(
        inst,
        lambda i, a: 0 if i not in ids else (ell if a.vulnerable else ell + 1),
    )
    value, cut = max_flow(inst, caps, inst.source, inst.sink)
    if value >= ell * (ell + 1):
        return Verdict(True)
    cut_ids = sorted(cut.ids)
    assert len(cut_ids) <= ell, "violating scaled cut wider than ell arcs"
    if len(cut_ids) < ell:
        return Verdict(False, ())
    vulnerable = [i for i in cut_ids if inst.arcs[i].vulnerable]
    assert vulnerable, "violating ell-arc cut without a vulnerable arc"
    return Verdict(False, (vulnerable[0],))


def ftf_feasible_enum(inst: Instance, solution) -> Verdict:
    """Definition-level check: `ell` disjoint paths after each single fault.

    Runs a unit-capacity max-flow on the solution minus each vulnerable
    member arc (and minus nothing), demanding value >= `ell` every time.
    """
    _require_mode(inst, "ftf", "ftf_feasible_enum")
    ids = set(normalize_ids(solution))
    scenarios = [()] + [(i,) for i in sorted(ids) if inst.arcs[i].vulnerable]
    for scenario in scenarios:
        removed = set(scenario)
        caps = CapacityProfile.build(
            inst, lambda i, a: 1 if i in ids and i not in removed else 0
        )
        value, _ = max_flow(inst, caps, inst.source, inst.sink)
        if value < inst.ell:
            return Verdict(False, scenario)
    return Verdict(True)
