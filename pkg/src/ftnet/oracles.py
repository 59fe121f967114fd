"""Brute-force oracles grounding every solver's acceptance tests.

Each oracle is a literal exhaustive minimum over arc subsets, with
feasibility decided by the definition-level enumeration verifiers.
Subsets are scanned in nondecreasing total weight, so the first
feasible one is optimal and typical runs stop far short of the full
power set; budgets abort rather than approximate.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import BudgetExceededError
from .feasibility import ftf_feasible_enum, ftp_feasible_enum
from .ftf import PathSystem, _effective_instance
from .instance import ArcSet, Instance

ORACLE_ARC_BUDGET = 16


def subsets_by_cost(costs: list[Fraction]):
    """Yield (total cost, index tuple) over all subsets, cost ascending.

    `costs` must be sorted ascending. Classic lazy enumeration: extend a
    subset with the next index, or swap its last index for the next;
    every subset is produced exactly once.
    """
    heap = [(Fraction(0), ())]
    while heap:
        cost, chosen = heapq.heappop(heap)
        yield cost, chosen
        last = chosen[-1] if chosen else -1
        if last + 1 < len(costs):
            heapq.heappush(heap, (cost + costs[last + 1], chosen + (last + 1,)))
            if chosen:
                heapq.heappush(
                    heap, (cost - costs[last] + costs[last + 1], chosen[:-1] + (last + 1,))
                )


def brute_force_ftp(inst: Instance, max_arcs: int = ORACLE_ARC_BUDGET):
    """Exhaustive optimum, or None when the instance is infeasible."""
    if len(inst.arcs) > max_arcs:
        raise BudgetExceededError(f"{len(inst.arcs)} arcs exceed the oracle budget {max_arcs}")
    if not ftp_feasible_enum(inst, range(len(inst.arcs))).feasible:
        return None
    order = sorted(range(len(inst.arcs)), key=lambda j: (inst.arcs[j].weight, j))
    costs = [inst.arcs[j].weight for j in order]
    for cost, chosen in subsets_by_cost(costs):
        ids = [order[i] for i in chosen]
        if ftp_feasible_enum(inst, ids).feasible:
            return cost, ArcSet.of(inst, ids)
    raise AssertionError("exhaustion despite a feasible full arc set")


def brute_force_ftf(inst: Instance, max_arcs: int = ORACLE_ARC_BUDGET):
    """Exhaustive optimum, or None when the instance is infeasible."""
    if len(inst.arcs) > max_arcs:
        raise BudgetExceededError(f"{len(inst.arcs)} arcs exceed the oracle budget {max_arcs}")
    if not ftf_feasible_enum(inst, range(len(inst.arcs))).feasible:
        return None
    order = sorted(range(len(inst.arcs)), key=lambda j: (inst.arcs[j].weight, j))
    costs = [inst.arcs[j].weight for j in order]
    for cost, chosen in subsets_by_cost(costs):
        ids = [order[i] for i in chosen]
        if ftf_feasible_enum(inst, ids).feasible:
            return cost, ArcSet.of(inst, ids)
    raise AssertionError("exhaustion despite a feasible full arc set")


def brute_force_augmentation(
    inst: Instance, x0: PathSystem, max_arcs: int = ORACLE_ARC_BUDGET
):
    """Cheapest arc set outside `x0` making the union feasible, or None.

    Stray arcs of `x0` are candidates at weight zero, matching the
    augmentation solver's accounting.
    """
    x0.validate(inst)
    eff = _effective_instance(inst, x0)
    path_ids = sorted(x0.arc_ids)
    candidates = [j for j in range(len(inst.arcs)) if j not in x0.arc_ids]
    if len(candidates) > max_arcs:
        raise BudgetExceededError(
            f"{len(candidates)} candidate arcs exceed the oracle budget {max_arcs}"
        )
    if not ftf_feasible_enum(inst, path_ids + candidates).feasible:
        return None
    order = sorted(candidates, key=lambda j: (eff.arcs[j].weight, j))
    costs = [eff.arcs[j].weight for j in order]
    for cost, chosen in subsets_by_cost(costs):
        ids = [order[i] for i in chosen]
        if ftf_feasible_enum(inst, path_ids + ids).feasible:
            return cost, ArcSet.of(eff, ids)
    raise AssertionError("exhaustion despite a feasible full arc set")


def brute_force_ftp_undirected(inst: Instance, max_edges: int = ORACLE_ARC_BUDGET):
    """Undirected counterpart: edge subsets, scenarios, connectivity.

    Grounds the orientation reduction: the optimum here must equal the
    directed optimum after replacing each edge by two antiparallel arcs.
    Returns (cost, edge ids) or None.
    """
    if inst.directed:
        raise ValueError("undirected oracle on a directed instance")
    if len(inst.arcs) > max_edges:
        raise BudgetExceededError(f"{len(inst.arcs)} edges exceed the oracle budget {max_edges}")

    vulnerable = [j for j, a in enumerate(inst.arcs) if a.vulnerable]

    def connected(edge_ids, removed):
        adj: dict[str, list[str]] = {v: [] for v in inst.vertices}
        for j in edge_ids:
            if j in removed:
                continue
            a = inst.arcs[j]
            adj[a.tail].append(a.head)
            adj[a.head].append(a.tail)
        seen = {inst.source}
        stack = [inst.source]
        while stack:
            u = stack.pop()
            if u == inst.sink:
                return True
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    import itertools

    def feasible(edge_ids):
        members = set(edge_ids)
        vuln = [j for j in vulnerable if j in members]
        for size in range(0, min(inst.k, len(vuln)) + 1):
            for scenario in itertools.combinations(vuln, size):
                if not connected(members, set(scenario)):
                    return False
        return True

    if not feasible(range(len(inst.arcs))):
        return None
    order = sorted(range(len(inst.arcs)), key=lambda j: (inst.arcs[j].weight, j))
    costs = [inst.arcs[j].weight for j in order]
    for cost, chosen in subsets_by_cost(costs):
        ids = tuple(sorted(order[i] for i in chosen))
        if feasible(ids):
            return cost, ids
    raise AssertionError("exhaustion despite a feasible full edge set")
