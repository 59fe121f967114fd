"""Exact minimum-cost directed Steiner network for few terminal pairs.

Given a digraph with non-negative arc costs and p terminal pairs, find
the cheapest arc set containing a directed path for every pair. The
augmentation solver calls this once per candidate link, always with a
small fixed p, and requires exact optima.

The solver is a best-first branch-and-bound over include/exclude
decisions on priced arcs. Zero-cost arcs are always available. The
admissible bound for a partial state is the cost of included arcs plus
the largest per-pair deficiency, where a pair's deficiency is its
cheapest connection treating included and zero-cost arcs as free and
excluded arcs as absent. `dsn_oracle` validates the same contract by
exhaustive subset enumeration in increasing cost order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InfeasibleError, ValidationError

DEFAULT_PAIR_BOUND = 3
ORACLE_PRICED_ARC_BOUND = 18


@dataclass(frozen=True)
class DsnInstance:
    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, Fraction], ...]  # (tail, head, cost)
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValidationError("duplicate vertex id")
        if not self.pairs:
            raise ValidationError("at least one terminal pair required")
        for tail, head, cost in self.arcs:
            if tail not in vs or head not in vs:
                raise ValidationError(f"arc {tail}->{head} references unknown vertex")
            if cost < 0:
                raise ValidationError("negative arc cost")
        for a, b in self.pairs:
            if a not in vs or b not in vs:
                raise ValidationError(f"terminal pair ({a},{b}) references unknown vertex")


def dsn_solve(d: DsnInstance, pair_bound: int = DEFAULT_PAIR_BOUND):
    """Exact optimum: (cost, arc ids). Raises on disconnection.

    Trivial pairs (source equals target) are satisfied vacuously.
    """
    if len(d.pairs) > pair_bound:
        raise BudgetExceededError(f"{len(d.pairs)} terminal pairs exceed bound {pair_bound}")
    pairs = [(a, b) for a, b in d.pairs if a != b]
    zero_ids = frozenset(j for j, (_, _, c) in enumerate(d.arcs) if c == 0)
    priced = [j for j in range(len(d.arcs)) if j not in zero_ids]
    index = {v: i for i, v in enumerate(d.vertices)}
    n = len(d.vertices)
    out: list[list[int]] = [[] for _ in range(n)]
    for j, (u, v, _) in enumerate(d.arcs):
        out[index[u]].append(j)

    if not pairs:
        return Fraction(0), ()

    def cheapest_path(src: str, dst: str, included: frozenset, excluded: frozenset):
        """(extra cost, arc ids) of the cheapest src-dst path where
        included/zero arcs are free and excluded arcs are absent."""
        dist = [None] * n
        parent = [None] * n
        s, t = index[src], index[dst]
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        while heap:
            dd, u = heapq.heappop(heap)
            if dist[u] != dd:
                continue
            if u == t:
                break
            for j in out[u]:
                if j in excluded:
                    continue
                w = Fraction(0) if j in zero_ids or j in included else d.arcs[j][2]
                v = index[d.arcs[j][1]]
                nd = dd + w
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    parent[v] = j
                    heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            return None, ()
        path = []
        u = t
        while u != s:
            j = parent[u]
            path.append(j)
            u = index[d.arcs[j][0]]
        return dist[t], tuple(reversed(path))

    def bound_and_branch(included: frozenset, excluded: frozenset):
        """(admissible bound, branch arc or None). Branch arc is the first
        priced undecided arc on the worst pair's cheapest path."""
        worst = Fraction(0)
        branch = None
        for a, b in pairs:
            extra, path = cheapest_path(a, b, included, excluded)
            if extra is None:
                return None, None
            if extra > worst or (branch is None and extra > 0):
                if extra >= worst:
                    worst = extra
                if extra > 0 and branch is None:
                    for j in path:
                        if j not in zero_ids and j not in included:
                            branch = j
                            break
        return worst, branch

    base_cost = Fraction(0)
    counter = 0
    start = (frozenset(), frozenset())
    worst, branch = bound_and_branch(*start)
    if worst is None:
        raise InfeasibleError("some terminal pair is disconnected")
    heap = [(base_cost + worst, counter, start, branch)]
    best = None
    while heap:
        bound, _, (included, excluded), branch = heapq.heappop(heap)
        if best is not None and bound >= best[0]:
            break
        if branch is None:
            # all pairs connected by included + zero arcs at this bound
            best = (bound, included)
            break
        for decision in (True, False):
            if decision:
                ni, ne = included | {branch}, excluded
            else:
                ni, ne = included, excluded | {branch}
            worst, nxt_branch = bound_and_branch(ni, ne)
            if worst is None:
                continue
            cost = sum((d.arcs[j][2] for j in ni), Fraction(0))
            counter += 1
            heapq.heappush(heap, (cost + worst, counter, (ni, ne), nxt_branch))
    if best is None:
        raise InfeasibleError("some terminal pair is disconnected")
    cost, included = best
    kept = _minimal_positive(d, pairs, included, zero_ids, index, out)
    used = _witness_arcs(d, pairs, kept, zero_ids, index, out)
    return sum((d.arcs[j][2] for j in kept), Fraction(0)), tuple(sorted(kept | used))


def _minimal_positive(d, pairs, included, zero_ids, index, out) -> frozenset:
    """Drop priced arcs (costliest first) while all pairs stay connected."""
    kept = set(included)
    for j in sorted(included, key=lambda j: (-d.arcs[j][2], -j)):
        trial = kept - {j}
        if all(_connected(d, a, b, trial, zero_ids, index, out) for a, b in pairs):
            kept = trial
    return frozenset(kept)


def _connected(d, src, dst, included, zero_ids, index, out) -> bool:
    s, t = index[src], index[dst]
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for j in out[u]:
            if j in included or j in zero_ids:
                v = index[d.arcs[j][1]]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return t in seen


def _witness_arcs(d, pairs, included, zero_ids, index, out) -> set:
    """Zero-cost arcs used by per-pair witness paths inside the solution."""
    used: set[int] = set()
    for a, b in pairs:
        s, t = index[a], index[b]
        parent = {s: None}
        queue = [s]
        qi = 0
        while qi < len(queue) and t not in parent:
            u = queue[qi]
            qi += 1
            for j in out[u]:
                if j in included or j in zero_ids:
                    v = index[d.arcs[j][1]]
                    if v not in parent:
                        parent[v] = j
                        queue.append(v)
        assert t in parent, "solution lost a pair's connectivity"
        u = t
        while parent[u] is not None:
            j = parent[u]
            if j in zero_ids:
                used.add(j)
            u = index[d.arcs[j][0]]
    return used


def dsn_oracle(d: DsnInstance, priced_bound: int = ORACLE_PRICED_ARC_BOUND):
    """Exhaustive minimum over priced-arc subsets, cheapest first.

    Zero-cost arcs are always available; feasibility is one reachability
    check per pair. The first feasible subset in increasing cost order
    is optimal.
    """
    pairs = [(a, b) for a, b in d.pairs if a != b]
    zero_ids = frozenset(j for j, (_, _, c) in enumerate(d.arcs) if c == 0)
    priced = sorted(
        (j for j in range(len(d.arcs)) if j not in zero_ids),
        key=lambda j: (d.arcs[j][2], j),
    )
    if len(priced) > priced_bound:
        raise BudgetExceededError(f"{len(priced)} priced arcs exceed oracle bound {priced_bound}")
    index = {v: i for i, v in enumerate(d.vertices)}
    out: list[list[int]] = [[] for _ in d.vertices]
    for j, (u, v, _) in enumerate(d.arcs):
        out[index[u]].append(j)

    if not pairs:
        return Fraction(0), ()

    full = frozenset(priced)
    if not all(_connected(d, a, b, full, zero_ids, index, out) for a, b in pairs):
        raise InfeasibleError("some terminal pair is disconnected")

    # enumerate subsets of the cost-sorted priced arcs in nondecreasing
    # total cost: pop a subset, extend with the next index or swap the
    # last chosen index for the next
    heap = [(Fraction(0), ())]
    while heap:
        cost, chosen = heapq.heappop(heap)
        subset = frozenset(priced[i] for i in chosen)
        if all(_connected(d, a, b, subset, zero_ids, index, out) for a, b in pairs):
            used = _witness_arcs(d, pairs, subset, zero_ids, index, out)
            return cost, tuple(sorted(subset | used))
        last = chosen[-1] if chosen else -1
        if last + 1 < len(priced):
            heapq.heappush(
                heap, (cost + d.arcs[priced[last + 1]][2], chosen + (last + 1,))
            )
            if chosen:
                swapped = chosen[:-1] + (last + 1,)
                heapq.heappush(
                    heap,
                    (cost - d.arcs[priced[last]][2] + d.arcs[priced[last + 1]][2], swapped),
                )
    raise AssertionError("subset enumeration exhausted despite feasible full set")
