"""Exact solvers: single-fault instances and acyclic instances.

The single-fault solver (`solve_1ftp`) works on any directed instance
with k=1. Minimal feasible solutions are unions of two s-t paths that
share no vulnerable arc, so the optimum is a shortest path over a metric
that prices each vertex pair (u, v) at the cheaper of

* the u-v distance through safe arcs only, and
* the cost of the cheapest pair of arc-disjoint u-v paths (a min-cost
  2-flow with unit capacities on all arcs).

The acyclic solver (`solve_kftp_dag`) layers the graph, then runs a
shortest path over per-layer demand configurations: vectors over a
layer's vertices summing to k+1. A link between adjacent configurations
costs the lightest arc subset that can ship the demands across with
capacity 1 on vulnerable and unlimited on safe arcs.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InfeasibleError, ValidationError
from .feasibility import ftp_feasible_cut
from .flows import CapacityProfile, _maxflow_raw, min_cost_flow
from .instance import ArcSet, Instance, LayeredInstance, dag_to_layered

LINK_COMBO_BUDGET = 200_000
CONFIG_BUDGET = 200_000


# ---------------------------------------------------------------------------
# k = 1


def solve_1ftp(inst: Instance) -> ArcSet:
    """Optimal solution for a directed instance with one possible fault."""
    if inst.mode != "ftp" or inst.k != 1:
        raise ValidationError("solve_1ftp requires an ftp instance with k=1")
    ids = _metric_route(inst, unit_ell2=True)
    return ArcSet.of(inst, ids)


def _metric_route(inst: Instance, unit_ell2: bool) -> tuple[int, ...]:
    """Shortest source-sink route over the two-tier pair metric.

    With `unit_ell2` the second tier is the cheapest pair of arc-disjoint
    paths (unit capacities everywhere, k=1 exact algorithm); otherwise it
    is the support of a min-cost (k+1)-flow under capacity k on safe and
    1 on vulnerable arcs (the k-approximation flavor). Returns the union
    of realizing arc ids along the metric path.
    """
    k = inst.k
    index = inst.vertex_index
    n = len(inst.vertices)
    safe_adj: dict[str, list[int]] = {v: [] for v in inst.vertices}
    for j, a in enumerate(inst.arcs):
        if not a.vulnerable:
            safe_adj[a.tail].append(j)

    if unit_ell2:
        caps = CapacityProfile.uniform(inst, 1)
    else:
        caps = CapacityProfile.build(inst, lambda i, a: 1 if a.vulnerable else k)

    def pair_rows(u: str):
        """(cost, realizer ids) per target vertex, or None when unrealizable."""
        row: dict[str, tuple[Fraction, tuple[int, ...]]] = {}
        for v, (d, arcs_used) in _safe_dijkstra(inst, safe_adj, u).items():
            row[v] = (d, arcs_used)
        for v in inst.vertices:
            if v == u:
                continue
            try:
                res = min_cost_flow(inst, caps, k + 1, src=u, dst=v)
            except InfeasibleError:
                continue
            cost = res.cost if unit_ell2 else res.support.cost
            if v not in row or cost < row[v][0]:
                row[v] = (cost, res.support.ids)
        return row

    dist: dict[str, Fraction] = {inst.source: Fraction(0)}
    realizer: dict[str, tuple[int, ...]] = {}
    parent: dict[str, str] = {}
    done: set[str] = set()
    heap = [(Fraction(0), index[inst.source], inst.source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == inst.sink:
            break
        for v, (step, arcs_used) in pair_rows(u).items():
            if v in done:
                continue
            nd = d + step
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                realizer[v] = arcs_used
                heapq.heappush(heap, (nd, index[v], v))
    if inst.sink not in done:
        verdict = ftp_feasible_cut(inst, range(len(inst.arcs)))
        assert not verdict.feasible, "metric search failed on a feasible instance"
        raise InfeasibleError("instance is infeasible", cut=verdict.witness)
    ids: set[int] = set()
    v = inst.sink
    while v != inst.source:
        ids.update(realizer[v])
        v = parent[v]
    return tuple(sorted(ids))


def _safe_dijkstra(inst: Instance, safe_adj, start: str):
    """Distances and realizing arc sets through safe arcs only."""
    index = inst.vertex_index
    dist = {start: Fraction(0)}
    parent_arc: dict[str, int] = {}
    done = set()
    heap = [(Fraction(0), index[start], start)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for j in safe_adj[u]:
            v = inst.arcs[j].head
            nd = d + inst.arcs[j].weight
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                parent_arc[v] = j
                heapq.heappush(heap, (nd, index[v], v))
    rows = {}
    for v in done:
        if v == start:
            continue
        arcs_used = []
        w = v
        while w != start:
            arcs_used.append(parent_arc[w])
            w = inst.arcs[parent_arc[w]].tail
        rows[v] = (dist[v], tuple(sorted(arcs_used)))
    return rows


# ---------------------------------------------------------------------------
# configurations and link costs


@dataclass(frozen=True)
class Configuration:
    """A demand vector over one layer's vertices summing to k+1."""

    layer: int
    demands: tuple[tuple[str, int], ...]  # sorted by vertex id, all entries > 0

    @classmethod
    def make(cls, layer: int, demand_map: dict[str, int]) -> "Configuration":
        items = tuple(sorted((v, d) for v, d in demand_map.items() if d > 0))
        if any(d < 0 for _, d in items):
            raise ValidationError("negative demand")
        return cls(layer, items)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.demands)

    @property
    def total(self) -> int:
        return sum(d for _, d in self.demands)


def compute_link_cost(inst: Instance, d1: Configuration, d2: Configuration):
    """Cheapest arc subset shipping demands d1 -> d2 across adjacent layers.

    Feasibility of a subset means the transportation problem with
    supplies d1, demands d2, capacity 1 on vulnerable and unlimited on
    safe arcs routes all d1.total units. Only per-pair dominant choices
    need considering: for each (u, v) either the cheapest safe arc or
    the j cheapest vulnerable arcs (j up to min(supply, demand)), since
    any feasible subset can be rewritten into that form without added
    weight. Choices are scanned in increasing total weight, so the first
    feasible combination is optimal.

    Returns (cost, realizing arc ids), or (None, ()) when no subset
    works and the link is absent.
    """
    if d2.layer != d1.layer + 1:
        raise ValidationError("configurations must sit on adjacent layers")
    if d1.total != d2.total:
        raise ValidationError("configurations must carry equal totals")
    total = d1.total
    supply = dict(d1.demands)
    demand = dict(d2.demands)

    # menus[p] = list of (cost, cap, ids) per tail-head pair, cost ascending
    pairs: list[tuple[str, str]] = []
    menus: list[list[tuple[Fraction, int, tuple[int, ...]]]] = []
    for u in d1.support:
        for v in d2.support:
            between = [j for j in inst.out_arcs[u] if inst.arcs[j].head == v]
            if not between:
                continue
            options: list[tuple[Fraction, int, tuple[int, ...]]] = [(Fraction(0), 0, ())]
            safes = sorted(
                (j for j in between if not inst.arcs[j].vulnerable),
                key=lambda j: (inst.arcs[j].weight, j),
            )
            if safes:
                options.append((inst.arcs[safes[0]].weight, total, (safes[0],)))
            vulns = sorted(
                (j for j in between if inst.arcs[j].vulnerable),
                key=lambda j: (inst.arcs[j].weight, j),
            )
            run_cost = Fraction(0)
            chosen: list[int] = []
            for j in vulns[: min(supply[u], demand[v])]:
                run_cost += inst.arcs[j].weight
                chosen.append(j)
                options.append((run_cost, len(chosen), tuple(chosen)))
            options.sort(key=lambda o: (o[0], o[1]))
            pairs.append((u, v))
            menus.append(options)

    if not menus:
        return None, ()

    node_of: dict[str, int] = {}

    def node(tag: str) -> int:
        if tag not in node_of:
            node_of[tag] = len(node_of)
        return node_of[tag]

    s_star, t_star = node("S*"), node("T*")
    base_arcs: list[tuple[int, int, int]] = []
    for u, d in d1.demands:
        base_arcs.append((s_star, node("L:" + u), d))
    for v, d in d2.demands:
        base_arcs.append((node("R:" + v), t_star, d))

    def feasible_caps(caps_per_pair) -> bool:
        arcs = list(base_arcs)
        for p, cap in enumerate(caps_per_pair):
            if cap > 0:
                u, v = pairs[p]
                arcs.append((node("L:" + u), node("R:" + v), cap))
        value, _, _ = _maxflow_raw(len(node_of), arcs, s_star, t_star)
        return value >= total

    def feasible(choice: tuple[int, ...]) -> bool:
        return feasible_caps([menus[p][i][1] for p, i in enumerate(choice)])

    # the options of a pair are exclusive choices, so the best possible
    # capacity is the per-pair maximum, not the costliest option
    if not feasible_caps([max(opt[1] for opt in m) for m in menus]):
        return None, ()

    start = (0,) * len(menus)
    heap = [(sum((m[0][0] for m in menus), Fraction(0)), start)]
    seen = {start}
    pops = 0
    while heap:
        cost, choice = heapq.heappop(heap)
        pops += 1
        if pops > LINK_COMBO_BUDGET:
            raise BudgetExceededError("link-cost combination budget exceeded")
        if feasible(choice):
            ids: set[int] = set()
            for p, opt_idx in enumerate(choice):
                ids.update(menus[p][opt_idx][2])
            return cost, tuple(sorted(ids))
        for p in range(len(menus)):
            if choice[p] + 1 < len(menus[p]):
                nxt = choice[:p] + (choice[p] + 1,) + choice[p + 1 :]
                if nxt not in seen:
                    seen.add(nxt)
                    delta = menus[p][choice[p] + 1][0] - menus[p][choice[p]][0]
                    heapq.heappush(heap, (cost + delta, nxt))
    raise AssertionError("combination search exhausted despite feasible full menu")


# ---------------------------------------------------------------------------
# acyclic instances, fixed k


def solve_kftp_dag(inst: Instance, config_budget: int = CONFIG_BUDGET) -> ArcSet:
    """Optimal solution on an acyclic instance for any fixed k.

    Layers the graph, runs a deterministic Dijkstra over per-layer
    configurations with lazily evaluated link costs, maps the realizing
    arcs back to the original instance, and strips redundant arcs while
    the cut verifier stays satisfied.
    """
    if inst.mode != "ftp":
        raise ValidationError("solve_kftp_dag requires an ftp instance")
    layered = dag_to_layered(inst)  # raises CyclicGraphError on cycles
    li = layered.instance
    k = inst.k
    total = k + 1
    r = layered.layer_count

    out_by_vertex = li.out_arcs
    start = Configuration.make(1, {inst.source: total})
    goal = Configuration.make(r, {inst.sink: total})

    link_memo: dict[tuple[Configuration, Configuration], tuple] = {}

    def link(d1: Configuration, d2: Configuration):
        key = (d1, d2)
        if key not in link_memo:
            link_memo[key] = compute_link_cost(li, d1, d2)
        return link_memo[key]

    def successors(d1: Configuration):
        neighbors = sorted(
            {li.arcs[j].head for u in d1.support for j in out_by_vertex[u]}
        )
        if not neighbors:
            return
        supply = dict(d1.demands)
        for size in range(1, min(total, len(neighbors)) + 1):
            for subset in itertools.combinations(neighbors, size):
                for comp in _compositions(total, size):
                    demand = dict(zip(subset, comp))
                    if not _capacity_filter(li, supply, demand, total):
                        continue
                    yield Configuration.make(d1.layer + 1, demand)

    dist: dict[Configuration, Fraction] = {start: Fraction(0)}
    parent: dict[Configuration, Configuration] = {}
    done: set[Configuration] = set()
    heap = [(Fraction(0), start.demands, start)]
    states = 1
    while heap:
        d, _, conf = heapq.heappop(heap)
        if conf in done:
            continue
        done.add(conf)
        if conf == goal:
            break
        for nxt in successors(conf):
            if nxt in done:
                continue
            cost, _ids = link(conf, nxt)
            if cost is None:
                continue
            nd = d + cost
            if nxt not in dist:
                states += 1
                if states > config_budget:
                    raise BudgetExceededError("configuration state budget exceeded")
            if nxt not in dist or nd < dist[nxt]:
                dist[nxt] = nd
                parent[nxt] = conf
                heapq.heappush(heap, (nd, nxt.demands, nxt))

    if goal not in done:
        verdict = ftp_feasible_cut(inst, range(len(inst.arcs)))
        assert not verdict.feasible, "configuration search failed on a feasible instance"
        raise InfeasibleError("instance is infeasible", cut=verdict.witness)

    layered_ids: set[int] = set()
    conf = goal
    while conf != start:
        prev = parent[conf]
        _, ids = link(prev, conf)
        layered_ids.update(ids)
        conf = prev
    candidate = set(layered.original_ids(layered_ids))
    return ArcSet.of(inst, _minimalize(inst, candidate))


def _minimalize(inst: Instance, ids: set[int]) -> tuple[int, ...]:
    """Greedily drop arcs (heaviest first) while the cut verifier passes."""
    current = set(ids)
    order = sorted(current, key=lambda j: (-inst.arcs[j].weight, -j))
    for j in order:
        trial = current - {j}
        if ftp_feasible_cut(inst, trial).feasible:
            current = trial
    return tuple(sorted(current))


def _compositions(total: int, slots: int):
    """Positive integer vectors of length `slots` summing to `total`."""
    if slots == 1:
        yield (total,)
        return
    for first in range(1, total - slots + 2):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _capacity_filter(inst: Instance, supply, demand, total) -> bool:
    """Cheap necessary condition before pricing a link."""
    for u, need in supply.items():
        room = 0
        for j in inst.out_arcs[u]:
            if inst.arcs[j].head in demand:
                room += 1 if inst.arcs[j].vulnerable else total
        if room < need:
            return False
    for v, need in demand.items():
        room = 0
        for u in supply:
            for j in inst.out_arcs[u]:
                if inst.arcs[j].head == v:
                    room += 1 if inst.arcs[j].vulnerable else total
        if room < need:
            return False
    return True
