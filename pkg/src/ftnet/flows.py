"""Integral max-flow and min-cost flow primitives.

Every solver and verifier in the package sits on these two operations.
Capacities are non-negative integers or the distinguished `UNBOUNDED`
value; flows and flow values are integers, costs are exact rationals.

Min-cost flow uses successive shortest augmenting paths with vertex
potentials; arc weights are non-negative so the initial potentials are
zero and Dijkstra suffices throughout. Augmenting-path choice is
deterministic (adjacency scanned in arc-id order), so supports are
reproducible run to run.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, ValidationError
from .instance import ArcSet, Instance


class _UnboundedType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = _UnboundedType()


@dataclass(frozen=True)
class CapacityProfile:
    """Per-arc capacities: non-negative integers or UNBOUNDED."""

    caps: tuple

    def __post_init__(self):
        for i, c in enumerate(self.caps):
            if c is UNBOUNDED:
                continue
            if not isinstance(c, int) or c < 0:
                raise ValidationError(f"arc {i}: capacity must be a non-negative int or UNBOUNDED")

    @classmethod
    def build(cls, inst: Instance, fn) -> "CapacityProfile":
        """Capacity per arc from `fn(arc_id, arc)`."""
        return cls(tuple(fn(i, a) for i, a in enumerate(inst.arcs)))

    @classmethod
    def uniform(cls, inst: Instance, cap) -> "CapacityProfile":
        return cls((cap,) * len(inst.arcs))


@dataclass(frozen=True)
class FlowResult:
    """An integral s-t flow with value, exact cost, support, and paths.

    `decomposition` lists (arc-id path, amount) pairs whose amounts sum
    to `value`; the flow vector is cycle-free and equals the arc-wise sum
    of the decomposition.
    """

    instance: Instance
    source: str
    sink: str
    flows: tuple[int, ...]
    value: int
    cost: Fraction
    support: ArcSet
    decomposition: tuple[tuple[tuple[int, ...], int], ...]


# ---------------------------------------------------------------------------
# raw engine on integer arc lists


def _maxflow_raw(n: int, arcs, s: int, t: int):
    """Edmonds-Karp on arcs given as (tail, head, capacity) index triples.

    Returns (value, per-arc flow list, set of vertices reachable from s
    in the final residual graph).
    """
    m = len(arcs)
    flow = [0] * m
    out: list[list[int]] = [[] for _ in range(n)]
    inn: list[list[int]] = [[] for _ in range(n)]
    for j, (u, v, _c) in enumerate(arcs):
        out[u].append(j)
        inn[v].append(j)

    value = 0
    while True:
        parent = [None] * n  # (arc id, forward?)
        parent[s] = (-1, True)
        queue = [s]
        qi = 0
        while qi < len(queue) and parent[t] is None:
            u = queue[qi]
            qi += 1
            for j in out[u]:
                v = arcs[j][1]
                if parent[v] is None and flow[j] < arcs[j][2]:
                    parent[v] = (j, True)
                    queue.append(v)
            for j in inn[u]:
                v = arcs[j][0]
                if parent[v] is None and flow[j] > 0:
                    parent[v] = (j, False)
                    queue.append(v)
        if parent[t] is None:
            return value, flow, {u for u in range(n) if parent[u] is not None}
        # bottleneck
        bottleneck = None
        v = t
        while v != s:
            j, fwd = parent[v]
            room = arcs[j][2] - flow[j] if fwd else flow[j]
            bottleneck = room if bottleneck is None else min(bottleneck, room)
            v = arcs[j][0] if fwd else arcs[j][1]
        v = t
        while v != s:
            j, fwd = parent[v]
            if fwd:
                flow[j] += bottleneck
                v = arcs[j][0]
            else:
                flow[j] -= bottleneck
                v = arcs[j][1]
        value += bottleneck


def max_flow(inst: Instance, caps: CapacityProfile, src: str, dst: str):
    """Max s-t flow value and a minimum cut.

    The cut is the set of arcs leaving the vertices reachable from `src`
    in the final residual graph. The value is UNBOUNDED exactly when a
    path of all-UNBOUNDED arcs connects the terminals; otherwise the cut
    consists of finite-capacity arcs only and its capacity equals the
    value.
    """
    if src == dst:
        raise ValidationError("max_flow endpoints must differ")
    index = inst.vertex_index
    n = len(inst.vertices)

    # unbounded value iff dst is reachable through UNBOUNDED arcs alone
    adj_unbounded: list[list[int]] = [[] for _ in range(n)]
    finite_total = 0
    for j, a in enumerate(inst.arcs):
        c = caps.caps[j]
        if c is UNBOUNDED:
            adj_unbounded[index[a.tail]].append(index[a.head])
        else:
            finite_total += c
    seen = {index[src]}
    stack = [index[src]]
    while stack:
        u = stack.pop()
        for v in adj_unbounded[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if index[dst] in seen:
        return UNBOUNDED, ArcSet.of(inst, ())

    surrogate = finite_total + 1
    raw_arcs = []
    for j, a in enumerate(inst.arcs):
        c = caps.caps[j]
        raw_arcs.append((index[a.tail], index[a.head], surrogate if c is UNBOUNDED else c))
    value, flow, reach = _maxflow_raw(n, raw_arcs, index[src], index[dst])
    cut = [
        j
        for j, (u, v, c) in enumerate(raw_arcs)
        if u in reach and v not in reach and c > 0
    ]
    return value, ArcSet.of(inst, cut)


# ---------------------------------------------------------------------------
# min-cost flow (successive shortest paths with potentials)


def min_cost_flow(
    inst: Instance,
    caps: CapacityProfile,
    target_value: int,
    src: str | None = None,
    dst: str | None = None,
) -> FlowResult:
    """Integral minimum-cost flow of exactly `target_value` units.

    Endpoints default to the instance terminals. UNBOUNDED capacities are
    replaced per call by `target_value`, an exact surrogate at the
    requested flow value. Raises InfeasibleError (carrying the limiting
    min cut) when the max flow falls short of the target.
    """
    if target_value < 0:
        raise ValidationError("target_value must be >= 0")
    src = inst.source if src is None else src
    dst = inst.sink if dst is None else dst
    if src == dst:
        raise ValidationError("flow endpoints must differ")
    index = inst.vertex_index
    n = len(inst.vertices)
    s, t = index[src], index[dst]
    m = len(inst.arcs)

    cap = [
        target_value if caps.caps[j] is UNBOUNDED else min(caps.caps[j], target_value)
        for j in range(m)
    ]
    tails = [index[a.tail] for a in inst.arcs]
    heads = [index[a.head] for a in inst.arcs]
    weights = [a.weight for a in inst.arcs]
    out: list[list[int]] = [[] for _ in range(n)]
    inn: list[list[int]] = [[] for _ in range(n)]
    for j in range(m):
        out[tails[j]].append(j)
        inn[heads[j]].append(j)

    flow = [0] * m
    potential = [Fraction(0)] * n
    sent = 0
    while sent < target_value:
        dist = [None] * n
        parent = [None] * n  # (arc id, forward?)
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        while heap:
            d, u = heapq.heappop(heap)
            if dist[u] != d:
                continue
            for j in out[u]:
                if flow[j] < cap[j]:
                    v = heads[j]
                    nd = d + weights[j] + potential[u] - potential[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent[v] = (j, True)
                        heapq.heappush(heap, (nd, v))
            for j in inn[u]:
                if flow[j] > 0:
                    v = tails[j]
                    nd = d - weights[j] + potential[u] - potential[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent[v] = (j, False)
                        heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            reach = {u for u in range(n) if dist[u] is not None}
            cut = [
                j
                for j in range(m)
                if tails[j] in reach and heads[j] not in reach and cap[j] > 0
            ]
            raise InfeasibleError(
                f"flow of value {target_value} infeasible: only {sent} units fit",
                cut=tuple(sorted(cut)),
            )
        # update potentials (vertices left unreached keep their old value,
        # capped relative to dist[t] to preserve reduced-cost feasibility)
        dt = dist[t]
        for u in range(n):
            potential[u] += dist[u] if dist[u] is not None and dist[u] < dt else dt
        bottleneck = target_value - sent
        v = t
        while v != s:
            j, fwd = parent[v]
            room = cap[j] - flow[j] if fwd else flow[j]
            bottleneck = min(bottleneck, room)
            v = tails[j] if fwd else heads[j]
        v = t
        while v != s:
            j, fwd = parent[v]
            if fwd:
                flow[j] += bottleneck
                v = tails[j]
            else:
                flow[j] -= bottleneck
                v = heads[j]
        sent += bottleneck

    flow_t, paths = _decompose(inst, src, dst, flow)
    cost = sum((flow_t[j] * weights[j] for j in range(m)), Fraction(0))
    support = ArcSet.of(inst, (j for j in range(m) if flow_t[j] > 0))
    return FlowResult(
        instance=inst,
        source=src,
        sink=dst,
        flows=tuple(flow_t),
        value=target_value,
        cost=cost,
        support=support,
        decomposition=tuple(paths),
    )


def path_decompose(result: FlowResult):
    """Decompose a flow into s-t paths with positive integer amounts.

    Any flow on cycles is cancelled first; weights are non-negative, so
    cancellation never increases cost. Returns a list of
    (arc-id sequence, amount) pairs whose amounts sum to the flow value.
    """
    _, paths = _decompose(result.instance, result.source, result.sink, list(result.flows))
    return paths


def _decompose(inst: Instance, src: str, dst: str, flow: list[int]):
    """Cancel all cycles, then peel s-t paths following lowest-id flow.

    Returns (cycle-cancelled flow vector, path list).
    """
    index = inst.vertex_index
    n = len(inst.vertices)
    s, t = index[src], index[dst]
    m = len(inst.arcs)
    heads = [index[a.head] for a in inst.arcs]
    out: list[list[int]] = [[] for _ in range(n)]
    for j in range(m):
        out[index[inst.arcs[j].tail]].append(j)

    flow = list(flow)
    while True:
        cycle = _find_cycle(n, out, heads, flow)
        if cycle is None:
            break
        amount = min(flow[e] for e in cycle)
        for e in cycle:
            flow[e] -= amount
    cancelled = list(flow)

    def first_out(u):
        for j in out[u]:
            if flow[j] > 0:
                return j
        return None

    paths = []
    while True:
        u = s
        path = []
        while u != t:
            j = first_out(u)
            if j is None:
                break
            path.append(j)
            u = heads[j]
        if u == t and path:
            amount = min(flow[e] for e in path)
            for e in path:
                flow[e] -= amount
            paths.append((tuple(path), amount))
        else:
            break
    assert all(f == 0 for f in flow), "acyclic leftover flow must vanish"
    return cancelled, paths


def _find_cycle(n, out, heads, flow):
    """A directed cycle (arc ids) in the positive-flow subgraph, or None."""
    color = [0] * n  # 0 fresh, 1 on stack, 2 done
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, 0)]
        color[root] = 1
        pos = {root: 0}
        arc_trail: list[int] = []
        while stack:
            u, ptr = stack[-1]
            pushed = False
            ol = out[u]
            while ptr < len(ol):
                j = ol[ptr]
                ptr += 1
                if flow[j] <= 0:
                    continue
                v = heads[j]
                if color[v] == 1:
                    return arc_trail[pos[v]:] + [j]
                if color[v] == 0:
                    stack[-1] = (u, ptr)
                    stack.append((v, 0))
                    color[v] = 1
                    pos[v] = len(stack) - 1
                    arc_trail.append(j)
                    pushed = True
                    break
            if pushed:
                continue
            stack.pop()
            color[u] = 2
            del pos[u]
            if arc_trail:
                arc_trail.pop()
    return None
