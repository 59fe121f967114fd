"""Fault-tolerant flow algorithms.

Three entry points:

* `approx_ftf_ellplus1`: support of a min-cost flow of value
  ell*(ell+1) under integer capacities ell on vulnerable and ell+1 on
  safe arcs (the integral scaling of capacities 1 and 1+1/ell). Always
  feasible, cost at most (ell+1) times optimal.
* `solve_augmentation`: given ell disjoint source-sink paths, the exact
  cheapest arc set outside them that makes the union survive any single
  vulnerable-arc failure.
* `approx_ftf_2`: min-cost ell-flow plus an exact augmentation; each
  part costs at most the optimum, so the union is a 2-approximation.

The augmentation reduces to a shortest path over nodes that are
per-path position tuples. Advancing one coordinate across a safe arc is
free; any other advance x -> y is priced by an exact directed Steiner
network instance: connect each moved coordinate's old vertex to its new
one using arcs outside the path system, with the skipped subpaths
offered reversed at zero cost. A link is admitted only when the
computed solution, together with those reversed subpaths, places the
endpoints of every vulnerable skipped subpath in one strongly connected
component; that is exactly the certificate the residual-graph
feasibility test consumes.

Position tuples (not raw vertices) keep the construction well-defined
when the arc-disjoint paths share vertices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction

from .dsn import DsnInstance, dsn_solve
from .errors import BudgetExceededError, InfeasibleError, ValidationError
from .flows import CapacityProfile, min_cost_flow
from .instance import Arc, ArcSet, Instance, normalize_ids

AUX_NODE_BUDGET = 1500


@dataclass(frozen=True)
class PathSystem:
    """`ell` pairwise arc-disjoint source-sink paths, by arc id.

    Arcs handed in that sit on none of the paths are kept aside as
    `stray`: they leave the protected set and are re-offered to the
    augmentation at zero cost.
    """

    paths: tuple[tuple[int, ...], ...]
    stray: tuple[int, ...] = ()

    @property
    def arc_ids(self) -> frozenset:
        return frozenset(j for p in self.paths for j in p)

    def validate(self, inst: Instance):
        seen: set[int] = set()
        for p in self.paths:
            if not p:
                raise ValidationError("empty path in path system")
            if inst.arcs[p[0]].tail != inst.source:
                raise ValidationError("path does not start at the source")
            if inst.arcs[p[-1]].head != inst.sink:
                raise ValidationError("path does not end at the sink")
            for a, b in zip(p, p[1:]):
                if inst.arcs[a].head != inst.arcs[b].tail:
                    raise ValidationError("path arcs are not consecutive")
            for j in p:
                if j in seen:
                    raise ValidationError("paths share an arc")
                seen.add(j)
        if seen & set(self.stray):
            raise ValidationError("stray arcs overlap the paths")

    def vertex_seq(self, inst: Instance, i: int) -> list[str]:
        p = self.paths[i]
        return [inst.arcs[p[0]].tail] + [inst.arcs[j].head for j in p]


def build_path_system(inst: Instance, arc_ids, ell: int | None = None) -> PathSystem:
    """Decompose an arc set into `ell` disjoint paths plus strays.

    Runs a min-cost unit-capacity flow restricted to the given arcs, so
    the decomposition is deterministic and cheapest-first.
    """
    ell = inst.ell if ell is None else ell
    if ell is None or ell < 1:
        raise ValidationError("ell must be a positive integer")
    ids = set(normalize_ids(arc_ids))
    caps = CapacityProfile.build(inst, lambda i, a: 1 if i in ids else 0)
    result = min_cost_flow(inst, caps, ell)  # raises InfeasibleError when short
    paths = []
    for path, amount in result.decomposition:
        assert amount == 1, "unit capacities admit only unit path amounts"
        paths.append(path)
    stray = tuple(sorted(ids - set(result.support.ids)))
    return PathSystem(paths=tuple(paths), stray=stray)


def _effective_instance(inst: Instance, ps: PathSystem) -> Instance:
    """Stray arcs re-enter the purchasable pool at weight zero."""
    if not ps.stray:
        return inst
    stray = set(ps.stray)
    arcs = tuple(
        Arc(a.tail, a.head, Fraction(0) if j in stray else a.weight, a.vulnerable)
        for j, a in enumerate(inst.arcs)
    )
    return Instance(
        vertices=inst.vertices,
        arcs=arcs,
        source=inst.source,
        sink=inst.sink,
        mode=inst.mode,
        k=inst.k,
        ell=inst.ell,
        directed=inst.directed,
        name=inst.name,
    )


# ---------------------------------------------------------------------------
# (ell+1)-approximation


def approx_ftf_ellplus1(inst: Instance) -> ArcSet:
    """Support of the scaled min-cost flow; feasible, cost <= (ell+1)*OPT."""
    if inst.mode != "ftf":
        raise ValidationError("approx_ftf_ellplus1 requires an ftf instance")
    ell = inst.ell
    caps = CapacityProfile.build(inst, lambda i, a: ell if a.vulnerable else ell + 1)
    result = min_cost_flow(inst, caps, ell * (ell + 1))
    return result.support


# ---------------------------------------------------------------------------
# auxiliary graph over position tuples


@dataclass(frozen=True)
class AuxLink:
    frm: tuple[int, ...]
    to: tuple[int, ...]
    kind: str  # "A1" | "A2"
    weight: Fraction
    payload: tuple[int, ...]  # purchased arc ids (empty for A1)


class AuxGraph:
    """Lazy auxiliary graph for the augmentation shortest path."""

    def __init__(self, inst: Instance, ps: PathSystem, node_budget: int = AUX_NODE_BUDGET):
        if inst.mode != "ftf":
            raise ValidationError("augmentation requires an ftf instance")
        ps.validate(inst)
        self.inst = inst
        self.ps = ps
        self.eff = _effective_instance(inst, ps)
        self.ell = len(ps.paths)
        self.lens = tuple(len(p) for p in ps.paths)
        self.vertex_seqs = [ps.vertex_seq(inst, i) for i in range(self.ell)]
        node_count = 1
        for length in self.lens:
            node_count *= length + 1
        if node_count > node_budget:
            raise BudgetExceededError(
                f"{node_count} auxiliary nodes exceed the budget {node_budget}"
            )
        self.node_count = node_count
        self.source_node = (0,) * self.ell
        self.sink_node = self.lens
        self._path_arc_set = ps.arc_ids
        self._dsn_memo: dict = {}
        # reachability in the full residual graph prunes hopeless jumps
        self._full_reach = self._reachability_closure()

    # -- plumbing

    def vertex_at(self, i: int, pos: int) -> str:
        return self.vertex_seqs[i][pos]

    def _arc_positions(self, i: int, lo: int, hi: int) -> list[int]:
        """Arc ids of path i between positions lo..hi."""
        return list(self.ps.paths[i][lo:hi])

    def _subpath_vulnerable(self, i: int, lo: int, hi: int) -> bool:
        return any(self.inst.arcs[j].vulnerable for j in self._arc_positions(i, lo, hi))

    def _reachability_closure(self):
        inst = self.inst
        adj: dict[str, set[str]] = {v: set() for v in inst.vertices}
        for j, a in enumerate(inst.arcs):
            if j in self._path_arc_set:
                adj[a.head].add(a.tail)  # reversed
            else:
                adj[a.tail].add(a.head)
        reach: dict[str, set[str]] = {}
        for v in inst.vertices:
            seen = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            reach[v] = seen
        return reach

    def nodes(self):
        """All position tuples, lexicographic; mostly for tests and demos."""

        def rec(i):
            if i == self.ell:
                yield ()
                return
            for pos in range(self.lens[i] + 1):
                for rest in rec(i + 1):
                    yield (pos,) + rest

        for head in rec(0):
            yield head

    # -- links

    def a1_successors(self, node):
        """Advance one coordinate across one safe arc; weight zero.

        Chains of these recover every multi-coordinate safe advance, so
        restricting to single steps preserves shortest-path distances.
        """
        out = []
        for i in range(self.ell):
            pos = node[i]
            if pos < self.lens[i] and not self.inst.arcs[self.ps.paths[i][pos]].vulnerable:
                out.append(node[:i] + (pos + 1,) + node[i + 1 :])
        return out

    def a2_link(self, frm, to) -> AuxLink | None:
        """Price the jump frm -> to, or None when no admissible link exists."""
        if frm == to or any(a > b for a, b in zip(frm, to)):
            return None
        moved = [i for i in range(self.ell) if frm[i] != to[i]]
        if not any(self._subpath_vulnerable(i, frm[i], to[i]) for i in moved):
            return None
        for i in moved:
            if self.vertex_at(i, to[i]) not in self._full_reach[self.vertex_at(i, frm[i])]:
                return None

        key = tuple(
            (i, frm[i], to[i]) for i in moved
        )
        if key not in self._dsn_memo:
            self._dsn_memo[key] = self._price(frm, to, moved)
        priced = self._dsn_memo[key]
        if priced is None:
            return None
        weight, payload = priced
        return AuxLink(frm=frm, to=to, kind="A2", weight=weight, payload=payload)

    def _price(self, frm, to, moved):
        inst = self.inst
        eff = self.eff
        arcs: list[tuple[str, str, Fraction]] = []
        origin: list[int | None] = []
        for j, a in enumerate(eff.arcs):
            if j not in self._path_arc_set:
                arcs.append((a.tail, a.head, a.weight))
                origin.append(j)
        reversed_ids: list[int] = []
        for i in moved:
            for j in self._arc_positions(i, frm[i], to[i]):
                a = inst.arcs[j]
                arcs.append((a.head, a.tail, Fraction(0)))
                origin.append(None)
                reversed_ids.append(j)
        pairs = tuple((self.vertex_at(i, frm[i]), self.vertex_at(i, to[i])) for i in moved)
        d = DsnInstance(vertices=inst.vertices, arcs=tuple(arcs), pairs=pairs)
        try:
            cost, chosen = dsn_solve(d, pair_bound=max(self.ell, 3))
        except InfeasibleError:
            return None

        payload = tuple(sorted(origin[j] for j in chosen if origin[j] is not None))
        # admit only when the solution plus the reversed subpaths puts the
        # endpoints of every vulnerable skipped subpath in one strong component
        terminals = {
            self.vertex_at(i, frm[i])
            for i in moved
            if self._subpath_vulnerable(i, frm[i], to[i])
        } | {
            self.vertex_at(i, to[i])
            for i in moved
            if self._subpath_vulnerable(i, frm[i], to[i])
        }
        cert_arcs = [(inst.arcs[j].head, inst.arcs[j].tail) for j in reversed_ids]
        cert_arcs += [(inst.arcs[j].tail, inst.arcs[j].head) for j in payload]
        comp = _scc_membership(self.inst.vertices, cert_arcs)
        if len({comp[v] for v in terminals}) > 1:
            return None
        return cost, payload

    def links_from(self, node) -> list[AuxLink]:
        """All outgoing links, eagerly; A1 steps first, then A2 jumps."""
        links = [
            AuxLink(frm=node, to=nxt, kind="A1", weight=Fraction(0), payload=())
            for nxt in self.a1_successors(node)
        ]
        for other in self.nodes():
            link = self.a2_link(node, other)
            if link is not None:
                links.append(link)
        return links


def build_aux_graph(inst: Instance, x0: PathSystem, node_budget: int = AUX_NODE_BUDGET) -> AuxGraph:
    """Auxiliary graph over position tuples; links are priced on demand."""
    return AuxGraph(inst, x0, node_budget)


# ---------------------------------------------------------------------------
# exact augmentation and the 2-approximation


def solve_augmentation(
    inst: Instance, x0: PathSystem, node_budget: int = AUX_NODE_BUDGET
) -> ArcSet:
    """Cheapest arc set outside `x0` whose union with it is feasible.

    Runs Dijkstra from the all-source tuple to the all-sink tuple and
    unions the purchased arc sets of the chosen links. Stray arcs of
    `x0` count at weight zero in the returned cost.
    """
    aux = build_aux_graph(inst, x0, node_budget)
    dist: dict[tuple, Fraction] = {aux.source_node: Fraction(0)}
    chosen: dict[tuple, AuxLink] = {}
    done: set[tuple] = set()
    heap = [(Fraction(0), aux.source_node)]
    while heap:
        d, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == aux.sink_node:
            break
        for nxt in aux.a1_successors(node):
            if nxt not in done and (nxt not in dist or d < dist[nxt]):
                dist[nxt] = d
                chosen[nxt] = AuxLink(node, nxt, "A1", Fraction(0), ())
                heapq.heappush(heap, (d, nxt))
        for other in _later_nodes(node, aux.lens):
            link = aux.a2_link(node, other)
            if link is None:
                continue
            nd = d + link.weight
            if other not in done and (other not in dist or nd < dist[other]):
                dist[other] = nd
                chosen[other] = link
                heapq.heappush(heap, (nd, other))
    if aux.sink_node not in done:
        raise InfeasibleError("augmentation infeasible: no admissible link sequence")
    ids: set[int] = set()
    node = aux.sink_node
    while node != aux.source_node:
        link = chosen[node]
        ids.update(link.payload)
        node = link.frm
    return ArcSet.of(aux.eff, ids)


def _later_nodes(node, lens):
    """Position tuples componentwise >= node, excluding node itself."""

    def rec(i):
        if i == len(lens):
            yield ()
            return
        for pos in range(node[i], lens[i] + 1):
            for rest in rec(i + 1):
                yield (pos,) + rest

    for cand in rec(0):
        if cand != node:
            yield cand


def approx_ftf_2(inst: Instance, node_budget: int = AUX_NODE_BUDGET) -> ArcSet:
    """Min-cost ell-flow, then exact augmentation; cost <= 2 * OPT."""
    if inst.mode != "ftf":
        raise ValidationError("approx_ftf_2 requires an ftf instance")
    base = min_cost_flow(inst, CapacityProfile.uniform(inst, 1), inst.ell)
    paths = tuple(path for path, _amount in base.decomposition)
    x0 = PathSystem(paths=paths)
    augment = solve_augmentation(inst, x0, node_budget)
    return ArcSet.of(inst, set(base.support.ids) | set(augment.ids))


# ---------------------------------------------------------------------------
# residual-graph feasibility certificate


def residual_feasibility_check(inst: Instance, x0: PathSystem, y) -> bool:
    """True iff x0 plus the arcs `y` survives every single fault.

    Builds the residual graph (path arcs reversed, `y` arcs forward) and
    checks that each vulnerable path arc has both endpoints in one
    strongly connected component. Equivalent to replaying every
    scenario, but a single SCC pass.
    """
    x0.validate(inst)
    y_ids = set(normalize_ids(y))
    path_arcs = x0.arc_ids
    if y_ids & path_arcs:
        raise ValidationError("augmentation arcs must avoid the path system")
    arcs = [(inst.arcs[j].head, inst.arcs[j].tail) for j in sorted(path_arcs)]
    arcs += [(inst.arcs[j].tail, inst.arcs[j].head) for j in sorted(y_ids)]
    comp = _scc_membership(inst.vertices, arcs)
    for j in sorted(path_arcs):
        a = inst.arcs[j]
        if a.vulnerable and comp[a.tail] != comp[a.head]:
            return False
    return True


def _scc_membership(vertices, arcs) -> dict[str, int]:
    """Tarjan's algorithm, iterative; vertex -> component id."""
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for u, v in arcs:
        adj[u].append(v)
    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    comp: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    comp_count = 0
    for root in vertices:
        if root in index_of:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index_of[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if w not in index_of:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index_of[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = comp_count
                    if w == v:
                        break
                comp_count += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp
