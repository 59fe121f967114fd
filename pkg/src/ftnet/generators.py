"""Deterministic instance generators for tests, demos, and the CLI.

Families:

* `parallel(p, k)`: p parallel vulnerable unit-cost arcs between the
  terminals. Integral optimum k+1; the fractional relaxation puts
  capacity 1/(p-k) on every arc at cost p/(p-k), so the family's
  integrality ratio approaches k+1 as p grows.
* `random(n, arc_count, ...)`: random digraph, repaired until feasible
  for its mode (or deliberately broken when `infeasible` is set).
* `random_dag(n, layers, ...)`: forward arcs over a random layering,
  layer skips included so subdivision gets exercised.
* `random_sp(depth, ...)`: random series-parallel decomposition tree,
  materialized as a directed two-terminal instance.
* `dst_reduction(...)`: a rooted Steiner instance embedded as a path
  instance: every terminal gains a zero-cost vulnerable arc into a new
  sink and the fault budget is one less than the coverage requirement,
  so the optima coincide.

Identical specs generate byte-identical instance files.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ValidationError
from .feasibility import ftf_feasible_cut, ftp_feasible_cut
from .instance import Arc, Instance
from .seriesparallel import SPLeaf, SPParallel, SPSeries, SPTree, sp_tree_to_instance


@dataclass(frozen=True)
class GenSpec:
    family: str
    p: int | None = None
    k: int | None = None
    ell: int | None = None
    n: int | None = None
    arc_count: int | None = None
    vulnerable_fraction: float = 0.5
    weight_lo: int = 1
    weight_hi: int = 10
    layers: int | None = None
    depth: int | None = None
    terminals: int | None = None
    m: int | None = None
    seed: int = 0
    mode: str = "ftp"
    infeasible: bool = False


def generate(spec: GenSpec) -> Instance:
    if spec.family != "parallel":
        if spec.mode == "ftp" and spec.k is None:
            spec = replace(spec, k=1)
        if spec.mode == "ftf" and spec.ell is None:
            spec = replace(spec, ell=1)
    if spec.family == "parallel":
        return _parallel(spec)
    if spec.family == "random":
        return _random_graph(spec)
    if spec.family == "random_dag":
        return _random_dag(spec)
    if spec.family == "random_sp":
        tree, weights, vulnerable = random_sp_tree(spec)
        k = spec.k if spec.k is not None else 1
        return sp_tree_to_instance(tree, weights, vulnerable, k, name=f"sp{spec.seed}")
    if spec.family == "dst_reduction":
        return _dst_reduction(spec)
    raise ValidationError(f"unknown family {spec.family!r}")


def gen_annotations(spec: GenSpec) -> dict[str, str]:
    """Closed-form facts about a generated instance, for reports."""
    if spec.family == "parallel":
        p, k = spec.p, spec.k
        return {
            "integral_opt": str(k + 1),
            "fractional_opt": str(Fraction(p, p - k)),
        }
    return {}


def _parallel(spec: GenSpec) -> Instance:
    p, k = spec.p, spec.k
    if p is None or k is None or k < 0:
        raise ValidationError("parallel family needs p and k >= 0")
    if p <= k:
        raise ValidationError("p must exceed k")
    arcs = tuple(Arc("s", "t", Fraction(1), True) for _ in range(p))
    return Instance(
        vertices=("s", "t"),
        arcs=arcs,
        source="s",
        sink="t",
        mode="ftp",
        k=k,
        name=f"parallel{p}k{k}",
    )


def _feasible_full(inst: Instance) -> bool:
    if inst.mode == "ftp":
        return ftp_feasible_cut(inst, range(len(inst.arcs))).feasible
    return ftf_feasible_cut(inst, range(len(inst.arcs))).feasible


def _rand_weight(rng: random.Random, spec: GenSpec) -> Fraction:
    return Fraction(rng.randint(spec.weight_lo, spec.weight_hi))


def _finish(spec: GenSpec, name: str, vertices, arcs, rng: random.Random) -> Instance:
    def build(arc_list):
        return Instance(
            vertices=tuple(vertices),
            arcs=tuple(arc_list),
            source="s",
            sink="t",
            mode=spec.mode,
            k=spec.k if spec.mode == "ftp" else None,
            ell=spec.ell if spec.mode == "ftf" else None,
            name=name,
        )

    if spec.infeasible:
        return build(_break_instance(spec, arcs, rng))
    return _repair(spec, arcs, rng, build)


def _repair(spec: GenSpec, arcs, rng, build):
    """Flip vulnerable arcs to safe until the full arc set is feasible.

    Flipping keeps the arc count at the requested size; only when no
    flip can help (flow mode short on disjoint paths) are safe
    source-sink arcs appended.
    """
    inst = build(arcs)
    while not _feasible_full(inst):
        vulnerable = [i for i, a in enumerate(arcs) if a.vulnerable]
        if vulnerable:
            i = rng.choice(vulnerable)
            a = arcs[i]
            arcs[i] = Arc(a.tail, a.head, a.weight, False)
        elif spec.mode == "ftf":
            for _ in range(spec.ell):
                arcs.append(Arc("s", "t", _rand_weight(rng, spec), False))
        else:
            arcs.append(Arc("s", "t", _rand_weight(rng, spec), False))
        inst = build(arcs)
    return inst


def _break_instance(spec: GenSpec, arcs, rng: random.Random):
    """Force infeasibility through the arcs entering the sink."""
    into_t = [i for i, a in enumerate(arcs) if a.head == "t"]
    if spec.mode == "ftp":
        keep = spec.k if spec.k and spec.k > 0 else 0
    else:
        keep = spec.ell - 1
    drop = set(into_t[keep:])
    out = []
    for i, a in enumerate(arcs):
        if i in drop:
            continue
        if a.head == "t":
            a = Arc(a.tail, a.head, a.weight, True)
        out.append(a)
    return out


def _random_graph(spec: GenSpec) -> Instance:
    if spec.n is None or spec.n < 2:
        raise ValidationError("random family needs n >= 2")
    rng = random.Random(spec.seed)
    inner = [f"v{i}" for i in range(1, spec.n - 1)]
    vertices = ["s"] + inner + ["t"]
    arcs: list[Arc] = []
    # backbone keeps the terminals connected before any repair
    backbone = ["s"] + rng.sample(inner, min(len(inner), rng.randint(0, 2))) + ["t"]
    for u, v in zip(backbone, backbone[1:]):
        arcs.append(Arc(u, v, _rand_weight(rng, spec), rng.random() < spec.vulnerable_fraction))
    want = spec.arc_count if spec.arc_count is not None else 2 * spec.n
    guard = 0
    while len(arcs) < want and guard < 20 * want:
        guard += 1
        u, v = rng.sample(vertices, 2)
        if v == "s" or u == "t":
            continue
        arcs.append(Arc(u, v, _rand_weight(rng, spec), rng.random() < spec.vulnerable_fraction))
    return _finish(spec, f"random{spec.seed}", vertices, arcs, rng)


def _random_dag(spec: GenSpec) -> Instance:
    if spec.n is None or spec.n < 2:
        raise ValidationError("random_dag family needs n >= 2")
    layer_count = spec.layers if spec.layers is not None else max(2, spec.n // 2)
    rng = random.Random(spec.seed)
    inner = [f"v{i}" for i in range(1, spec.n - 1)]
    vertices = ["s"] + inner + ["t"]
    rank = {"s": 0, "t": layer_count - 1}
    for v in inner:
        rank[v] = rng.randint(1, max(1, layer_count - 2))

    def forward_pair():
        for _ in range(50):
            u, v = rng.sample(vertices, 2)
            if rank[u] < rank[v]:
                return u, v
        return "s", "t"

    arcs: list[Arc] = []
    by_rank = sorted(inner, key=lambda v: (rank[v], v))
    chain = ["s"] + [v for v in by_rank if rng.random() < 0.7] + ["t"]
    chain = [v for i, v in enumerate(chain) if i == 0 or rank[v] > rank[chain[i - 1]] or v == "t"]
    prev = "s"
    for v in chain[1:]:
        if rank[v] > rank[prev]:
            arcs.append(Arc(prev, v, _rand_weight(rng, spec), rng.random() < spec.vulnerable_fraction))
            prev = v
    if prev != "t":
        arcs.append(Arc(prev, "t", _rand_weight(rng, spec), rng.random() < spec.vulnerable_fraction))
    want = spec.arc_count if spec.arc_count is not None else 2 * spec.n
    guard = 0
    while len(arcs) < want and guard < 20 * want:
        guard += 1
        u, v = forward_pair()
        arcs.append(Arc(u, v, _rand_weight(rng, spec), rng.random() < spec.vulnerable_fraction))

    # repair inside the ranking so the graph stays acyclic
    def build(arc_list):
        return Instance(
            vertices=tuple(vertices),
            arcs=tuple(arc_list),
            source="s",
            sink="t",
            mode="ftp",
            k=spec.k if spec.k is not None else 1,
            name=f"dag{spec.seed}",
        )

    if spec.infeasible:
        return build(_break_instance(spec, arcs, rng))
    return _repair(spec, arcs, rng, build)


def random_sp_tree(spec: GenSpec):
    """Random decomposition tree with bounded leaf count.

    Returns (tree, weights, vulnerable) with leaf ids 0..m-1 assigned
    left to right.
    """
    depth = spec.depth if spec.depth is not None else 4
    rng = random.Random(spec.seed)
    max_leaves = min(2**depth, 12)
    leaves = rng.randint(2, max(2, max_leaves))
    counter = [0]

    def build(budget: int, d: int) -> SPTree:
        if budget == 1 or d >= depth:
            leaf = SPLeaf(counter[0])
            counter[0] += 1
            return leaf
        split = rng.randint(1, budget - 1)
        left = build(split, d + 1)
        right = build(budget - split, d + 1)
        return SPSeries(left, right) if rng.random() < 0.5 else SPParallel(left, right)

    tree = build(leaves, 0)
    m = counter[0]
    weights = {e: _rand_weight(rng, spec) for e in range(m)}
    vulnerable = {e for e in range(m) if rng.random() < spec.vulnerable_fraction}
    return tree, weights, vulnerable


def _dst_reduction(spec: GenSpec) -> Instance:
    """Rooted Steiner instance wrapped as a fault-tolerant path instance.

    All original arcs are safe; each terminal u gains a zero-cost
    vulnerable arc u -> t and the fault budget is m-1, so a solution
    must keep some covered terminal alive under every scenario.
    """
    n = spec.n if spec.n is not None else 6
    t_count = spec.terminals if spec.terminals is not None else 3
    m = spec.m if spec.m is not None else 2
    if not 1 <= m <= t_count or t_count > n - 1:
        raise ValidationError("dst_reduction needs 1 <= m <= terminals <= n-1")
    rng = random.Random(spec.seed)
    others = [f"v{i}" for i in range(1, n)]
    vertices = ["s"] + others + ["t"]
    terminals = rng.sample(others, t_count)
    arcs: list[Arc] = []
    # a random arborescence keeps every vertex reachable from the root
    grown = ["s"]
    for v in others:
        parent = rng.choice(grown)
        arcs.append(Arc(parent, v, _rand_weight(rng, spec), False))
        grown.append(v)
    extra = spec.arc_count if spec.arc_count is not None else n
    for _ in range(max(0, extra - len(arcs))):
        u, v = rng.sample(["s"] + others, 2)
        arcs.append(Arc(u, v, _rand_weight(rng, spec), False))
    for u in sorted(terminals):
        arcs.append(Arc(u, "t", Fraction(0), True))
    return Instance(
        vertices=tuple(vertices),
        arcs=tuple(arcs),
        source="s",
        sink="t",
        mode="ftp",
        k=m - 1,
        name=f"dst{spec.seed}",
    )
