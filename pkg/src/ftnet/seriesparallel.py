"""Series-parallel recognition and the per-parameter dynamic program.

A two-terminal series-parallel graph is built from single edges by
series composition (identify one graph's sink with the other's source)
and parallel composition (identify both terminal pairs). The solver
walks the decomposition tree once and returns optimal solutions for
every robustness parameter 0..k simultaneously:

* a vulnerable leaf solves parameter 0 only;
* a safe leaf solves every parameter;
* series composition unions the children's solutions index-wise;
* parallel composition with children feasible up to m1 and m2 is
  infeasible beyond m1+m2+1, and otherwise takes the cheapest split
  j + (i-j-1) of the fault budget across the two sides, where index -1
  stands for the empty set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotSeriesParallelError, ParseError, ValidationError
from .instance import Arc, ArcSet, Instance


@dataclass(frozen=True)
class SPLeaf:
    arc: int


@dataclass(frozen=True)
class SPSeries:
    left: "SPTree"
    right: "SPTree"


@dataclass(frozen=True)
class SPParallel:
    left: "SPTree"
    right: "SPTree"


SPTree = SPLeaf | SPSeries | SPParallel


def sp_leaves(tree: SPTree) -> list[int]:
    if isinstance(tree, SPLeaf):
        return [tree.arc]
    return sp_leaves(tree.left) + sp_leaves(tree.right)


def _flip(tree: SPTree) -> SPTree:
    """Reverse a subtree's terminals; series children swap and flip."""
    if isinstance(tree, SPLeaf):
        return tree
    if isinstance(tree, SPSeries):
        return SPSeries(_flip(tree.right), _flip(tree.left))
    return SPParallel(_flip(tree.left), _flip(tree.right))


# ---------------------------------------------------------------------------
# textual form: e<id>, S(x,y), P(x,y)


def parse_sp_tree(text: str) -> SPTree:
    tokens = re.findall(r"[SP]\(|e\d+|[(),]", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise ParseError(f"bad decomposition expression: {text!r}")
    pos = 0

    def expect(tok: str):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            raise ParseError(f"expected {tok!r} at token {pos} in {text!r}")
        pos += 1

    def parse_expr() -> SPTree:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of expression: {text!r}")
        tok = tokens[pos]
        if tok.startswith("e"):
            pos += 1
            return SPLeaf(int(tok[1:]))
        if tok in ("S(", "P("):
            pos += 1
            left = parse_expr()
            expect(",")
            right = parse_expr()
            expect(")")
            return SPSeries(left, right) if tok == "S(" else SPParallel(left, right)
        raise ParseError(f"unexpected token {tok!r} in {text!r}")

    tree = parse_expr()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in {text!r}")
    leaves = sp_leaves(tree)
    if len(leaves) != len(set(leaves)):
        raise ParseError("decomposition reuses a leaf arc")
    return tree


def format_sp_tree(tree: SPTree) -> str:
    if isinstance(tree, SPLeaf):
        return f"e{tree.arc}"
    tag = "S" if isinstance(tree, SPSeries) else "P"
    return f"{tag}({format_sp_tree(tree.left)},{format_sp_tree(tree.right)})"


# ---------------------------------------------------------------------------
# recognition by series/parallel reduction


def sp_recognize(inst: Instance) -> SPTree:
    """Decompose a two-terminal undirected instance, or reject it.

    Repeatedly merges parallel edges and contracts degree-2 inner
    vertices until a single source-sink edge remains; if neither
    reduction applies first, the graph is not series-parallel.
    """
    if inst.directed:
        raise ValidationError("sp_recognize expects an undirected instance")
    # live edge id -> (endpoint a, endpoint b, subtree oriented a->b)
    edges: dict[int, tuple[str, str, SPTree]] = {
        i: (a.tail, a.head, SPLeaf(i)) for i, a in enumerate(inst.arcs)
    }
    if not edges:
        raise NotSeriesParallelError("graph has no edges")
    next_id = len(inst.arcs)

    def oriented(eid: int, frm: str) -> SPTree:
        a, b, tree = edges[eid]
        return tree if a == frm else _flip(tree)

    while len(edges) > 1:
        # parallel: two live edges on the same endpoint pair
        by_pair: dict[frozenset, list[int]] = {}
        merged = False
        for eid in sorted(edges):
            a, b, _ = edges[eid]
            key = frozenset((a, b))
            if key in by_pair:
                other = by_pair[key][0]
                oa, ob, otree = edges[other]
                combined = SPParallel(otree, oriented(eid, oa))
                del edges[eid]
                edges[other] = (oa, ob, combined)
                merged = True
                break
            by_pair[key] = [eid]
        if merged:
            continue
        # series: an inner vertex of degree exactly 2
        degree: dict[str, list[int]] = {}
        for eid in sorted(edges):
            a, b, _ = edges[eid]
            degree.setdefault(a, []).append(eid)
            degree.setdefault(b, []).append(eid)
        contracted = False
        for x in inst.vertices:
            if x in (inst.source, inst.sink):
                continue
            incident = degree.get(x, [])
            if len(incident) != 2:
                continue
            e1, e2 = incident
            a1, b1, _ = edges[e1]
            a2, b2, _ = edges[e2]
            u = a1 if b1 == x else b1
            v = a2 if b2 == x else b2
            combined = SPSeries(oriented(e1, u), oriented(e2, x))
            del edges[e1]
            del edges[e2]
            edges[next_id] = (u, v, combined)
            next_id += 1
            contracted = True
            break
        if not contracted:
            raise NotSeriesParallelError("not series-parallel")

    (eid,) = edges
    a, b, tree = edges[eid]
    if {a, b} != {inst.source, inst.sink}:
        raise NotSeriesParallelError(
            f"reduction terminated on edge {a}-{b}, not on the terminals"
        )
    return tree if a == inst.source else _flip(tree)


# ---------------------------------------------------------------------------
# the per-parameter dynamic program


def solve_ftp_series_parallel(
    tree: SPTree,
    weights: dict[int, Fraction],
    vulnerable: set[int],
    k: int,
) -> list[ArcSet | None]:
    """Optimal solutions for parameters 0..k on a decomposition tree.

    Entry i of the result is an optimal solution tolerating any i
    vulnerable-edge failures, or None when that parameter is infeasible.
    """
    if k < 0:
        raise ValidationError("k must be >= 0")
    leaves = sp_leaves(tree)
    if len(leaves) != len(set(leaves)):
        raise ValidationError("decomposition reuses a leaf arc")
    for e in leaves:
        if e not in weights:
            raise ValidationError(f"missing weight for leaf arc {e}")

    def solve(node: SPTree) -> list[tuple[frozenset, Fraction] | None]:
        if isinstance(node, SPLeaf):
            entry = (frozenset((node.arc,)), weights[node.arc])
            if node.arc in vulnerable:
                return [entry] + [None] * k
            return [entry] * (k + 1)
        left = solve(node.left)
        right = solve(node.right)
        if isinstance(node, SPSeries):
            out: list[tuple[frozenset, Fraction] | None] = []
            for i in range(k + 1):
                if left[i] is None or right[i] is None:
                    out.append(None)
                else:
                    out.append((left[i][0] | right[i][0], left[i][1] + right[i][1]))
            return out
        m1 = max(i for i in range(k + 1) if left[i] is not None)
        m2 = max(i for i in range(k + 1) if right[i] is not None)
        empty = (frozenset(), Fraction(0))
        out = []
        for i in range(k + 1):
            if i > m1 + m2 + 1:
                out.append(None)
                continue
            best = None
            for j in range(-1, i + 1):
                part1 = empty if j == -1 else left[j] if j <= m1 else None
                part2 = empty if i - j - 1 == -1 else right[i - j - 1] if i - j - 1 <= m2 else None
                if part1 is None or part2 is None:
                    continue
                cost = part1[1] + part2[1]
                if best is None or cost < best[1]:
                    best = (part1[0] | part2[0], cost)
            assert best is not None
            out.append(best)
        return out

    result = solve(tree)
    return [
        None if entry is None else ArcSet(tuple(sorted(entry[0])), entry[1])
        for entry in result
    ]


def sp_tree_to_instance(
    tree: SPTree,
    weights: dict[int, Fraction],
    vulnerable: set[int],
    k: int,
    name: str = "sp",
) -> Instance:
    """Directed instance realizing the decomposition, leaf arcs source->sink.

    Leaf ids must be exactly 0..m-1; the resulting instance reuses them
    as its arc ids, so solutions transfer between the tree solver and
    the graph-level verifiers unchanged.
    """
    leaves = sorted(sp_leaves(tree))
    if leaves != list(range(len(leaves))):
        raise ValidationError("leaf ids must be exactly 0..m-1")

    vertices = ["s", "t"]
    arc_ends: dict[int, tuple[str, str]] = {}

    def fresh() -> str:
        v = f"m{len(vertices) - 2}"
        vertices.append(v)
        return v

    def assign(node: SPTree, a: str, b: str):
        if isinstance(node, SPLeaf):
            arc_ends[node.arc] = (a, b)
        elif isinstance(node, SPSeries):
            mid = fresh()
            assign(node.left, a, mid)
            assign(node.right, mid, b)
        else:
            assign(node.left, a, b)
            assign(node.right, a, b)

    assign(tree, "s", "t")
    arcs = tuple(
        Arc(arc_ends[e][0], arc_ends[e][1], weights[e], e in vulnerable)
        for e in range(len(leaves))
    )
    return Instance(
        vertices=tuple(vertices),
        arcs=arcs,
        source="s",
        sink="t",
        mode="ftp",
        k=k,
        directed=True,
        name=name,
    )
