"""Instance data model, file I/O, and pre-solve graph transformations.

An instance is a directed (or undirected) arc-weighted graph with two
terminals, a set of vulnerable arcs, and a robustness parameter: `k` for
fault-tolerant path problems (any `k` vulnerable arcs may fail) or `ell`
for fault-tolerant flow problems (`ell` disjoint paths must survive any
single vulnerable-arc failure).

Weights are exact rationals throughout; solvers compare sums of weights
and ties must be reproducible, so floats are never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import heapq

from .errors import CyclicGraphError, ParseError, ValidationError

MODE_FTP = "ftp"
MODE_FTF = "ftf"


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    weight: Fraction
    vulnerable: bool


@dataclass(frozen=True)
class Instance:
    """A validated problem instance. Immutable after construction.

    Arc ids are the 0-based positions in `arcs`; parallel and antiparallel
    arcs are allowed and keep distinct identities, self-loops are rejected.
    """

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    source: str
    sink: str
    mode: str
    k: int | None = None
    ell: int | None = None
    directed: bool = True
    name: str = "instance"

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise ValidationError(f"duplicate vertex id {v!r}")
            seen.add(v)
        if self.source == self.sink:
            raise ValidationError("source and sink must differ")
        for which, v in (("source", self.source), ("sink", self.sink)):
            if v not in seen:
                raise ValidationError(f"{which} {v!r} is not a declared vertex")
        for i, a in enumerate(self.arcs):
            if a.tail not in seen:
                raise ValidationError(f"arc {i}: unknown vertex {a.tail!r}")
            if a.head not in seen:
                raise ValidationError(f"arc {i}: unknown vertex {a.head!r}")
            if a.tail == a.head:
                raise ValidationError(f"arc {i}: self-loop on {a.tail!r}")
            if a.weight < 0:
                raise ValidationError(f"arc {i}: negative weight {a.weight}")
        if self.mode == MODE_FTP:
            if self.k is None or self.k < 0:
                raise ValidationError("ftp mode requires k >= 0")
            if self.ell is not None:
                raise ValidationError("ftp mode must not set ell")
        elif self.mode == MODE_FTF:
            if self.ell is None or self.ell < 1:
                raise ValidationError("ftf mode requires ell >= 1")
            if self.k is not None:
                raise ValidationError("ftf mode must not set k")
        else:
            raise ValidationError(f"unknown mode {self.mode!r}")

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def out_arcs(self) -> dict[str, tuple[int, ...]]:
        """Arc ids leaving each vertex, in increasing arc-id order."""
        out: dict[str, list[int]] = {v: [] for v in self.vertices}
        for i, a in enumerate(self.arcs):
            out[a.tail].append(i)
        return {v: tuple(ids) for v, ids in out.items()}

    @cached_property
    def vulnerable_ids(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.arcs) if a.vulnerable)

    def weight_of(self, ids) -> Fraction:
        return sum((self.arcs[i].weight for i in ids), Fraction(0))


@dataclass(frozen=True)
class ArcSet:
    """A set of arc ids with its exact total weight."""

    ids: tuple[int, ...]
    cost: Fraction

    @classmethod
    def of(cls, inst: Instance, ids) -> "ArcSet":
        uniq = sorted(set(ids))
        for i in uniq:
            if not 0 <= i < len(inst.arcs):
                raise ValidationError(f"arc id {i} out of range")
        return cls(tuple(uniq), inst.weight_of(uniq))

    def __contains__(self, arc_id: int) -> bool:
        return arc_id in set(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __len__(self):
        return len(self.ids)


def normalize_ids(s) -> tuple[int, ...]:
    """Accept an ArcSet or any iterable of arc ids; return sorted unique ids."""
    if isinstance(s, ArcSet):
        return s.ids
    return tuple(sorted(set(s)))


# ---------------------------------------------------------------------------
# file format


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format.

    Format (order of header lines is free, `#` starts a comment)::

        name parallel5
        directed true
        mode ftp
        k 1
        source s
        sink t
        vertex s
        vertex t
        arc s t 1 vulnerable

    Arc ids are the 0-based order of `arc` lines. Weights are integers,
    fractions (`7/2`), or decimals (`0.5`), all read exactly.
    """
    header: dict[str, str] = {}
    vertices: list[str] = []
    arcs: list[Arc] = []
    vertex_set: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key = tokens[0]
        if key == "vertex":
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: expected 'vertex <id>'")
            if tokens[1] in vertex_set:
                raise ParseError(f"line {lineno}: duplicate vertex {tokens[1]!r}")
            vertices.append(tokens[1])
            vertex_set.add(tokens[1])
        elif key == "arc":
            if len(tokens) != 5:
                raise ParseError(
                    f"line {lineno}: expected 'arc <tail> <head> <weight> <vulnerable|safe>'"
                )
            tail, head, weight_text, flag = tokens[1:]
            if tail not in vertex_set:
                raise ParseError(f"line {lineno}: unknown vertex {tail!r}")
            if head not in vertex_set:
                raise ParseError(f"line {lineno}: unknown vertex {head!r}")
            if tail == head:
                raise ParseError(f"line {lineno}: self-loop on {tail!r}")
            try:
                weight = Fraction(weight_text)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"line {lineno}: bad weight {weight_text!r}") from None
            if weight < 0:
                raise ParseError(f"line {lineno}: negative weight {weight_text}")
            if flag not in ("vulnerable", "safe"):
                raise ParseError(
                    f"line {lineno}: arc flag must be 'vulnerable' or 'safe', got {flag!r}"
                )
            arcs.append(Arc(tail, head, weight, flag == "vulnerable"))
        elif key in ("name", "directed", "mode", "k", "ell", "source", "sink"):
            if len(tokens) != 2:
                raise ParseError(f"line {lineno}: expected '{key} <value>'")
            if key in header:
                raise ParseError(f"line {lineno}: duplicate {key!r}")
            header[key] = tokens[1]
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")

    for required in ("mode", "source", "sink"):
        if required not in header:
            raise ParseError(f"missing header field {required!r}")
    mode = header["mode"]
    if mode not in (MODE_FTP, MODE_FTF):
        raise ParseError(f"mode must be 'ftp' or 'ftf', got {mode!r}")
    k = ell = None
    if mode == MODE_FTP:
        if "k" not in header:
            raise ParseError("missing mode parameter 'k' for ftp instance")
        k = _parse_int(header["k"], "k")
    else:
        if "ell" not in header:
            raise ParseError("missing mode parameter 'ell' for ftf instance")
        ell = _parse_int(header["ell"], "ell")
    directed = True
    if "directed" in header:
        if header["directed"] not in ("true", "false"):
            raise ParseError("directed must be 'true' or 'false'")
        directed = header["directed"] == "true"

    try:
        return Instance(
            vertices=tuple(vertices),
            arcs=tuple(arcs),
            source=header["source"],
            sink=header["sink"],
            mode=mode,
            k=k,
            ell=ell,
            directed=directed,
            name=header.get("name", "instance"),
        )
    except ValidationError as exc:
        raise ParseError(str(exc)) from None


def _parse_int(text: str, field: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"bad integer for {field!r}: {text!r}") from None


def serialize_instance(inst: Instance) -> str:
    """Canonical text form; `parse_instance(serialize_instance(i))` equals `i`."""
    lines = [
        f"name {inst.name}",
        f"directed {'true' if inst.directed else 'false'}",
        f"mode {inst.mode}",
    ]
    if inst.mode == MODE_FTP:
        lines.append(f"k {inst.k}")
    else:
        lines.append(f"ell {inst.ell}")
    lines.append(f"source {inst.source}")
    lines.append(f"sink {inst.sink}")
    lines.extend(f"vertex {v}" for v in inst.vertices)
    for a in inst.arcs:
        flag = "vulnerable" if a.vulnerable else "safe"
        lines.append(f"arc {a.tail} {a.head} {a.weight} {flag}")
    return "\n".join(lines) + "\n"


def with_mode(inst: Instance, mode: str, k: int | None = None, ell: int | None = None) -> Instance:
    """Same graph under a different robustness mode/parameter."""
    return Instance(
        vertices=inst.vertices,
        arcs=inst.arcs,
        source=inst.source,
        sink=inst.sink,
        mode=mode,
        k=k,
        ell=ell,
        directed=inst.directed,
        name=inst.name,
    )


# ---------------------------------------------------------------------------
# undirected -> directed reduction


def to_directed(inst: Instance) -> tuple[Instance, tuple[tuple[int, int], ...]]:
    """Replace each undirected edge by two antiparallel arcs.

    Both arcs inherit the edge's weight and vulnerability. No feasible
    solution ever needs an edge in both directions, so the directed
    instance has the same optimal value; the returned pair map gives the
    two directed arc ids created from each edge, in edge order.
    """
    if inst.directed:
        raise ValidationError("to_directed called on an already-directed instance")
    arcs: list[Arc] = []
    pair_map: list[tuple[int, int]] = []
    for a in inst.arcs:
        pair_map.append((len(arcs), len(arcs) + 1))
        arcs.append(Arc(a.tail, a.head, a.weight, a.vulnerable))
        arcs.append(Arc(a.head, a.tail, a.weight, a.vulnerable))
    directed = Instance(
        vertices=inst.vertices,
        arcs=tuple(arcs),
        source=inst.source,
        sink=inst.sink,
        mode=inst.mode,
        k=inst.k,
        ell=inst.ell,
        directed=True,
        name=inst.name,
    )
    return directed, tuple(pair_map)


# ---------------------------------------------------------------------------
# DAG -> layered transformation


@dataclass(frozen=True)
class LayeredInstance:
    """A layered equivalent of an acyclic instance.

    Layers are numbered 1..layer_count with layer 1 = {source} and the
    last layer = {sink}; every arc goes from one layer to the next.
    `origin_of[j]` is the original arc id that layered arc j was created
    from: a subdivided arc keeps its full weight on the first sub-arc
    (the rest get weight 0) and every sub-arc inherits its vulnerability.
    """

    instance: Instance
    layer_of: dict[str, int]
    origin_of: tuple[int, ...]
    layer_count: int

    def layers(self) -> list[list[str]]:
        by_layer: list[list[str]] = [[] for _ in range(self.layer_count)]
        for v in self.instance.vertices:
            by_layer[self.layer_of[v] - 1].append(v)
        return by_layer

    def original_ids(self, layered_ids) -> tuple[int, ...]:
        """Original arcs touched by a set of layered arcs (dedup, sorted)."""
        return tuple(sorted({self.origin_of[j] for j in layered_ids}))


def topological_order(inst: Instance) -> list[str]:
    """Kahn's algorithm with lowest-declaration-index tie-break."""
    index = inst.vertex_index
    indeg = {v: 0 for v in inst.vertices}
    for a in inst.arcs:
        indeg[a.head] += 1
    heap = [index[v] for v in inst.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        v = inst.vertices[heapq.heappop(heap)]
        order.append(v)
        for j in inst.out_arcs[v]:
            h = inst.arcs[j].head
            indeg[h] -= 1
            if indeg[h] == 0:
                heapq.heappush(heap, index[h])
    if len(order) != len(inst.vertices):
        raise CyclicGraphError("graph contains a directed cycle")
    return order


def dag_to_layered(inst: Instance) -> LayeredInstance:
    """Layer an acyclic instance, subdividing layer-skipping arcs.

    Vertices not on any source-sink path are dropped first (no minimal
    solution uses them), then each vertex gets the layer equal to its
    longest-path distance from the source plus one. The result has the
    same optimal value as the input.
    """
    if inst.mode != MODE_FTP:
        raise ValidationError("dag_to_layered requires an ftp instance")
    order = topological_order(inst)  # raises on cycles

    reach_s = _reachable(inst, inst.source, forward=True)
    reach_t = _reachable(inst, inst.sink, forward=False)
    keep = (reach_s & reach_t) | {inst.source, inst.sink}
    kept_arcs = [
        (i, a) for i, a in enumerate(inst.arcs) if a.tail in keep and a.head in keep
    ]

    depth = {v: 1 for v in keep}
    for v in order:
        if v not in keep:
            continue
        for j in inst.out_arcs[v]:
            h = inst.arcs[j].head
            if h in keep and inst.arcs[j].tail in keep:
                depth[h] = max(depth[h], depth[v] + 1)
    # With unreachable vertices dropped, only the source sits at layer 1 and
    # only the sink at the maximum layer.
    if depth[inst.sink] < 2:
        depth[inst.sink] = 2

    vertices = [v for v in inst.vertices if v in keep]
    vertex_set = set(vertices)
    layer_of = {v: depth[v] for v in vertices}
    new_arcs: list[Arc] = []
    origin: list[int] = []

    def fresh_vertex(arc_id: int, layer: int) -> str:
        cand = f"~{arc_id}~{layer}"
        while cand in vertex_set:
            cand += "~"
        vertices.append(cand)
        vertex_set.add(cand)
        layer_of[cand] = layer
        return cand

    for i, a in kept_arcs:
        span = depth[a.head] - depth[a.tail]
        if span == 1:
            new_arcs.append(a)
            origin.append(i)
            continue
        prev = a.tail
        for step in range(1, span):
            mid = fresh_vertex(i, depth[a.tail] + step)
            w = a.weight if step == 1 else Fraction(0)
            new_arcs.append(Arc(prev, mid, w, a.vulnerable))
            origin.append(i)
            prev = mid
        new_arcs.append(Arc(prev, a.head, Fraction(0), a.vulnerable))
        origin.append(i)

    layered = Instance(
        vertices=tuple(vertices),
        arcs=tuple(new_arcs),
        source=inst.source,
        sink=inst.sink,
        mode=MODE_FTP,
        k=inst.k,
        directed=True,
        name=inst.name,
    )
    return LayeredInstance(
        instance=layered,
        layer_of=layer_of,
        origin_of=tuple(origin),
        layer_count=max(layer_of.values()),
    )


def _reachable(inst: Instance, start: str, forward: bool) -> set[str]:
    adj: dict[str, list[str]] = {v: [] for v in inst.vertices}
    for a in inst.arcs:
        if forward:
            adj[a.tail].append(a.head)
        else:
            adj[a.head].append(a.tail)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen
