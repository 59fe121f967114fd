"""Instance model, file format, and graph transformations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftnet import (
    Arc,
    CyclicGraphError,
    Instance,
    ParseError,
    ValidationError,
    brute_force_ftp,
    brute_force_ftp_undirected,
    dag_to_layered,
    generate,
    GenSpec,
    parse_instance,
    serialize_instance,
    to_directed,
)
from conftest import mk

MINIMAL = """\
name tiny
directed true
mode ftp
k 0
source s
sink t
vertex s
vertex t
arc s t 1 safe
"""


def test_minimal_round_trip():
    inst = parse_instance(MINIMAL)
    assert len(inst.arcs) == 1
    assert inst.k == 0
    assert serialize_instance(inst) == MINIMAL
    assert parse_instance(serialize_instance(inst)) == inst


def test_negative_weight_rejected():
    bad = MINIMAL.replace("arc s t 1 safe", "arc s t -1 safe")
    with pytest.raises(ParseError, match="negative weight"):
        parse_instance(bad)


def test_unknown_vertex_rejected():
    bad = MINIMAL.replace("arc s t 1 safe", "arc s x 1 safe")
    with pytest.raises(ParseError, match="unknown vertex"):
        parse_instance(bad)


def test_missing_mode_parameter():
    bad = MINIMAL.replace("k 0\n", "")
    with pytest.raises(ParseError, match="missing mode parameter"):
        parse_instance(bad)


def test_self_loop_rejected():
    bad = MINIMAL.replace("arc s t 1 safe", "arc s s 1 safe")
    with pytest.raises(ParseError, match="self-loop"):
        parse_instance(bad)


def test_error_messages_carry_line_numbers():
    bad = MINIMAL.replace("arc s t 1 safe", "arc s t nope safe")
    with pytest.raises(ParseError, match=r"line 9"):
        parse_instance(bad)


def test_structurally_equal_instances_serialize_identically():
    a = parse_instance(MINIMAL)
    b = Instance(
        vertices=("s", "t"),
        arcs=(Arc("s", "t", Fraction(1), False),),
        source="s",
        sink="t",
        mode="ftp",
        k=0,
        name="tiny",
    )
    assert a == b
    assert serialize_instance(a) == serialize_instance(b)


def test_parallel_family_round_trips():
    inst = generate(GenSpec(family="parallel", p=5, k=1))
    assert parse_instance(serialize_instance(inst)) == inst


def test_fraction_weights_round_trip():
    inst = mk([("s", "t", Fraction(7, 2), "s")], k=0)
    again = parse_instance(serialize_instance(inst))
    assert again.arcs[0].weight == Fraction(7, 2)


def test_comments_ignored():
    assert parse_instance("# hi\n" + MINIMAL) == parse_instance(MINIMAL)


names = st.sampled_from(["s", "t", "a", "b", "c", "d"])


@st.composite
def instances(draw):
    verts = ["s", "t"] + draw(st.lists(st.sampled_from(["a", "b", "c"]), unique=True))
    n_arcs = draw(st.integers(0, 6))
    arcs = []
    for _ in range(n_arcs):
        tail = draw(st.sampled_from(verts))
        head = draw(st.sampled_from([v for v in verts if v != tail]))
        weight = Fraction(draw(st.integers(0, 20)), draw(st.integers(1, 4)))
        arcs.append(Arc(tail, head, weight, draw(st.booleans())))
    return Instance(
        vertices=tuple(verts),
        arcs=tuple(arcs),
        source="s",
        sink="t",
        mode="ftp",
        k=draw(st.integers(0, 3)),
        name=draw(st.sampled_from(["x", "inst_1"])),
    )


@settings(max_examples=150, deadline=None)
@given(instances())
def test_parse_serialize_identity(inst):
    assert parse_instance(serialize_instance(inst)) == inst


# -- validation


def test_source_equals_sink_rejected():
    with pytest.raises(ValidationError):
        Instance(("s",), (), "s", "s", "ftp", k=0)


def test_ftp_requires_k():
    with pytest.raises(ValidationError):
        Instance(("s", "t"), (), "s", "t", "ftp")


def test_ftf_requires_positive_ell():
    with pytest.raises(ValidationError):
        Instance(("s", "t"), (), "s", "t", "ftf", ell=0)


# -- undirected -> directed


def test_single_safe_edge_reduction():
    und = mk([("s", "t", 3, "s")], k=0, directed=False)
    directed, pair_map = to_directed(und)
    assert len(directed.arcs) == 2
    assert pair_map == ((0, 1),)
    assert {(a.tail, a.head) for a in directed.arcs} == {("s", "t"), ("t", "s")}
    assert all(a.weight == 3 for a in directed.arcs)
    cost, _ = brute_force_ftp(directed)
    assert cost == 3 == brute_force_ftp_undirected(und)[0]


def test_triangle_reduction_matches_undirected_oracle():
    # s-a, a-t, s-t all vulnerable unit edges, one fault allowed: both
    # routes are needed, undirected optimum 3
    und = mk(
        [("s", "a", 1, "v"), ("a", "t", 1, "v"), ("s", "t", 1, "v")],
        k=1,
        directed=False,
    )
    u_opt = brute_force_ftp_undirected(und)
    directed, _ = to_directed(und)
    d_opt = brute_force_ftp(directed)
    assert u_opt[0] == 3
    assert d_opt[0] == u_opt[0]


def test_four_cycle_with_safe_chord_matches_oracle():
    und = mk(
        [
            ("s", "a", 1, "v"),
            ("a", "t", 1, "v"),
            ("t", "b", 1, "v"),
            ("b", "s", 1, "v"),
            ("s", "t", 2, "s"),
        ],
        k=1,
        directed=False,
    )
    u_opt = brute_force_ftp_undirected(und)
    directed, _ = to_directed(und)
    d_opt = brute_force_ftp(directed)
    assert u_opt[0] == d_opt[0] == 2
    assert u_opt is not None


def test_to_directed_rejects_directed_input():
    with pytest.raises(ValidationError):
        to_directed(mk([("s", "t", 1, "s")], k=0))


# -- DAG layering


def test_layered_diamond_unchanged():
    inst = mk(
        [("s", "a", 1, "s"), ("s", "b", 1, "s"), ("a", "t", 1, "s"), ("b", "t", 1, "s")],
        k=1,
    )
    lay = dag_to_layered(inst)
    assert lay.layer_count == 3
    assert lay.layers() == [["s"], ["a", "b"], ["t"]]
    assert len(lay.instance.arcs) == 4
    assert lay.origin_of == (0, 1, 2, 3)


def test_shortcut_subdivided_first_subarc_carries_weight():
    inst = mk([("s", "a", 1, "s"), ("a", "t", 1, "s"), ("s", "t", 5, "v")], k=1)
    lay = dag_to_layered(inst)
    subarcs = [j for j, o in enumerate(lay.origin_of) if o == 2]
    assert len(subarcs) == 2
    weights = [lay.instance.arcs[j].weight for j in subarcs]
    assert sorted(weights) == [0, 5]
    first = min(subarcs, key=lambda j: lay.layer_of[lay.instance.arcs[j].tail])
    assert lay.instance.arcs[first].weight == 5
    assert all(lay.instance.arcs[j].vulnerable for j in subarcs)


def test_layering_preserves_optimum_on_random_dags():
    for seed in range(8):
        inst = generate(GenSpec(family="random_dag", n=8, arc_count=12, k=1, seed=seed))
        lay = dag_to_layered(inst)
        for v, layer in lay.layer_of.items():
            for j in lay.instance.out_arcs[v]:
                assert lay.layer_of[lay.instance.arcs[j].head] == layer + 1
        original = brute_force_ftp(inst)
        layered = brute_force_ftp(lay.instance, max_arcs=24)
        assert original[0] == layered[0]


def test_cycle_rejected():
    inst = mk([("s", "a", 1, "s"), ("a", "b", 1, "s"), ("b", "a", 1, "s"), ("b", "t", 1, "s")], k=0)
    with pytest.raises(CyclicGraphError, match="directed cycle"):
        dag_to_layered(inst)
