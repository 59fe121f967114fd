"""Shared builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest

from ftnet import Arc, Instance


def mk(arcs, k=None, ell=None, directed=True, source="s", sink="t", name="test"):
    """Compact instance builder.

    `arcs` is a list of (tail, head, weight, "v"|"s") tuples; vertices
    are collected in first-appearance order with source first and sink
    last.
    """
    seen = []
    for tail, head, _w, _f in arcs:
        for v in (tail, head):
            if v not in seen:
                seen.append(v)
    vertices = [source] + [v for v in seen if v not in (source, sink)] + [sink]
    mode = "ftp" if ell is None else "ftf"
    return Instance(
        vertices=tuple(vertices),
        arcs=tuple(Arc(t, h, Fraction(w), f == "v") for t, h, w, f in arcs),
        source=source,
        sink=sink,
        mode=mode,
        k=k if ell is None else None,
        ell=ell,
        directed=directed,
        name=name,
    )


@pytest.fixture
def diamond_vulnerable():
    """s->a->t and s->b->t, all arcs vulnerable, unit weight."""
    return mk(
        [("s", "a", 1, "v"), ("a", "t", 1, "v"), ("s", "b", 1, "v"), ("b", "t", 1, "v")],
        k=1,
    )
