"""Worked example decompositions used throughout the tests and the CLI."""

from __future__ import annotations

from .gog import (
    ANNULUS,
    ISOLATED_V1,
    ORDINARY_V1,
    PERIPHERAL_SEIFERT,
    SPECIAL_SEIFERT,
    TORUS,
    TORUS_TYPE_2,
    V0,
    V1,
    Edge,
    GraphOfGroups,
    GroupMark,
    Vertex,
)
from .orbifold import D0, D1, MIRROR, Orbifold2, annulus, circle, disk

FIXTURE_IDS = ("scott", "torus-type-2", "klein-glue")


def pants_base(n_d1: int = 1) -> Orbifold2:
    kinds = [D0] * (3 - n_d1) + [D1] * n_d1
    return Orbifold2(True, 0, (), tuple(circle(k) for k in kinds))


def f1a_base() -> Orbifold2:
    return annulus(outer=circle(D0), inner=circle(D0, D1))


def build_scott(n: int = 1) -> GraphOfGroups:
    """Two fibred pieces glued along a torus so the fibrations disagree."""
    if n < 1:
        raise ValueError("ambient dimension must be at least 1")
    h = GroupMark("H", "n+1")
    fu = GroupMark("fibre-left", "n")
    fv = GroupMark("fibre-right", "n")
    base = pants_base()
    vertices = (
        Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=fu, base_orbifold=base),
        Vertex(2, V0, PERIPHERAL_SEIFERT, fibre=fv, base_orbifold=base),
        Vertex(3, V1, ISOLATED_V1, group=h),
        Vertex(4, V1, ORDINARY_V1, group=fu),
        Vertex(5, V1, ORDINARY_V1, group=fv),
    )
    edges = (
        Edge(1, (1, 3), TORUS, h),
        Edge(2, (3, 2), TORUS, h),
        Edge(3, (1, 4), ANNULUS, fu),
        Edge(4, (2, 5), ANNULUS, fv),
    )
    return GraphOfGroups(n, vertices, edges)


def build_torus_type2(n: int = 1) -> GraphOfGroups:
    """Two torus-type pieces with annulus bases glued along a torus."""
    h = GroupMark("H", "n+1")
    f1 = GroupMark("fibre-left", "n")
    f2 = GroupMark("fibre-right", "n")
    base = f1a_base()
    vertices = (
        Vertex(1, V0, TORUS_TYPE_2, fibre=f1, base_orbifold=base),
        Vertex(2, V0, TORUS_TYPE_2, fibre=f2, base_orbifold=base),
        Vertex(3, V1, ISOLATED_V1, group=h),
    )
    edges = (
        Edge(1, (1, 3), TORUS, h),
        Edge(2, (3, 2), TORUS, h),
    )
    return GraphOfGroups(n, vertices, edges)


def build_klein_glue(n: int = 1) -> GraphOfGroups:
    """A fibred piece glued to an index-two special piece along a torus."""
    hbar = GroupMark("Hbar", "n+1")
    h = GroupMark("H", "n+1", index2_over="Hbar")
    fu = GroupMark("fibre-left", "n")
    base = pants_base()
    vertices = (
        Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=fu, base_orbifold=base),
        Vertex(2, V1, SPECIAL_SEIFERT, group=hbar),
    )
    edges = (Edge(1, (1, 2), TORUS, h),)
    return GraphOfGroups(n, vertices, edges)


def build_dim4_orbifolds():
    """Base orbifolds with mirrors realizable above dimension three."""
    q_cross_i = disk(boundary=circle(D0, MIRROR, D0, MIRROR))
    corner = disk(boundary=circle(D0, MIRROR, (MIRROR, 2)))
    return [q_cross_i, corner]


def build_fixture(name: str, n: int = 1) -> GraphOfGroups:
    key = name.replace("_", "-").lower()
    if key == "scott":
        return build_scott(n)
    if key in ("torus-type-2", "torus-type2", "torustype2"):
        return build_torus_type2(n)
    if key in ("klein-glue", "klein", "kleinglue"):
        return build_klein_glue(n)
    raise ValueError(f"unknown fixture {name!r}")
