"""Mirror doubles of 2-orbifolds and lifting of arc classes.

The mirror double glues two reflected copies of an orbifold along all its
mirror segments.  Corner reflectors of rotation order m unfold to interior
cone points of order m, each boundary component (maximal run of D-segments)
doubles to a boundary circle, and mirror circles disappear into the
interior.  Twisted arcs lift to single arcs crossing the old mirror locus;
untwisted arcs lift to a swapped pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arcs import ArcClass, CurveClass, OutOfScopeError
from .orbifold import (
    MIRROR,
    Orbifold2,
    Segment,
    cyclic_runs,
    euler_char,
    reflect_circle,
    require_valid,
    underlying_chi,
)


@dataclass
class MirrorDouble:
    base: Orbifold2
    cover: Orbifold2
    seg_map: dict = field(default_factory=dict)  # (ci, si, sign) -> (Ci, Si)
    circle_map: dict = field(default_factory=dict)  # (ci, sign) -> Ci
    cone_map: dict = field(default_factory=dict)  # i -> {+1: I, -1: I'}
    corner_cone: dict = field(default_factory=dict)  # (ci, si) -> cone index


def mirror_double(o: Orbifold2) -> MirrorDouble:
    require_valid(o)
    if not o.orientable:
        raise OutOfScopeError("mirror double of a nonorientable orbifold")

    cone_prov = []  # (order, tag)
    for i, p in enumerate(o.cone_points):
        cone_prov.append((p, ("cone", i, 1)))
        cone_prov.append((p, ("cone", i, -1)))
    for (ci, si), s in o.segments():
        if s.corner is not None:
            cone_prov.append((s.corner, ("corner", ci, si)))
    cone_prov.sort(key=lambda t: (t[0], t[1]))
    cone_index = {tag: k for k, (_, tag) in enumerate(cone_prov)}

    md = MirrorDouble(base=o, cover=None)
    for i in range(len(o.cone_points)):
        md.cone_map[i] = {1: cone_index[("cone", i, 1)], -1: cone_index[("cone", i, -1)]}
    for (ci, si), s in o.segments():
        if s.corner is not None:
            md.corner_cone[(ci, si)] = cone_index[("corner", ci, si)]

    circles = []
    for ci, c in enumerate(o.circles):
        n = len(c)
        kinds = {s.kind for s in c}
        if kinds == {MIRROR}:
            continue  # mirror circle: vanishes into the interior
        if MIRROR not in kinds:
            plus = tuple(Segment(s.kind) for s in c)
            minus = reflect_circle(plus)
            cp = len(circles)
            circles.append(plus)
            md.circle_map[(ci, 1)] = cp
            for si in range(n):
                md.seg_map[(ci, si, 1)] = (cp, si)
            cm = len(circles)
            circles.append(minus)
            md.circle_map[(ci, -1)] = cm
            for si in range(n):
                md.seg_map[(ci, si, -1)] = (cm, (n - 1 - si) % n)
            continue
        runs = cyclic_runs(c, lambda s: s.kind == MIRROR)
        for run in runs:
            k = len(run) - 1
            C = len(circles)
            if k == 0:
                circles.append((Segment(c[run[0]].kind),))
                md.seg_map[(ci, run[0], 1)] = (C, 0)
                md.seg_map[(ci, run[0], -1)] = (C, 0)
                continue
            segs = [Segment(c[run[0]].kind)]
            for t in range(1, k):
                segs.append(Segment(c[run[t]].kind))
            segs.append(Segment(c[run[k]].kind))
            for t in range(k - 1, 0, -1):
                segs.append(Segment(c[run[t]].kind))
            circles.append(tuple(segs))
            md.seg_map[(ci, run[0], 1)] = (C, 0)
            md.seg_map[(ci, run[0], -1)] = (C, 0)
            md.seg_map[(ci, run[k], 1)] = (C, k)
            md.seg_map[(ci, run[k], -1)] = (C, k)
            for t in range(1, k):
                md.seg_map[(ci, run[t], 1)] = (C, t)
                md.seg_map[(ci, run[t], -1)] = (C, 2 * k - t)

    chi_u = 2 * underlying_chi(o) - _mirror_complex_chi(o)
    b = len(circles)
    genus2 = 2 - chi_u - b
    if genus2 != 0:
        raise OutOfScopeError("mirror double is not planar; outside oracle scope")
    cover = Orbifold2(True, 0, tuple(p for p, _ in cone_prov), tuple(circles))
    require_valid(cover)
    if euler_char(cover) != 2 * euler_char(o):
        raise AssertionError("mirror double chi mismatch")
    md.cover = cover
    return md


def _mirror_complex_chi(o: Orbifold2) -> int:
    total = 0
    for c in o.circles:
        kinds = {s.kind for s in c}
        if kinds == {MIRROR}:
            continue  # chain is a circle: chi 0
        if MIRROR in kinds:
            total += len(cyclic_runs(c, lambda s: s.kind != MIRROR))
    return total


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


def _circle_has_mirror(o: Orbifold2, ci: int) -> bool:
    return any(s.kind == MIRROR for s in o.circles[ci])


def _is_mirror_material(o: Orbifold2, obj) -> bool:
    if obj[0] == "corner":
        return True
    if obj[0] == "seg":
        return o.circles[obj[1]][obj[2]].kind == MIRROR
    if obj[0] == "circle":
        return _circle_has_mirror(o, obj[1])
    return False


def _translate_signed(md: MirrorDouble, obj, sign: int, port_circle):
    """Cover objects for one copy of obj.  port_circle: the lifted arc's circle."""
    o = md.base
    if obj[0] == "cone":
        return {("cone", md.cone_map[obj[1]][sign])}
    if obj[0] == "corner":
        return {("cone", md.corner_cone[(obj[1], obj[2])])}
    if obj[0] == "circle":
        ci = obj[1]
        if _circle_has_mirror(o, ci):
            out = set()
            for run in cyclic_runs(o.circles[ci], lambda s: s.kind == MIRROR):
                C, _ = md.seg_map[(ci, run[0], 1)]
                out.add(("circle", C))
            for si, s in enumerate(o.circles[ci]):
                if s.corner is not None:
                    out.add(("cone", md.corner_cone[(ci, si)]))
            return out
        return {("circle", md.circle_map[(ci, sign)])}
    if obj[0] == "seg":
        ci, si = obj[1], obj[2]
        if o.circles[ci][si].kind == MIRROR:
            return set()  # mirror segments become interior lines
        C, S = md.seg_map[(ci, si, sign)]
        if C == port_circle:
            return {("seg", C, S)}
        return {("circle", C)}
    raise ValueError(obj)


def _translate_both(md, obj, port_circle):
    return _translate_signed(md, obj, 1, port_circle) | _translate_signed(
        md, obj, -1, port_circle
    )


def _cover_universe(md: MirrorDouble, port_circle, port_segs):
    cov = md.cover
    objs = {("cone", i) for i in range(len(cov.cone_points))}
    for Ci in range(len(cov.circles)):
        if Ci == port_circle:
            for Si in range(len(cov.circles[Ci])):
                if (Ci, Si) not in port_segs:
                    objs.add(("seg", Ci, Si))
        else:
            objs.add(("circle", Ci))
    return objs


def lift_arc(md: MirrorDouble, a: ArcClass):
    """Lift a downstairs arc class to its system of cover arc classes."""
    o = md.base
    if a.fold_cone is not None:
        raise OutOfScopeError("cone-folded arcs are not lifted")
    if a.twisted:
        (ci, si) = a.endpoints[0]
        ep = md.seg_map[(ci, si, 1)]
        em = md.seg_map[(ci, si, -1)]
        if ep[0] != em[0]:
            return [ArcClass(False, (ep, em))]
        CC = ep[0]
        if a.separation is None:
            return [ArcClass(False, (ep, em))]
        sides = sorted(a.separation, key=lambda s: sorted(s))
        lifted = []
        for side in sides:
            out = set()
            for x in side:
                out |= _translate_both(md, x, CC)
            lifted.append(frozenset(out))
        universe = _cover_universe(md, CC, {ep, em})
        if lifted[0] | lifted[1] != universe or lifted[0] & lifted[1]:
            raise AssertionError("twisted lift does not partition the cover")
        return [ArcClass(False, (ep, em), separation=frozenset(lifted))]

    e1, e2 = a.ports()
    lifts = []
    for sign in (1, -1):
        E1 = md.seg_map[(e1[0], e1[1], sign)]
        E2 = md.seg_map[(e2[0], e2[1], sign)]
        if a.separation is None or E1[0] != E2[0]:
            lifts.append(ArcClass(False, tuple(sorted((E1, E2)))))
            continue
        CC = E1[0]
        sides = sorted(a.separation, key=lambda s: sorted(s))
        mirror_sides = [any(_is_mirror_material(o, x) for x in side) for side in sides]
        if all(mirror_sides):
            raise OutOfScopeError("mirror material on both sides of a chord")
        other = sides[0] if mirror_sides[1] else sides[1]
        away = set()
        for x in other:
            for y in _translate_signed(md, x, sign, CC):
                if x[0] == "seg" and y[0] != "seg":
                    # a D-segment of the port circle must lift onto the same
                    # cover circle as the ports; otherwise the chord shape is
                    # outside the planar lifting scope
                    raise OutOfScopeError("unsupported chord shape for lifting")
                away.add(y)
        universe = _cover_universe(md, CC, {E1, E2})
        facing = universe - away
        lifts.append(
            ArcClass(
                False,
                tuple(sorted((E1, E2))),
                separation=frozenset({frozenset(away), frozenset(facing)}),
            )
        )
    out = []
    for x in lifts:
        if x not in out:
            out.append(x)
    return out


def lift_scc(md: MirrorDouble, s: CurveClass):
    """Lift an untwisted closed-curve class disjoint from the mirrors."""
    o = md.base
    if s.twisted or s.separation is None:
        raise OutOfScopeError("only untwisted separating curves are lifted")
    sides = sorted(s.separation, key=lambda x: sorted(x))
    mirror_sides = [any(_is_mirror_material(o, x) for x in side) for side in sides]
    if all(mirror_sides):
        raise OutOfScopeError("mirror material on both sides of a curve")
    other = sides[0] if mirror_sides[1] else sides[1]
    lifts = []
    for sign in (1, -1):
        away = set()
        for x in other:
            away |= _translate_signed(md, x, sign, None)
        universe = _cover_universe(md, None, set())
        lifts.append(
            CurveClass(separation=frozenset({frozenset(away), frozenset(universe - away)}))
        )
    out = []
    for x in lifts:
        if x not in out:
            out.append(x)
    return out
