"""Essential arcs and curves on small 2-orbifolds.

Arc and curve classes are encoded combinatorially: an arc is determined by
its endpoint segments plus separation data (which marked objects - cone
points, whole circles, segments of the endpoint circles - lie on which side).
Spanning arcs between distinct circles are non-separating in the planar
scope and carry no side data; the encoding deliberately quotients out the
twisting freedom of spanning arcs.

Orbifolds with mirrors are handled through their mirror double: every
mirror chain is unfolded, corner reflectors become interior cone points and
twisted arcs (one end folded on a mirror) lift to ordinary arcs.
Essentiality is decided by combinatorial rules below; crossing of two
classes is decided by exhaustive region placement: two classes cross if and
only if no planar diagram realizes both disjointly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .orbifold import CUT, D0, D1, MIRROR, Orbifold2, OrbifoldError


class OutOfScopeError(OrbifoldError):
    """The orbifold lies outside the oracle's guaranteed scope."""


# Objects appearing in separation data:
#   ("cone", i)       interior cone point (index into sorted cone_points)
#   ("circle", ci)    a whole boundary circle
#   ("seg", ci, si)   a segment of a circle that carries an arc endpoint
#   ("corner", ci, si) the corner stored on segment si of circle ci


@dataclass(frozen=True)
class ArcClass:
    twisted: bool
    endpoints: tuple  # sorted tuple of (ci, si); two entries, one if twisted
    fold: Optional[tuple] = None  # (ci, si) of the mirror segment, if twisted
    fold_cone: Optional[int] = None  # order-2 cone index; representable only
    separation: Optional[frozenset] = None  # frozenset({sideA, sideB}) or None

    def __post_init__(self):
        object.__setattr__(self, "endpoints", tuple(sorted(self.endpoints)))

    def ports(self):
        if self.twisted:
            return (self.endpoints[0], self.endpoints[0])
        if len(self.endpoints) == 1:
            return (self.endpoints[0], self.endpoints[0])
        return self.endpoints


@dataclass(frozen=True)
class CurveClass:
    twisted: bool = False
    folds: tuple = ()
    separation: Optional[frozenset] = None


def separation(side_a, side_b) -> frozenset:
    return frozenset({frozenset(side_a), frozenset(side_b)})


def _seg_kind(o: Orbifold2, obj) -> str:
    return o.circles[obj[1]][obj[2]].kind


def _is_blocker(o: Orbifold2, obj) -> bool:
    if obj[0] in ("cone", "circle", "corner"):
        return True
    if obj[0] == "seg":
        return _seg_kind(o, obj) == MIRROR
    return False


def _circle_objects(o: Orbifold2, ci: int, exclude):
    """Segment and corner objects of circle ci, excluding given segment ids."""
    out = []
    c = o.circles[ci]
    for si, s in enumerate(c):
        if si not in exclude:
            out.append(("seg", ci, si))
        if s.corner is not None:
            out.append(("corner", ci, si))
    return out


def _float_objects(o: Orbifold2, port_circles):
    floats = [("cone", i) for i in range(len(o.cone_points))]
    floats += [("circle", ci) for ci in range(len(o.circles)) if ci not in port_circles]
    return floats


def _runs_between(o: Orbifold2, ci: int, a: int, b: int):
    """The two (segment, corner) object runs strictly between segments a and b.

    Returns (run_ab, run_ba): objects encountered walking forward from a to b
    and from b back to a.  Corner objects are assigned to the run containing
    their junction.
    """
    c = o.circles[ci]
    n = len(c)

    def walk(start, stop):
        out = []
        j = (start + 1) % n
        if c[j].corner is not None:  # corner at junction (start, j)
            out.append(("corner", ci, j))
        while j != stop:
            out.append(("seg", ci, j))
            nxt = (j + 1) % n
            if c[nxt].corner is not None:
                out.append(("corner", ci, nxt))
            j = nxt
        return out

    return walk(a, b), walk(b, a)


# ---------------------------------------------------------------------------
# candidate enumeration
# ---------------------------------------------------------------------------


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def arc_candidates(o: Orbifold2):
    """All combinatorially distinct arc encodings with endpoints on D0 segments."""
    d0 = [(ci, si) for (ci, si), s in o.segments() if s.kind == D0]
    cands = []
    seen = set()

    def add(a: ArcClass):
        key = (a.twisted, a.endpoints, a.fold, a.fold_cone, a.separation)
        if key not in seen:
            seen.add(key)
            cands.append(a)

    # untwisted
    for e1, e2 in itertools.combinations_with_replacement(d0, 2):
        c1, s1 = e1
        c2, s2 = e2
        if c1 != c2:
            add(ArcClass(False, (e1, e2)))
            continue
        floats = _float_objects(o, {c1})
        if s1 == s2:
            rest = _circle_objects(o, c1, {s1})
            for g in _subsets(floats):
                side_a = frozenset(set(rest) | (set(floats) - set(g)))
                side_b = frozenset(g)
                add(ArcClass(False, (e1, e2), separation=frozenset({side_a, side_b})))
        else:
            run_x, run_y = _runs_between(o, c1, s1, s2)
            for g in _subsets(floats):
                side_a = frozenset(set(run_x) | set(g))
                side_b = frozenset((set(run_y) | set(floats)) - set(g))
                add(ArcClass(False, (e1, e2), separation=frozenset({side_a, side_b})))

    # twisted: fold on a mirror segment
    mirrors = [(ci, si) for (ci, si), s in o.segments() if s.kind == MIRROR]
    for e in d0:
        ce, se = e
        for m in mirrors:
            cm, sm = m
            if cm != ce:
                add(ArcClass(True, (e,), fold=m))
                continue
            floats = _float_objects(o, {ce})
            run_x, run_y = _runs_between(o, ce, se, sm)
            for g in _subsets(floats):
                side_a = frozenset(set(run_x) | set(g))
                side_b = frozenset((set(run_y) | set(floats)) - set(g))
                add(ArcClass(True, (e,), fold=m, separation=frozenset({side_a, side_b})))
    return cands


def scc_candidates(o: Orbifold2):
    """Two-sided simple closed curve encodings (separating, planar scope)."""
    objs = [("cone", i) for i in range(len(o.cone_points))]
    objs += [("circle", ci) for ci in range(len(o.circles))]
    out = []
    seen = set()
    for g in _subsets(objs):
        side_a = frozenset(g)
        side_b = frozenset(set(objs) - set(g))
        key = frozenset({side_a, side_b})
        if key in seen:
            continue
        seen.add(key)
        out.append(CurveClass(separation=key))
    return out


# ---------------------------------------------------------------------------
# essentiality
# ---------------------------------------------------------------------------


def _sides(a) -> tuple:
    s = sorted(a.separation, key=lambda side: sorted(side))
    if len(s) == 1:  # both sides equal (can only be two empty sides)
        return (s[0], s[0])
    return tuple(s)


def _side_seg_objects(o, side):
    return [x for x in side if x[0] == "seg"]


def is_essential_arc(o: Orbifold2, a: ArcClass) -> bool:
    """Essential: not homotopic into the D0 part, the D1 part, or one segment."""
    if a.fold_cone is not None:
        raise OutOfScopeError("cone-folded arcs are outside the enumeration scope")
    if a.separation is None:
        # spanning arcs join distinct boundary circles (or cross the core of a
        # Mobius band); they can never be homotoped into the boundary
        return True
    s1, s2 = _sides(a)
    if a.twisted:
        # the fold may slide off the mirror end and the arc absorb into the
        # boundary when one side holds nothing, or a lone D1/CUT segment
        for side in (s1, s2):
            if any(_is_blocker(o, x) for x in side):
                continue
            segs = _side_seg_objects(o, side)
            if len(segs) == 0:
                return False
            if len(segs) == 1 and _seg_kind(o, segs[0]) in (D1, CUT) and len(side) == 1:
                return False
        return True
    e1, e2 = a.ports()
    if e1 == e2:
        # both endpoints on one D0 segment: the arc can sweep across any side
        # free of cones, mirrors and other circles onto the boundary
        for side in (s1, s2):
            if not any(_is_blocker(o, x) for x in side):
                return False
        return True
    # endpoints on distinct segments of one circle
    for side in (s1, s2):
        if any(_is_blocker(o, x) for x in side):
            continue
        if len(_side_seg_objects(o, side)) <= 1 and all(x[0] == "seg" for x in side):
            return False
    return True


def is_essential_scc(o: Orbifold2, s: CurveClass) -> bool:
    if s.separation is None:
        return False
    s1, s2 = _sides(s)
    for side in (s1, s2):
        circles = [x for x in side if x[0] == "circle"]
        cones = [x for x in side if x[0] == "cone"]
        if not circles and len(cones) <= 1:
            return False  # bounds a disk or a cone: pi1 does not inject
        if len(circles) == 1 and not cones:
            kinds = {seg.kind for seg in o.circles[circles[0][1]]}
            kinds.discard(MIRROR)
            if len(kinds) <= 1:
                return False  # parallel to a pure boundary circle
    return True


# ---------------------------------------------------------------------------
# crossing by exhaustive region placement
# ---------------------------------------------------------------------------


def _port_circles(a) -> set:
    if isinstance(a, CurveClass):
        return set()
    out = {e[0] for e in a.endpoints}
    if a.fold is not None:
        out.add(a.fold[0])
    return out


def _port_segs(a) -> set:
    if isinstance(a, CurveClass):
        return set()
    out = set(a.endpoints)
    if a.fold is not None:
        out.add(a.fold)
    return out


def _region_run(o, a, side):
    """Ordered boundary run of the region `side` along a's port circle.

    Returns a list of entries: ("piece", port) for the split halves of a's own
    port segments and ("seg", ci, si) for whole segments, in circle order.
    Only meaningful when a has both ports on one circle.
    """
    ports = sorted(_port_segs(a))
    ci = ports[0][0]
    c = o.circles[ci]
    n = len(c)
    p1 = ports[0][1]
    p2 = ports[-1][1]
    side_segs = {x[2] for x in side if x[0] == "seg" and x[1] == ci}

    def walk(start, stop):
        run = [("piece", (ci, start))]
        j = (start + 1) % n
        while j != stop:
            run.append(("seg", ci, j))
            j = (j + 1) % n
        run.append(("piece", (ci, stop)))
        return run

    if p1 == p2:
        whole = [("seg", ci, j) for j in range(n) if j != p1]
        if side_segs:
            return [("piece", (ci, p1))] + whole + [("piece", (ci, p1))]
        return [("piece", (ci, p1)), ("piece", (ci, p1))]
    run_fwd = walk(p1, p2)
    fwd_segs = {e[2] for e in run_fwd if e[0] == "seg"}
    if side_segs <= fwd_segs and (side_segs or not fwd_segs):
        return run_fwd
    return walk(p2, p1)


def _object_in_region(o, a, side, obj) -> bool:
    """Is obj (from b's universe) strictly inside a's region `side`?"""
    pc = _port_circles(a)
    kind = obj[0]
    if kind == "cone":
        return obj in side
    if kind == "circle":
        if obj[1] in pc:
            return False  # split by a; never wholly inside
        return obj in side
    if kind in ("seg", "corner"):
        ci = obj[1]
        if ci in pc:
            return obj in side and obj not in {("seg",) + p for p in _port_segs(a)}
        return ("circle", ci) in side
    raise ValueError(obj)


def _ports_available(o, a, side, port) -> bool:
    ci, si = port
    if ci in _port_circles(a):
        return ("seg", ci, si) in side or (ci, si) in _port_segs(a)
    return ("circle", ci) in side


def _placeable_in_side(o, a, side, b) -> bool:
    """Can b be drawn entirely inside the complementary region of a at `side`?"""
    b_ports = list(_port_segs(b))
    for p in b_ports:
        if not _ports_available(o, a, side, p):
            return False
    if isinstance(b, CurveClass) or b.separation is not None:
        if b.separation is None:
            return True
        for away in _sides(b):
            if not all(_object_in_region(o, a, side, x) for x in away):
                continue
            if not _contiguity_ok(o, a, side, b, away):
                continue
            return True
        return False
    return True  # spanning arc: ports suffice


def _contiguity_ok(o, a, side, b, away) -> bool:
    """Segments of `away` on a shared port circle must sit between b's ports."""
    a_circles = _port_circles(a)
    b_ports = _port_segs(b)
    shared = {p[0] for p in b_ports} & a_circles
    if not shared:
        return True
    ci = next(iter(shared))
    run = _region_run(o, a, side)
    away_here = {x for x in away if x[0] == "seg" and x[1] == ci}
    positions = []
    for p in sorted(b_ports):
        if p[0] != ci:
            continue
        opts = [
            k
            for k, e in enumerate(run)
            if (e[0] == "seg" and e[1] == ci and e[2] == p[1])
            or (e[0] == "piece" and e[1] == p)
        ]
        if not opts:
            return False
        positions.append(opts)
    if len(positions) == 1:
        positions = positions * 2
    for k1 in positions[0]:
        for k2 in positions[1]:
            lo, hi = min(k1, k2), max(k1, k2)
            between = {
                ("seg", e[1], e[2]) for e in run[lo + 1 : hi] if e[0] == "seg"
            }
            if away_here == between:
                return True
    return False


def forced_cross(o: Orbifold2, a, b) -> bool:
    """True iff every pair of representatives of a and b intersects."""
    if a == b:
        return False
    a_sep = getattr(a, "separation", None)
    b_sep = getattr(b, "separation", None)
    if a_sep is None and b_sep is None:
        return False  # two spanning arcs can always be made disjoint
    if a_sep is not None:
        for side in _sides(a):
            if _placeable_in_side(o, a, side, b):
                return False
        return True
    # a spanning, b separating: place a inside a region of b
    for side in _sides(b):
        if _placeable_in_side(o, b, side, a):
            return False
    return True
