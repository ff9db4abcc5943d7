"""Compact 2-orbifolds with mirrors, cone points and a partitioned boundary.

An orbifold is stored combinatorially: an underlying surface (orientable or
not, with genus counting handles or crosscaps), a multiset of interior cone
points, and a list of boundary circles.  Each circle is a cyclic sequence of
segments.  Segment kinds:

    M    mirror arc
    D0   boundary arc meeting the ambient boundary
    D1   boundary arc meeting decomposition edges
    CUT  scar left by cutting along an arc (treated like a D-segment)

A corner reflector of rotation order m (dihedral stabilizer of order 2m)
sits between two M segments and is stored on the second segment as
``corner=m``.  Junctions between an M segment and a D-segment are reflector
ends (stabilizer of order 2); junctions between two D-segments of different
kinds are plain points.  Neither carries explicit data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

MIRROR = "M"
D0 = "D0"
D1 = "D1"
CUT = "CUT"

SEGMENT_KINDS = (MIRROR, D0, D1, CUT)
D_KINDS = (D0, D1, CUT)

FINITE = "finite"
VC = "virtually-cyclic"
NOT_VC = "not-virtually-cyclic"


class OrbifoldError(ValueError):
    """Raised when an operation is applied to an unsuitable orbifold."""


@dataclass(frozen=True, order=True)
class Segment:
    kind: str
    corner: Optional[int] = None

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise OrbifoldError(f"unknown segment kind {self.kind!r}")


def seg(kind: str, corner: Optional[int] = None) -> Segment:
    return Segment(kind, corner)


Circle = tuple  # tuple[Segment, ...]


def circle(*kinds) -> Circle:
    """Build a circle from segment kinds; pairs (kind, corner) allowed."""
    out = []
    for k in kinds:
        if isinstance(k, Segment):
            out.append(k)
        elif isinstance(k, tuple):
            out.append(Segment(k[0], k[1]))
        else:
            out.append(Segment(k))
    return tuple(out)


def _rotations(c: Circle) -> Iterable[Circle]:
    n = len(c)
    for i in range(n):
        yield c[i:] + c[:i]


def reflect_circle(c: Circle) -> Circle:
    """Reverse a circle, re-attaching corner labels to the new junctions."""
    n = len(c)
    if n == 1:
        return c
    return tuple(
        Segment(c[n - 1 - i].kind, c[(n - i) % n].corner) for i in range(n)
    )


def _circle_key(c: Circle):
    return tuple((s.kind, s.corner if s.corner is not None else 0) for s in c)


def canonical_circle(c: Circle) -> Circle:
    """Lexicographically least rotation, reflections included."""
    cands = list(_rotations(c)) + list(_rotations(reflect_circle(c)))
    return min(cands, key=_circle_key)


def cyclic_runs(c: Circle, is_separator):
    """Maximal cyclic runs of segment indices not satisfying is_separator.

    Returns a list of runs in circle order; a circle without separators is a
    single closed run.  Empty runs (two adjacent separators) are dropped.
    """
    n = len(c)
    sep = [i for i in range(n) if is_separator(c[i])]
    if not sep:
        return [list(range(n))]
    runs = []
    for k, p in enumerate(sep):
        q = sep[(k + 1) % len(sep)]
        run = []
        j = (p + 1) % n
        while j != q:
            run.append(j)
            j = (j + 1) % n
        if run:
            runs.append(run)
    return runs


@dataclass(frozen=True)
class Orbifold2:
    orientable: bool
    genus: int
    cone_points: tuple = ()
    circles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cone_points", tuple(sorted(self.cone_points)))
        object.__setattr__(self, "circles", tuple(tuple(c) for c in self.circles))

    def segments(self):
        for ci, c in enumerate(self.circles):
            for si, s in enumerate(c):
                yield (ci, si), s

    def canonical(self) -> "Orbifold2":
        circs = sorted((canonical_circle(c) for c in self.circles), key=_circle_key)
        return Orbifold2(self.orientable, self.genus, self.cone_points, tuple(circs))

    def boundary_components(self, ci: int):
        """Maximal runs of D-segments of circle ci (the orbifold-boundary parts)."""
        return cyclic_runs(self.circles[ci], lambda s: s.kind == MIRROR)


# -- validation --------------------------------------------------------------


def validate(o: Orbifold2):
    """Return a list of violation strings; empty list means the orbifold is ok."""
    bad = []
    if o.genus < 0:
        bad.append("genus must be nonnegative")
    for k, p in enumerate(o.cone_points):
        if p < 2:
            bad.append(f"cone point {k}: order {p} < 2")
    for ci, c in enumerate(o.circles):
        if len(c) == 0:
            bad.append(f"circle {ci}: empty")
            continue
        if len(c) == 1:
            s = c[0]
            if s.corner is not None:
                bad.append(f"circle {ci}: corner label on a single closed segment")
            if s.kind == CUT:
                bad.append(f"circle {ci}: closed single CUT segment")
            continue
        n = len(c)
        for si in range(n):
            prev, cur = c[si - 1], c[si]
            if cur.corner is not None:
                if cur.corner < 2:
                    bad.append(f"circle {ci} segment {si}: corner label < 2")
                if not (prev.kind == MIRROR and cur.kind == MIRROR):
                    bad.append(
                        f"circle {ci} segment {si}: corner not between two mirrors"
                    )
            else:
                if prev.kind == cur.kind == MIRROR:
                    bad.append(
                        f"circle {ci} segment {si}: adjacent mirrors need a corner"
                    )
                elif prev.kind == cur.kind:
                    bad.append(
                        f"circle {ci} segment {si}: adjacent segments of equal kind"
                    )
    return bad


def require_valid(o: Orbifold2):
    bad = validate(o)
    if bad:
        raise OrbifoldError("; ".join(bad))


# -- Euler characteristic ------------------------------------------------------


def underlying_chi(o: Orbifold2) -> int:
    b = len(o.circles)
    if o.orientable:
        return 2 - 2 * o.genus - b
    return 2 - o.genus - b


def _circle_delta(c: Circle) -> Fraction:
    if len(c) == 1:
        return Fraction(0)
    n = len(c)
    verts = Fraction(0)
    edges = Fraction(0)
    for si in range(n):
        prev, cur = c[si - 1], c[si]
        if cur.corner is not None:
            verts += Fraction(1, 2 * cur.corner)
        elif MIRROR in (prev.kind, cur.kind):
            verts += Fraction(1, 2)  # reflector end
        else:
            verts += 1  # plain junction
        edges += Fraction(1, 2) if cur.kind == MIRROR else Fraction(1)
    return verts - edges


def euler_char(o: Orbifold2) -> Fraction:
    """Orbifold Euler characteristic via a stabilizer-weighted cell count."""
    require_valid(o)
    chi = Fraction(underlying_chi(o))
    for p in o.cone_points:
        chi -= 1 - Fraction(1, p)
    for c in o.circles:
        chi += _circle_delta(c)
    return chi


# -- predicates ----------------------------------------------------------------


def is_mirror_free(o: Orbifold2) -> bool:
    require_valid(o)
    return all(s.kind != MIRROR for _, s in o.segments())


def has_boundary(o: Orbifold2) -> bool:
    return any(s.kind in D_KINDS for _, s in o.segments())


def pi1_class(o: Orbifold2) -> str:
    """Coarse fundamental-group class: finite / virtually cyclic / neither."""
    require_valid(o)
    if not has_boundary(o):
        raise OrbifoldError("closed orbifold: fundamental-group class out of scope")
    chi = euler_char(o)
    if chi > 0:
        return FINITE
    if chi == 0:
        return VC
    return NOT_VC


# -- doubling along the D0 part -------------------------------------------------


def _merge_adjacent(segs) -> Circle:
    """Merge cyclically adjacent segments of equal kind with no corner between."""
    segs = list(segs)
    changed = True
    while changed and len(segs) > 1:
        changed = False
        n = len(segs)
        for i in range(n):
            j = (i + 1) % n
            if segs[j].corner is None and segs[i].kind == segs[j].kind:
                keep = segs[i]
                if i < j:
                    segs = segs[:i] + [keep] + segs[j + 1 :]
                else:  # j == 0 wraps
                    segs = [keep] + segs[1:i]
                changed = True
                break
    return tuple(segs)


def d0_subcomplex_chi(o: Orbifold2) -> Fraction:
    """Weighted chi of the D0 subcomplex.

    Whole-D0 circles contribute 0; a D0 interval contributes w(l) + w(r) - 1
    where an endpoint at a reflector end weighs 1/2 and a plain one weighs 1.
    """
    total = Fraction(0)
    for ci, c in enumerate(o.circles):
        if all(s.kind == D0 for s in c):
            continue
        n = len(c)
        for si, s in enumerate(c):
            if s.kind != D0:
                continue
            left = Fraction(1, 2) if c[si - 1].kind == MIRROR else Fraction(1)
            right = Fraction(1, 2) if c[(si + 1) % n].kind == MIRROR else Fraction(1)
            total += left + right - 1
    return total


def _d0_underlying_chi(o: Orbifold2) -> int:
    total = 0
    for c in o.circles:
        if all(s.kind == D0 for s in c):
            continue
        total += sum(1 for s in c if s.kind == D0)
    return total


def double_along_d0(o: Orbifold2) -> Orbifold2:
    """Glue two mirror copies of o along every D0 segment."""
    require_valid(o)
    if not any(s.kind == D0 for _, s in o.segments()):
        raise OrbifoldError("no D0 segments to double along")

    cones = list(o.cone_points) * 2
    new_circles = []
    for c in o.circles:
        if all(s.kind == D0 for s in c):
            continue  # glued away entirely
        if all(s.kind != D0 for s in c):
            new_circles.append(c)
            new_circles.append(reflect_circle(c))
            continue
        # maximal runs of non-D0 segments double to circles
        for run in cyclic_runs(c, lambda s: s.kind == D0):
            fwd = []
            for k, si in enumerate(run):
                corner = c[si].corner if k > 0 else None
                fwd.append(Segment(c[si].kind, corner))
            back = []
            for k in range(len(run) - 1, -1, -1):
                corner = c[run[k + 1]].corner if k + 1 < len(run) else None
                back.append(Segment(c[run[k]].kind, corner))
            new_circles.append(_merge_adjacent(fwd + back))

    chi_double = 2 * underlying_chi(o) - _d0_underlying_chi(o)
    b = len(new_circles)
    if o.orientable:
        genus2 = 2 - chi_double - b
        if genus2 % 2:
            raise OrbifoldError("inconsistent doubled surface")
        genus = genus2 // 2
    else:
        genus = 2 - chi_double - b
    result = Orbifold2(o.orientable, genus, tuple(cones), tuple(new_circles))
    require_valid(result)
    return result


# -- common builders -----------------------------------------------------------


def disk(cones=(), boundary=None) -> Orbifold2:
    if boundary is None:
        boundary = circle(D0)
    return Orbifold2(True, 0, tuple(cones), (tuple(boundary),))


def annulus(outer=None, inner=None, cones=()) -> Orbifold2:
    outer = tuple(outer) if outer is not None else circle(D0)
    inner = tuple(inner) if inner is not None else circle(D0)
    return Orbifold2(True, 0, tuple(cones), (outer, inner))


def pants(kinds=(D0, D0, D0)) -> Orbifold2:
    return Orbifold2(True, 0, (), tuple(circle(k) for k in kinds))


def mobius_band() -> Orbifold2:
    return Orbifold2(False, 1, (), (circle(D0),))


# -- serialization ---------------------------------------------------------------


def to_dict(o: Orbifold2) -> dict:
    return {
        "orientable": o.orientable,
        "genus": o.genus,
        "cone_points": list(o.cone_points),
        "circles": [
            [
                {"kind": s.kind, **({"corner": s.corner} if s.corner is not None else {})}
                for s in c
            ]
            for c in o.circles
        ],
    }


def from_dict(d: dict) -> Orbifold2:
    circles = tuple(
        tuple(Segment(s["kind"], s.get("corner")) for s in c) for c in d["circles"]
    )
    return Orbifold2(
        bool(d["orientable"]), int(d["genus"]), tuple(d.get("cone_points", ())), circles
    )
