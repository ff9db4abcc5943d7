"""Public operations of the arc calculus: oracle, crossing, isolation, cutting.

The oracle's guaranteed scope is small orbifolds: planar (orientable genus
zero) with at most three boundary circles and two cone points, the Mobius
band with plain boundary, and mirror orbifolds whose mirror double is
planar.  Everything the catalog and the graph engine need lives inside this
scope.
"""

from __future__ import annotations

import itertools

from .arcs import (
    ArcClass,
    CurveClass,
    OutOfScopeError,
    arc_candidates,
    forced_cross,
    is_essential_arc,
    is_essential_scc,
    scc_candidates,
)
from .cover import lift_arc, lift_scc, mirror_double
from .orbifold import (
    CUT,
    D0,
    D1,
    MIRROR,
    Orbifold2,
    OrbifoldError,
    Segment,
    _merge_adjacent,
    cyclic_runs,
    euler_char,
    is_mirror_free,
    reflect_circle,
    require_valid,
)


def _is_mobius(o: Orbifold2) -> bool:
    return (
        not o.orientable
        and o.genus == 1
        and not o.cone_points
        and len(o.circles) == 1
        and all(s.kind != MIRROR for s in o.circles[0])
    )


def _mobius_plain(o: Orbifold2) -> bool:
    return _is_mobius(o) and len(o.circles[0]) == 1 and o.circles[0][0].kind == D0


def _check_scope(o: Orbifold2):
    require_valid(o)
    if _mobius_plain(o):
        return
    if not o.orientable or o.genus != 0:
        raise OutOfScopeError("oracle scope is planar orbifolds (plus the Mobius band)")
    if len(o.circles) > 3:
        raise OutOfScopeError("more than three boundary circles")
    if len(o.cone_points) > 2:
        raise OutOfScopeError("more than two cone points")
    if not is_mirror_free(o):
        mirror_double(o)  # raises OutOfScopeError when the double is not planar


# ---------------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------------


def essential_arcs_oracle(o: Orbifold2):
    """All essential arc classes of (o, its D0 part)."""
    _check_scope(o)
    if _mobius_plain(o):
        return [ArcClass(False, (((0, 0)), (0, 0)))]
    return [a for a in arc_candidates(o) if is_essential_arc(o, a)]


def _essential_sccs(o: Orbifold2):
    if _mobius_plain(o):
        return []
    if is_mirror_free(o):
        return [s for s in scc_candidates(o) if is_essential_scc(o, s)]
    md = mirror_double(o)
    return [s for s in scc_candidates(md.cover) if is_essential_scc(md.cover, s)]


def has_essential_scc(o: Orbifold2) -> bool:
    """Whether o carries an essential two-sided simple closed curve."""
    require_valid(o)
    if euler_char(o) > 0:
        return False
    if not _mobius_plain(o) and (not o.orientable or o.genus != 0):
        raise OutOfScopeError("curve scope is planar orbifolds plus the Mobius band")
    if _mobius_plain(o):
        return False  # the core is one-sided and gives no splitting
    if is_mirror_free(o):
        return any(is_essential_scc(o, s) for s in scc_candidates(o))
    md = mirror_double(o)
    return any(is_essential_scc(md.cover, s) for s in scc_candidates(md.cover))


def _check_class(o: Orbifold2, x):
    if isinstance(x, CurveClass):
        return
    for ci, si in x.endpoints:
        if ci >= len(o.circles) or si >= len(o.circles[ci]):
            raise OrbifoldError(f"arc endpoint ({ci}, {si}) is not a segment of o")
        if o.circles[ci][si].kind != D0:
            raise OrbifoldError(f"arc endpoint ({ci}, {si}) is not on a D0 segment")
    if x.fold is not None:
        ci, si = x.fold
        if ci >= len(o.circles) or si >= len(o.circles[ci]):
            raise OrbifoldError(f"fold ({ci}, {si}) is not a segment of o")
        if o.circles[ci][si].kind != MIRROR:
            raise OrbifoldError(f"fold ({ci}, {si}) is not on a mirror segment")


def crosses(a, b, o: Orbifold2) -> bool:
    """Nonzero-intersection test for two arc or curve classes in o."""
    _check_scope(o)
    _check_class(o, a)
    _check_class(o, b)
    if a == b:
        return False
    if _mobius_plain(o):
        return False
    if is_mirror_free(o):
        return forced_cross(o, a, b)
    md = mirror_double(o)
    la = _lift_any(md, a)
    lb = _lift_any(md, b)
    return any(forced_cross(md.cover, x, y) for x in la for y in lb)


def _lift_any(md, x):
    if isinstance(x, CurveClass):
        return lift_scc(md, x)
    return lift_arc(md, x)


def isolated_arcs(o: Orbifold2):
    """Essential arcs crossing no essential arc and no essential curve."""
    require_valid(o)
    from . import catalog  # deferred: the catalog builds on this module

    hit = catalog.catalog_match(o)
    if hit is not None:
        entry, arc = hit
        return [arc] if arc is not None else []
    ess = essential_arcs_oracle(o)
    if _mobius_plain(o):
        return list(ess)
    sccs = _essential_sccs(o)
    out = []
    if is_mirror_free(o):
        for a in ess:
            if any(forced_cross(o, a, b) for b in ess if b != a):
                continue
            if any(forced_cross(o, a, s) for s in sccs):
                continue
            out.append(a)
    else:
        md = mirror_double(o)
        lifts = {a: lift_arc(md, a) for a in ess}
        for a in ess:
            crossed = False
            for b in ess:
                if b == a:
                    continue
                if any(
                    forced_cross(md.cover, x, y) for x in lifts[a] for y in lifts[b]
                ):
                    crossed = True
                    break
            if not crossed and not any(
                forced_cross(md.cover, x, s) for x in lifts[a] for s in sccs
            ):
                out.append(a)
    return dedupe_arcs_up_to_symmetry(o, out)


# ---------------------------------------------------------------------------
# orbifold symmetries and arc equivalence
# ---------------------------------------------------------------------------


def _circle_maps(c, d):
    """All dihedral index maps sending circle c onto circle d exactly."""
    n = len(c)
    if len(d) != n:
        return
    rots = list(_all_rotations(c))
    for r, rot in enumerate(rots):
        if rot == d:
            yield {i: (i - r) % n for i in range(n)}
    refl = reflect_circle(c)
    for r, rot in enumerate(_all_rotations(refl)):
        if rot == d:
            yield {i: ((n - 1 - i) - r) % n for i in range(n)}


def _all_rotations(c):
    n = len(c)
    return [c[i:] + c[:i] for i in range(n)]


def orbifold_automorphisms(o: Orbifold2):
    """Combinatorial automorphisms as (circle_perm, seg_map, cone_perm) triples."""
    ncirc = len(o.circles)
    cone_orders = o.cone_points
    cone_groups = {}
    for i, p in enumerate(cone_orders):
        cone_groups.setdefault(p, []).append(i)
    cone_perms = []
    group_lists = list(cone_groups.values())
    for choice in itertools.product(
        *(itertools.permutations(g) for g in group_lists)
    ):
        perm = {}
        for orig, new in zip(group_lists, choice):
            for a, b in zip(orig, new):
                perm[a] = b
        cone_perms.append(perm)

    autos = []
    for cperm in itertools.permutations(range(ncirc)):
        per_circle = []
        ok = True
        for ci in range(ncirc):
            maps = list(_circle_maps(o.circles[ci], o.circles[cperm[ci]]))
            if not maps:
                ok = False
                break
            per_circle.append(maps)
        if not ok:
            continue
        for combo in itertools.product(*per_circle):
            seg_map = {}
            for ci in range(ncirc):
                for si, tj in combo[ci].items():
                    seg_map[(ci, si)] = (cperm[ci], tj)
            for cp in cone_perms:
                autos.append((tuple(cperm), seg_map, cp))
    return autos


def _map_obj(obj, auto):
    cperm, seg_map, cone_perm = auto
    if obj[0] == "cone":
        return ("cone", cone_perm[obj[1]])
    if obj[0] == "circle":
        return ("circle", cperm[obj[1]])
    if obj[0] == "seg":
        ci, si = seg_map[(obj[1], obj[2])]
        return ("seg", ci, si)
    if obj[0] == "corner":
        ci, si = seg_map[(obj[1], obj[2])]
        return ("corner", ci, si)
    raise ValueError(obj)


def map_arc(a: ArcClass, auto) -> ArcClass:
    cperm, seg_map, cone_perm = auto
    endpoints = tuple(sorted(seg_map[e] for e in a.endpoints))
    fold = seg_map[a.fold] if a.fold is not None else None
    sep = None
    if a.separation is not None:
        sep = frozenset(
            frozenset(_map_obj(x, auto) for x in side) for side in a.separation
        )
    return ArcClass(a.twisted, endpoints, fold, a.fold_cone, sep)


def arcs_equivalent(o: Orbifold2, a: ArcClass, b: ArcClass) -> bool:
    if a == b:
        return True
    return any(map_arc(a, auto) == b for auto in orbifold_automorphisms(o))


def dedupe_arcs_up_to_symmetry(o: Orbifold2, arcs):
    out = []
    for a in arcs:
        if not any(arcs_equivalent(o, a, b) for b in out):
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


def threshold_k(o: Orbifold2) -> int:
    """Crowding threshold for the four positive-chi disk families."""
    require_valid(o)
    if euler_char(o) <= 0:
        raise OrbifoldError("threshold families have positive Euler characteristic")
    if not (o.orientable and o.genus == 0 and len(o.circles) == 1):
        raise OrbifoldError("not a disk-shaped orbifold")
    c = o.circles[0]
    mirrors = [s for s in c if s.kind == MIRROR]
    corners = [s.corner for s in c if s.corner is not None]
    cones = o.cone_points
    if not mirrors and not cones:
        return 4  # plain disk
    if not mirrors and len(cones) == 1:
        return 3  # disk with one cone point
    if mirrors and not cones and not corners:
        chains = cyclic_runs(c, lambda s: s.kind != MIRROR)
        if len(chains) == 1 and len(chains[0]) == 1:
            return 3  # half-disk: one mirror, no corner
    if mirrors and not cones and len(corners) == 1:
        chains = cyclic_runs(c, lambda s: s.kind != MIRROR)
        if len(chains) == 1 and len(chains[0]) == 2:
            return 2  # folded cone: two mirrors around one corner
    raise OrbifoldError("not one of the four threshold families")


# ---------------------------------------------------------------------------
# cutting along an isolated arc
# ---------------------------------------------------------------------------


def _linear_cut(c, s):
    """Segments of circle c cut open inside segment s, scar ends first/last."""
    n = len(c)
    out = [Segment(c[s].kind, None)]
    for i in range(1, n):
        out.append(c[(s + i) % n])
    out.append(Segment(c[s].kind, c[s].corner))
    return out


def _walk_side(c, p1, p2):
    """Boundary pieces walking forward from port p1 to port p2 on circle c."""
    n = len(c)
    out = [Segment(c[p1].kind, None)]
    j = (p1 + 1) % n
    while j != p2:
        out.append(c[j])
        j = (j + 1) % n
    out.append(Segment(c[p2].kind, c[p2].corner))
    return out


def _side_floats(o: Orbifold2, side):
    circles = [x[1] for x in side if x[0] == "circle"]
    cones = [o.cone_points[x[1]] for x in side if x[0] == "cone"]
    return circles, cones


def _piece(o, circles, cones, orientable=True, genus=0) -> Orbifold2:
    p = Orbifold2(orientable, genus, tuple(cones), tuple(circles))
    require_valid(p)
    return p


def cut_along_arc(o: Orbifold2, a: ArcClass):
    """Cut o along an isolated essential arc; one or two pieces."""
    require_valid(o)
    iso = isolated_arcs(o)
    if not any(arcs_equivalent(o, a, x) for x in iso):
        raise OrbifoldError("arc is not an isolated essential arc of this orbifold")

    if _mobius_plain(o):
        return [
            _piece(o, [tuple(map(Segment, (D0, CUT, D0, CUT)))], ())
        ]

    other_circles = lambda used: [
        c for ci, c in enumerate(o.circles) if ci not in used
    ]

    if a.separation is None:
        # spanning: one piece, two scars
        if a.twisted:
            (ce, pe) = a.endpoints[0]
            (cm, sm) = a.fold
        else:
            (ce, pe), (cm, sm) = a.ports()
        ring = (
            _linear_cut(o.circles[ce], pe)
            + [Segment(CUT)]
            + _linear_cut(o.circles[cm], sm)
            + [Segment(CUT)]
        )
        circles = [_merge_adjacent(ring)] + other_circles({ce, cm})
        return [_piece(o, circles, o.cone_points, o.orientable, o.genus)]

    # separating: two pieces, one scar each
    if a.twisted:
        (ce, p1) = a.endpoints[0]
        (cm, p2) = a.fold
        assert ce == cm
    else:
        (e1, e2) = a.ports()
        ce = e1[0]
        p1, p2 = e1[1], e2[1]
    c = o.circles[ce]
    sides = sorted(a.separation, key=lambda s: sorted(s))
    pieces = []
    for side in sides:
        side_segs = {x[2] for x in side if x[0] == "seg" and x[1] == ce}
        if p1 == p2:
            if side_segs:
                ring = (
                    [Segment(c[p1].kind, None)]
                    + [c[(p1 + i) % len(c)] for i in range(1, len(c))]
                    + [Segment(c[p1].kind, c[p1].corner), Segment(CUT)]
                )
            else:
                ring = [Segment(c[p1].kind, None), Segment(CUT)]
        else:
            fwd = {j for j in _indices_between(len(c), p1, p2)}
            if side_segs <= fwd and (side_segs or not fwd):
                ring = _walk_side(c, p1, p2) + [Segment(CUT)]
            else:
                ring = _walk_side(c, p2, p1) + [Segment(CUT)]
        float_circles, float_cones = _side_floats(o, side)
        circles = [_merge_adjacent(ring)] + [o.circles[ci] for ci in float_circles]
        pieces.append(_piece(o, circles, float_cones))
    return pieces


def _indices_between(n, p1, p2):
    j = (p1 + 1) % n
    while j != p2:
        yield j
        j = (j + 1) % n


# ---------------------------------------------------------------------------
# relabelling helper (escalation checks)
# ---------------------------------------------------------------------------


def relabel_d1_as_d0(o: Orbifold2, a: ArcClass):
    """Relabel every D1 segment as D0, merging runs; remap the arc with it."""
    new_circles = []
    seg_map = {}
    for ci, c in enumerate(o.circles):
        relab = [Segment(D0 if s.kind == D1 else s.kind, s.corner) for s in c]
        keep = list(range(len(relab)))
        # merge adjacent equal kinds, tracking which original index survives
        changed = True
        while changed and len(relab) > 1:
            changed = False
            for i in range(len(relab)):
                j = (i + 1) % len(relab)
                if relab[j].corner is None and relab[i].kind == relab[j].kind:
                    if i < j:
                        relab = relab[:i] + [relab[i]] + relab[j + 1 :]
                        merged_into = keep[i]
                        keep = keep[:j] + keep[j + 1 :]
                    else:
                        relab = [relab[i]] + relab[1:i]
                        merged_into = keep[i]
                        keep = keep[1:i] + [keep[i]]
                    changed = True
                    break
        index_of = {orig: pos for pos, orig in enumerate(keep)}
        for si in range(len(c)):
            # map each original segment to the surviving merged position
            pos = None
            probe = si
            for _ in range(len(c)):
                if probe in index_of:
                    pos = index_of[probe]
                    break
                probe = (probe - 1) % len(c)
            seg_map[(ci, si)] = (ci, pos)
        new_circles.append(tuple(relab))
    o2 = Orbifold2(o.orientable, o.genus, o.cone_points, tuple(new_circles))

    endpoints = tuple(sorted(seg_map[e] for e in a.endpoints))
    fold = seg_map[a.fold] if a.fold is not None else None
    sep = None
    if a.separation is not None:
        sides = []
        for side in a.separation:
            out = set()
            for x in side:
                if x[0] == "seg":
                    tgt = seg_map[(x[1], x[2])]
                    if tgt in endpoints or tgt == fold:
                        continue  # merged into an endpoint segment
                    out.add(("seg",) + tgt)
                elif x[0] == "corner":
                    out.add(("corner",) + seg_map[(x[1], x[2])])
                else:
                    out.add(x)
            sides.append(frozenset(out))
        sep = frozenset(sides)
    return o2, ArcClass(a.twisted, endpoints, fold, a.fold_cone, sep)
