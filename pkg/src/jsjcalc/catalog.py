"""The machine-readable catalog of small orbifold configurations.

Each entry records one (orbifold, boundary partition, isolated arc)
configuration, possibly parameterized by cone orders or corner labels.
Entry ids follow the usual figure lettering: the F1x entries are the ten
chi = 0 configurations, F2x the eight chi < 0 orbifolds (bare, no
partition), F3x the six chi < 0 configurations with empty decomposition
boundary and F4x the seven with nonempty one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .arcs import ArcClass
from .orbifold import (
    D0,
    D1,
    MIRROR,
    Orbifold2,
    Segment,
    euler_char,
    is_mirror_free,
    reflect_circle,
    require_valid,
    validate,
)

COUNT_NOTE = (
    "Configuration count: the classical prose count for isolated-arc "
    "configurations with negative Euler characteristic is fourteen; this "
    "catalog encodes the thirteen figure configurations (six with the "
    "decomposition-edge part of the boundary empty, seven with it nonempty) "
    "and documents the discrepancy here instead of inventing a fourteenth "
    "entry."
)


# template circles are tuples of (kind, label); labels may be None, int or a
# parameter name.  Template cones are ints or parameter names.


@dataclass(frozen=True)
class ArcSpec:
    twisted: bool
    endpoints: tuple  # ((tci, tsi), ...) against template indexing
    fold: Optional[tuple] = None
    side_a: tuple = ()
    side_b: tuple = ()
    nonseparating: bool = False


@dataclass
class CatalogEntry:
    figure_id: str
    orientable: bool
    genus: int
    cones: tuple
    circles: tuple  # template circles
    defaults: dict
    arc: Optional[ArcSpec]
    requires_nonVPC_ambient: bool = False
    ns_omission: bool = False
    constraint: Optional[Callable[[dict], bool]] = None
    orbifold: Orbifold2 = field(init=False)
    isolated_arc: Optional[ArcClass] = field(init=False)

    def __post_init__(self):
        self.orbifold = self.instantiate(self.defaults)
        self.isolated_arc = self.build_arc(identity_maps(self)) if self.arc else None

    @property
    def dim3_legal(self) -> bool:
        return is_mirror_free(self.orbifold)

    def chi(self) -> Fraction:
        return euler_char(self.orbifold)

    def instantiate(self, binding: dict) -> Orbifold2:
        def val(x):
            return binding[x] if isinstance(x, str) else x

        circles = tuple(
            tuple(Segment(k, val(lb) if lb is not None else None) for k, lb in tc)
            for tc in self.circles
        )
        cones = tuple(val(c) for c in self.cones)
        o = Orbifold2(self.orientable, self.genus, cones, circles)
        require_valid(o)
        return o

    def build_arc(self, maps) -> Optional[ArcClass]:
        if self.arc is None:
            return None
        seg_map, cone_map = maps
        spec = self.arc
        endpoints = tuple(sorted(seg_map[e] for e in spec.endpoints))
        fold = seg_map[spec.fold] if spec.fold is not None else None
        sep = None
        if not spec.nonseparating:
            sides = []
            for raw in (spec.side_a, spec.side_b):
                side = set()
                for obj in raw:
                    if obj[0] == "cone":
                        side.add(("cone", cone_map[obj[1]]))
                    elif obj[0] == "circle":
                        side.add(("circle", seg_map[(obj[1], 0)][0]))
                    else:
                        side.add((obj[0],) + seg_map[(obj[1], obj[2])])
                sides.append(frozenset(side))
            sep = frozenset(sides)
        return ArcClass(spec.twisted, endpoints, fold, None, sep)


def identity_maps(entry: CatalogEntry):
    seg_map = {}
    for tci, tc in enumerate(entry.circles):
        for tsi in range(len(tc)):
            seg_map[(tci, tsi)] = (tci, tsi)
    # template cones, instantiated with defaults, may reorder under sorting
    def val(x):
        return entry.defaults[x] if isinstance(x, str) else x

    orders = [val(c) for c in entry.cones]
    order_pos = sorted(range(len(orders)), key=lambda i: orders[i])
    cone_map = {}
    for new_idx, tpl_idx in enumerate(order_pos):
        cone_map[tpl_idx] = new_idx
    return seg_map, cone_map


# ---------------------------------------------------------------------------
# matching
# ---------------------------------------------------------------------------


def _unify_label(tl, ol, binding) -> bool:
    if tl is None or ol is None:
        return tl is None and ol is None
    if isinstance(tl, int):
        return tl == ol
    if ol < 2:
        return False
    if tl in binding:
        return binding[tl] == ol
    binding[tl] = ol
    return True


def _circle_presentations(c):
    """(presentation, index_map) pairs for all dihedral views of circle c."""
    n = len(c)
    out = []
    for r in range(n):
        pres = tuple((c[(j + r) % n].kind, c[(j + r) % n].corner) for j in range(n))
        out.append((pres, {j: (j + r) % n for j in range(n)}))
    refl = reflect_circle(c)
    for r in range(n):
        pres = tuple(
            (refl[(j + r) % n].kind, refl[(j + r) % n].corner) for j in range(n)
        )
        out.append((pres, {j: (n - 1 - ((j + r) % n)) % n for j in range(n)}))
    return out


def _match_circle(tc, c, binding):
    """Yield (index_map template->circle, binding) for each unification."""
    if len(tc) != len(c):
        return
    for pres, idx in _circle_presentations(c):
        b = dict(binding)
        ok = True
        for j, (kind, label) in enumerate(pres):
            tk, tl = tc[j]
            if tk != kind or not _unify_label(tl, label, b):
                ok = False
                break
        if ok:
            yield idx, b


def match_entry(entry: CatalogEntry, o: Orbifold2):
    """Match o against the entry family; returns (seg_map, cone_map) or None."""
    if validate(o):
        return None
    if (o.orientable, o.genus) != (entry.orientable, entry.genus):
        return None
    if len(o.circles) != len(entry.circles) or len(o.cone_points) != len(entry.cones):
        return None

    def try_cones(binding):
        for perm in itertools.permutations(range(len(o.cone_points))):
            b = dict(binding)
            ok = True
            for tpl_idx, o_idx in enumerate(perm):
                if not _unify_label(entry.cones[tpl_idx], o.cone_points[o_idx], b):
                    ok = False
                    break
            if ok:
                yield {t: p for t, p in enumerate(perm)}, b

    def rec(ci, used, binding, maps):
        if ci == len(entry.circles):
            for cone_map, b in try_cones(binding):
                if entry.constraint is None or entry.constraint(b):
                    yield dict(maps), cone_map
            return
        for oci in range(len(o.circles)):
            if oci in used:
                continue
            for idx, b in _match_circle(entry.circles[ci], o.circles[oci], binding):
                maps2 = dict(maps)
                for tsi, osi in idx.items():
                    maps2[(ci, tsi)] = (oci, osi)
                yield from rec(ci + 1, used | {oci}, b, maps2)

    for seg_map, cone_map in rec(0, set(), {}, {}):
        return seg_map, cone_map
    return None


# ---------------------------------------------------------------------------
# the entries
# ---------------------------------------------------------------------------


def _mk(kinds):
    return tuple((k, None) if isinstance(k, str) else k for k in kinds)


def _chi_negative(entry):
    def check(binding):
        return euler_char(entry.instantiate(binding)) < 0

    return check


_CHI_ZERO = []
_CHI_NEG_CONFIGS = []
_CHI_NEG_ORBIFOLDS = []


def _entry(store, **kw):
    e = CatalogEntry(**kw)
    if kw.get("constraint") == "chi<0":
        e.constraint = _chi_negative(e)
    store.append(e)
    return e


def _build_catalog():
    # ---- chi = 0 configurations -------------------------------------------
    _entry(
        _CHI_ZERO,
        figure_id="F1a",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0]), _mk([D0, D1])),
        defaults={},
        arc=ArcSpec(False, ((0, 0), (1, 0)), nonseparating=True),
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1b",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([MIRROR, D1, D0, MIRROR, D0]),),
        defaults={},
        arc=ArcSpec(
            False,
            ((0, 2), (0, 4)),
            side_a=(("seg", 0, 3),),
            side_b=(("seg", 0, 0), ("seg", 0, 1)),
        ),
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1c",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([MIRROR, D1, D0, D1, MIRROR, D0]),),
        defaults={},
        arc=ArcSpec(
            False,
            ((0, 2), (0, 5)),
            side_a=(("seg", 0, 3), ("seg", 0, 4)),
            side_b=(("seg", 0, 0), ("seg", 0, 1)),
        ),
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1d",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0]), _mk([D0])),
        defaults={},
        arc=ArcSpec(False, ((0, 0), (1, 0)), nonseparating=True),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1e",
        orientable=True,
        genus=0,
        cones=(2, 2),
        circles=(_mk([D0]),),
        defaults={},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("cone", 0),), side_b=(("cone", 1),)
        ),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1f",
        orientable=False,
        genus=1,
        cones=(),
        circles=(_mk([D0]),),
        defaults={},
        arc=ArcSpec(False, ((0, 0), (0, 0)), nonseparating=True),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1g",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([MIRROR, D0, MIRROR, D0]),),
        defaults={},
        arc=ArcSpec(
            False, ((0, 1), (0, 3)), side_a=(("seg", 0, 0),), side_b=(("seg", 0, 2),)
        ),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1h",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0]), _mk([MIRROR])),
        defaults={},
        arc=ArcSpec(True, ((0, 0),), fold=(1, 0), nonseparating=True),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1i",
        orientable=True,
        genus=0,
        cones=(2,),
        circles=(_mk([D0, MIRROR]),),
        defaults={},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("cone", 0),), side_b=(("seg", 0, 1),)
        ),
        requires_nonVPC_ambient=True,
    )
    _entry(
        _CHI_ZERO,
        figure_id="F1j",
        orientable=True,
        genus=0,
        cones=(),
        circles=((("" + D0, None), (MIRROR, None), (MIRROR, 2), (MIRROR, 2)),),
        defaults={},
        arc=ArcSpec(
            True,
            ((0, 0),),
            fold=(0, 2),
            side_a=(("seg", 0, 1), ("corner", 0, 2)),
            side_b=(("seg", 0, 3), ("corner", 0, 3)),
        ),
        requires_nonVPC_ambient=True,
    )

    # ---- chi < 0 orbifolds (bare) ------------------------------------------
    for fid, orientable, cones, circles, defaults in [
        ("F2a", True, ("p", "q"), (_mk([D0]),), {"p": 2, "q": 3}),
        ("F2b", True, ("p",), (_mk([D0]), _mk([D0])), {"p": 2}),
        ("F2c", True, (), (_mk([D0]), _mk([D0]), _mk([D0])), {}),
        ("F2d", True, ("p",), (_mk([D0, MIRROR]),), {"p": 3}),
        ("F2e", True, (), (_mk([D0, MIRROR]), _mk([D0])), {}),
        (
            "F2f",
            True,
            (),
            (((D0, None), (MIRROR, None), (MIRROR, "P"), (MIRROR, "Q")),),
            {"P": 4, "Q": 6},
        ),
        (
            "F2g",
            True,
            (),
            (((MIRROR, None), (D0, None), (MIRROR, None), (MIRROR, "P"), (D0, None)),),
            {"P": 4},
        ),
        (
            "F2h",
            True,
            (),
            (_mk([D0, MIRROR, D0, MIRROR, D0, MIRROR]),),
            {},
        ),
    ]:
        e = CatalogEntry(
            figure_id=fid,
            orientable=orientable,
            genus=0,
            cones=cones,
            circles=circles,
            defaults=defaults,
            arc=None,
        )
        e.constraint = _chi_negative(e)
        _CHI_NEG_ORBIFOLDS.append(e)

    # ---- chi < 0 configurations, empty decomposition boundary ---------------
    def neg(**kw):
        e = CatalogEntry(**kw)
        e.constraint = _chi_negative(e)
        _CHI_NEG_CONFIGS.append(e)
        return e

    neg(
        figure_id="F3a",
        orientable=True,
        genus=0,
        cones=("p", "q"),
        circles=(_mk([D0]),),
        defaults={"p": 2, "q": 3},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("cone", 0),), side_b=(("cone", 1),)
        ),
    )
    neg(
        figure_id="F3b",
        orientable=True,
        genus=0,
        cones=("p",),
        circles=(_mk([D0]), _mk([D0])),
        defaults={"p": 2},
        arc=ArcSpec(False, ((0, 0), (1, 0)), nonseparating=True),
    )
    neg(
        figure_id="F3c",
        orientable=True,
        genus=0,
        cones=("p",),
        circles=(_mk([D0, MIRROR]),),
        defaults={"p": 3},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("cone", 0),), side_b=(("seg", 0, 1),)
        ),
    )
    neg(
        figure_id="F3d",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0, MIRROR]), _mk([D0])),
        defaults={},
        arc=ArcSpec(False, ((0, 0), (1, 0)), nonseparating=True),
    )
    neg(
        figure_id="F3e",
        orientable=True,
        genus=0,
        cones=(),
        circles=(((D0, None), (MIRROR, None), (MIRROR, "P"), (MIRROR, "Q")),),
        defaults={"P": 4, "Q": 6},
        arc=ArcSpec(
            True,
            ((0, 0),),
            fold=(0, 2),
            side_a=(("seg", 0, 1), ("corner", 0, 2)),
            side_b=(("seg", 0, 3), ("corner", 0, 3)),
        ),
    )
    neg(
        figure_id="F3f",
        orientable=True,
        genus=0,
        cones=(),
        circles=(
            ((MIRROR, None), (D0, None), (MIRROR, None), (MIRROR, "P"), (D0, None)),
        ),
        defaults={"P": 4},
        arc=ArcSpec(
            False,
            ((0, 1), (0, 4)),
            side_a=(("seg", 0, 0),),
            side_b=(("seg", 0, 2), ("corner", 0, 3), ("seg", 0, 3)),
        ),
    )

    # ---- chi < 0 configurations, nonempty decomposition boundary ------------
    neg(
        figure_id="F4a",
        orientable=True,
        genus=0,
        cones=("p",),
        circles=(_mk([D0]), _mk([D1])),
        defaults={"p": 2},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("cone", 0),), side_b=(("circle", 1),)
        ),
    )
    neg(
        figure_id="F4b",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0]), _mk([D0]), _mk([D1])),
        defaults={},
        arc=ArcSpec(False, ((0, 0), (1, 0)), nonseparating=True),
        ns_omission=True,
    )
    neg(
        figure_id="F4c",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0]), _mk([D1]), _mk([D1])),
        defaults={},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("circle", 1),), side_b=(("circle", 2),)
        ),
    )
    neg(
        figure_id="F4d",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D0, MIRROR]), _mk([D1])),
        defaults={},
        arc=ArcSpec(
            False, ((0, 0), (0, 0)), side_a=(("circle", 1),), side_b=(("seg", 0, 1),)
        ),
    )
    neg(
        figure_id="F4e",
        orientable=True,
        genus=0,
        cones=(),
        circles=(
            ((MIRROR, None), (D0, None), (MIRROR, None), (MIRROR, "P"), (D1, None)),
        ),
        defaults={"P": 4},
        arc=ArcSpec(
            True,
            ((0, 1),),
            fold=(0, 3),
            side_a=(("seg", 0, 2), ("corner", 0, 3)),
            side_b=(("seg", 0, 4), ("seg", 0, 0)),
        ),
    )
    neg(
        figure_id="F4f",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D1, MIRROR, D0, MIRROR, D0, MIRROR]),),
        defaults={},
        arc=ArcSpec(
            False,
            ((0, 2), (0, 4)),
            side_a=(("seg", 0, 3),),
            side_b=(("seg", 0, 5), ("seg", 0, 0), ("seg", 0, 1)),
        ),
    )
    neg(
        figure_id="F4g",
        orientable=True,
        genus=0,
        cones=(),
        circles=(_mk([D1, MIRROR, D1, MIRROR, D0, MIRROR]),),
        defaults={},
        arc=ArcSpec(
            True,
            ((0, 4),),
            fold=(0, 1),
            side_a=(("seg", 0, 5), ("seg", 0, 0)),
            side_b=(("seg", 0, 2), ("seg", 0, 3)),
        ),
    )


_build_catalog()


# ---------------------------------------------------------------------------
# public catalog operations
# ---------------------------------------------------------------------------


def catalog_chi_zero():
    return list(_CHI_ZERO)


def catalog_chi_neg_orbifolds():
    return [e.orbifold for e in _CHI_NEG_ORBIFOLDS]


def catalog_chi_neg_configs():
    return list(_CHI_NEG_CONFIGS)


def catalog_dim3():
    out = []
    for e in _CHI_ZERO + _CHI_NEG_CONFIGS:
        if e.dim3_legal and not e.requires_nonVPC_ambient:
            out.append(e)
    return out


def all_entries():
    return _CHI_ZERO + _CHI_NEG_CONFIGS


def entry_by_id(figure_id: str) -> Optional[CatalogEntry]:
    for e in _CHI_ZERO + _CHI_NEG_CONFIGS + _CHI_NEG_ORBIFOLDS:
        if e.figure_id == figure_id:
            return e
    return None


def catalog_match(o: Orbifold2):
    """Entry whose family contains o, with its arc re-indexed to o."""
    if validate(o):
        return None
    for e in all_entries():
        maps = match_entry(e, o)
        if maps is not None:
            return e, e.build_arc(maps)
    return None


def catalog_export() -> dict:
    from .orbifold import to_dict
    from .serialize import arc_to_dict

    entries = {}
    for e in all_entries():
        entries[e.figure_id] = {
            "chi": str(e.chi()),
            "orbifold": to_dict(e.orbifold),
            "isolated_arc": arc_to_dict(e.isolated_arc),
            "parameters": dict(sorted(e.defaults.items())),
            "requires_nonVPC_ambient": e.requires_nonVPC_ambient,
            "dim3_legal": e.dim3_legal,
            "ns_omission": e.ns_omission,
        }
    bare = {}
    for e in _CHI_NEG_ORBIFOLDS:
        bare[e.figure_id] = {
            "chi": str(e.chi()),
            "orbifold": to_dict(e.orbifold),
            "parameters": dict(sorted(e.defaults.items())),
        }
    return {
        "count_note": COUNT_NOTE,
        "counts": {
            "chi_zero_configurations": len(_CHI_ZERO),
            "chi_negative_orbifolds": len(_CHI_NEG_ORBIFOLDS),
            "chi_negative_configurations": len(_CHI_NEG_CONFIGS),
            "dimension_3_configurations": len(catalog_dim3()),
        },
        "configurations": entries,
        "chi_negative_orbifolds": bare,
    }
