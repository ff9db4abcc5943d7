"""Canonical JSON serialization for orbifolds, arcs and graphs of groups.

Emission is deterministic (sorted keys, fixed separators, trailing newline)
so that identical values always produce byte-identical documents.
"""

from __future__ import annotations

import json

from .arcs import ArcClass
from .orbifold import Orbifold2, from_dict as orbifold_from_dict, to_dict as orbifold_to_dict


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _side_to_list(side):
    return sorted([list(x) for x in side])


def arc_to_dict(a):
    if a is None:
        return None
    d = {
        "twisted": a.twisted,
        "endpoints": [list(e) for e in a.endpoints],
    }
    if a.fold is not None:
        d["fold"] = list(a.fold)
    if a.fold_cone is not None:
        d["fold_cone"] = a.fold_cone
    if a.separation is None:
        d["separation"] = None
    else:
        d["separation"] = sorted(
            (_side_to_list(side) for side in a.separation), key=str
        )
    return d


def arc_from_dict(d) -> ArcClass:
    sep = None
    if d.get("separation") is not None:
        sep = frozenset(
            frozenset(tuple(x) for x in side) for side in d["separation"]
        )
    return ArcClass(
        bool(d["twisted"]),
        tuple(tuple(e) for e in d["endpoints"]),
        tuple(d["fold"]) if d.get("fold") is not None else None,
        d.get("fold_cone"),
        sep,
    )


def orbifold_dumps(o: Orbifold2) -> str:
    return dumps(orbifold_to_dict(o))


def orbifold_loads(text: str) -> Orbifold2:
    return orbifold_from_dict(json.loads(text))
