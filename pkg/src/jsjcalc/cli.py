"""Command line front end.

Subcommands read structured JSON documents from stdin (or a path) and write
deterministic output to stdout, so they compose in shell pipelines:

    jsjcalc fixture scott --n 1 | jsjcalc gog-classify

Exit codes: 0 success, 1 validation violations (printed), 2 parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import calculus, catalog, fixtures, gog
from .orbifold import Orbifold2, OrbifoldError, from_dict as orb_from_dict, to_dict as orb_to_dict
from .orbifold import validate as validate_orbifold
from .serialize import arc_to_dict, dumps


class ParseFailure(Exception):
    pass


class ValidationFailure(Exception):
    pass


def _read_input(args) -> str:
    if getattr(args, "input", None) and args.input != "-":
        with open(args.input, "r", encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


def _write_output(args, text: str):
    if getattr(args, "output", None) and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_orbifold(args) -> Orbifold2:
    try:
        o = orb_from_dict(json.loads(_read_input(args)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(str(exc))
    bad = validate_orbifold(o)
    if bad:
        raise ValidationFailure("\n".join(bad))
    return o


def _load_graph(args) -> gog.GraphOfGroups:
    try:
        g = gog.graph_from_dict(json.loads(_read_input(args)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(str(exc))
    bad = gog.validate_graph(g)
    if bad:
        raise ValidationFailure("\n".join(bad))
    return g


def cmd_orb_chi(args):
    o = _load_orbifold(args)
    from .orbifold import euler_char

    _write_output(args, str(euler_char(o)) + "\n")


def cmd_orb_arcs(args):
    o = _load_orbifold(args)
    arcs = calculus.essential_arcs_oracle(o)
    _write_output(args, dumps([arc_to_dict(a) for a in arcs]))


def cmd_orb_isolated(args):
    o = _load_orbifold(args)
    arcs = calculus.isolated_arcs(o)
    _write_output(args, dumps([arc_to_dict(a) for a in arcs]))


def cmd_orb_cut(args):
    o = _load_orbifold(args)
    arcs = calculus.isolated_arcs(o)
    if not arcs:
        raise ValidationFailure("orbifold has no isolated essential arc to cut along")
    pieces = calculus.cut_along_arc(o, arcs[0])
    _write_output(args, dumps([orb_to_dict(p) for p in pieces]))


def cmd_catalog(args):
    export = catalog.catalog_export()
    if args.catalog_id:
        e = catalog.entry_by_id(args.catalog_id)
        if e is None:
            raise ValidationFailure(f"unknown catalog id {args.catalog_id}")
        pool = dict(export["configurations"])
        pool.update(export["chi_negative_orbifolds"])
        _write_output(args, dumps({args.catalog_id: pool[args.catalog_id]}))
        return
    if args.dim == 3:
        ids = [e.figure_id for e in catalog.catalog_dim3()]
        doc = {
            "count_note": export["count_note"],
            "configurations": {
                k: v for k, v in export["configurations"].items() if k in ids
            },
        }
        _write_output(args, dumps(doc))
        return
    if args.chi == "0":
        ids = [e.figure_id for e in catalog.catalog_chi_zero()]
        doc = {k: v for k, v in export["configurations"].items() if k in ids}
        _write_output(args, dumps(doc))
        return
    if args.chi == "neg":
        _write_output(args, dumps(export["chi_negative_orbifolds"]))
        return
    _write_output(args, dumps(export))


def cmd_gog_validate(args):
    try:
        g = gog.graph_from_dict(json.loads(_read_input(args)))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(str(exc))
    bad = gog.validate_graph(g)
    if bad:
        raise ValidationFailure("\n".join(bad))
    _write_output(args, "ok\n")


def cmd_gog_complete(args):
    g = _load_graph(args)
    gc, _, _ = gog.complete(g)
    _write_output(args, dumps(gog.graph_to_dict(gc)))


def cmd_gog_classify(args):
    g = _load_graph(args)
    labels = gog.classify_edges(g)
    lines = [f"edge {eid}: {labels[eid]}" for eid in sorted(labels)]
    specials = [eid for eid in labels if labels[eid] == gog.SPECIAL_CANONICAL_TORUS]
    lines.append(f"special splittings: {_count_splittings(g, specials)}")
    _write_output(args, "\n".join(lines) + "\n")


def _count_splittings(g, eids):
    """Special edges sharing an isolated vertex carry a single splitting."""
    remaining = set(eids)
    count = 0
    while remaining:
        eid = min(remaining)
        remaining.discard(eid)
        stack = [eid]
        while stack:
            cur = g.edge(stack.pop())
            for other in list(remaining):
                oe = g.edge(other)
                shared = set(cur.ends) & set(oe.ends)
                if any(
                    g.vertex(x).part == gog.V1 and gog.is_isolated_vertex(g, x)
                    for x in shared
                ):
                    remaining.discard(other)
                    stack.append(other)
        count += 1
    return count


def cmd_gog_collapse(args):
    g = _load_graph(args)
    out = gog.collapse_special_intervals(g)
    _write_output(args, dumps(gog.graph_to_dict(out)))


def cmd_gog_refine(args):
    g = _load_graph(args)
    out = gog.waldhausen_refine(g)
    _write_output(args, dumps(gog.graph_to_dict(out)))


def cmd_gog_dot(args):
    g = _load_graph(args)
    _write_output(args, gog.dot_export(g))


def cmd_fixture(args):
    name = args.name or args.fixture
    if not name:
        raise ParseFailure("fixture name required")
    try:
        g = fixtures.build_fixture(name, args.n)
    except ValueError as exc:
        raise ParseFailure(str(exc))
    if args.format == "dot":
        _write_output(args, gog.dot_export(g))
    else:
        _write_output(args, dumps(gog.graph_to_dict(g)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jsjcalc",
        description="decomposition calculus for small orbifolds and graphs of groups",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def add(verb, fn, needs_input=True):
        p = sub.add_parser(verb)
        if needs_input:
            p.add_argument("input", nargs="?", default="-", help="input path or -")
        p.add_argument("--output", default="-", help="output path or -")
        p.add_argument("--n", type=int, default=1, help="ambient dimension")
        p.add_argument("--format", choices=("text", "dot"), default="text")
        p.set_defaults(func=fn)
        return p

    add("orb-chi", cmd_orb_chi)
    add("orb-arcs", cmd_orb_arcs)
    add("orb-isolated", cmd_orb_isolated)
    add("orb-cut", cmd_orb_cut)

    p = add("catalog", cmd_catalog, needs_input=False)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--chi", choices=("0", "neg"), default=None)
    p.add_argument("--catalog-id", dest="catalog_id", default=None)

    add("gog-validate", cmd_gog_validate)
    add("gog-complete", cmd_gog_complete)
    add("gog-classify", cmd_gog_classify)
    add("gog-collapse", cmd_gog_collapse)
    add("gog-refine", cmd_gog_refine)
    add("gog-dot", cmd_gog_dot)

    p = add("fixture", cmd_fixture, needs_input=False)
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--fixture", default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except ValidationFailure as exc:
        sys.stderr.write(str(exc) + "\n")
        return 1
    except (OrbifoldError, gog.GraphError) as exc:
        sys.stderr.write(str(exc) + "\n")
        return 1
    except ParseFailure as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
