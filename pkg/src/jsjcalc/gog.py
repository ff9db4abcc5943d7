"""Bipartite graphs of groups and their decomposition transformations.

Vertices are two-coloured (V0/V1) and carry a structural kind; groups are
opaque commensurability-class marks with a length tag (n or n+1, relative
to the ambient dimension parameter) and an optional index-two containment
link.  Edges are dual to annuli (length n) or tori (length n+1).

Transformations: reduction, completion, detection and collapse of special
canonical torus edges, exceptional-annulus detection and the refinement
obtained by splitting exceptional vertices along their isolated arcs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

from . import calculus
from .orbifold import (
    CUT,
    D1,
    FINITE,
    NOT_VC,
    VC,
    Orbifold2,
    Segment,
    _merge_adjacent,
    euler_char,
    is_mirror_free,
    pi1_class,
    validate as validate_orbifold,
)

V0 = "V0"
V1 = "V1"

ISOLATED_V0 = "isolated-v0"
I_BUNDLE = "i-bundle"
INTERIOR_SEIFERT = "interior-seifert"
PERIPHERAL_SEIFERT = "peripheral-seifert"
TORUS_TYPE_1 = "torus-type-1"
TORUS_TYPE_2 = "torus-type-2"
SOLID_TORUS = "solid-torus"
MERGED = "merged"
ORDINARY_V1 = "ordinary-v1"
SPECIAL_SEIFERT = "special-seifert"
SPECIAL_SOLID_TORUS = "special-solid-torus"
ISOLATED_V1 = "isolated-v1"

V0_KINDS = (
    ISOLATED_V0,
    I_BUNDLE,
    INTERIOR_SEIFERT,
    PERIPHERAL_SEIFERT,
    TORUS_TYPE_1,
    TORUS_TYPE_2,
    SOLID_TORUS,
    MERGED,
)
V1_KINDS = (ORDINARY_V1, SPECIAL_SEIFERT, SPECIAL_SOLID_TORUS, ISOLATED_V1)
COMMENSURISER_KINDS = (PERIPHERAL_SEIFERT, TORUS_TYPE_1, TORUS_TYPE_2, SOLID_TORUS)
FIBRED_KINDS = COMMENSURISER_KINDS + (INTERIOR_SEIFERT,)

ANNULUS = "annulus"
TORUS = "torus"

CANONICAL = "canonical"
SPECIAL_CANONICAL_TORUS = "special-canonical-torus"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class GroupMark:
    class_id: str
    length: str  # "n" or "n+1"
    index2_over: Optional[str] = None


@dataclass(frozen=True)
class Vertex:
    id: int
    part: str
    kind: str
    group: Optional[GroupMark] = None
    fibre: Optional[GroupMark] = None
    base_orbifold: Optional[Orbifold2] = None
    members: tuple = ()  # constituents of a merged vertex: (id, kind) pairs


@dataclass(frozen=True)
class Edge:
    id: int
    ends: tuple  # (vertex id, vertex id)
    kind: str  # "annulus" | "torus"
    group: GroupMark
    twisted: bool = False


@dataclass(frozen=True)
class GraphOfGroups:
    n: int
    vertices: tuple
    edges: tuple
    completed: bool = False

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"no vertex {vid}")

    def edge(self, eid: int) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"no edge {eid}")

    def incident(self, vid: int):
        return [e for e in self.edges if vid in e.ends]

    def valence(self, vid: int) -> int:
        return sum(e.ends.count(vid) for e in self.edges)

    def with_parts(self, vertices=None, edges=None, completed=None):
        return GraphOfGroups(
            self.n,
            tuple(sorted(vertices if vertices is not None else self.vertices, key=lambda v: v.id)),
            tuple(sorted(edges if edges is not None else self.edges, key=lambda e: e.id)),
            self.completed if completed is None else completed,
        )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate_graph(g: GraphOfGroups):
    bad = []
    ids = [v.id for v in g.vertices]
    if len(set(ids)) != len(ids):
        bad.append("duplicate vertex ids")
    eids = [e.id for e in g.edges]
    if len(set(eids)) != len(eids):
        bad.append("duplicate edge ids")
    vmap = {v.id: v for v in g.vertices}

    for v in g.vertices:
        # completion re-labels special V1 vertices as V0 keeping their kind
        v0_ok = V0_KINDS + (SPECIAL_SEIFERT, SPECIAL_SOLID_TORUS)
        if v.part == V0 and v.kind not in v0_ok:
            bad.append(f"vertex {v.id}: kind {v.kind} is not a V0 kind")
        elif v.part == V1 and v.kind not in V1_KINDS:
            bad.append(f"vertex {v.id}: kind {v.kind} is not a V1 kind")
        elif v.part not in (V0, V1):
            bad.append(f"vertex {v.id}: unknown part {v.part}")
        if v.kind in (ISOLATED_V0, ISOLATED_V1, SPECIAL_SEIFERT, SPECIAL_SOLID_TORUS):
            if v.group is None:
                bad.append(f"vertex {v.id}: kind {v.kind} requires a group mark")
        if v.kind in FIBRED_KINDS:
            if v.fibre is None:
                bad.append(f"vertex {v.id}: kind {v.kind} requires a fibre mark")
            elif v.fibre.length != "n":
                bad.append(f"vertex {v.id}: fibre mark must have length n")
        if v.kind in COMMENSURISER_KINDS:
            if v.base_orbifold is None:
                bad.append(f"vertex {v.id}: kind {v.kind} requires a base orbifold")
            else:
                errs = validate_orbifold(v.base_orbifold)
                if errs:
                    bad.append(f"vertex {v.id}: invalid base orbifold: {errs[0]}")
                else:
                    want = {
                        PERIPHERAL_SEIFERT: NOT_VC,
                        TORUS_TYPE_1: VC,
                        TORUS_TYPE_2: VC,
                        SOLID_TORUS: FINITE,
                    }[v.kind]
                    got = pi1_class(v.base_orbifold)
                    if got != want:
                        bad.append(
                            f"vertex {v.id}: base orbifold class {got}, kind wants {want}"
                        )
                    if g.n == 1 and not is_mirror_free(v.base_orbifold):
                        bad.append(f"vertex {v.id}: mirror in dimension 3")
        if v.kind == SPECIAL_SEIFERT:
            inc = g.incident(v.id)
            if len(inc) != 1 or inc[0].ends.count(v.id) != 1:
                bad.append(f"vertex {v.id}: special Seifert vertex needs exactly one edge")
            elif inc[0].kind != TORUS:
                bad.append(f"vertex {v.id}: special Seifert edge must be a torus")
            elif v.group is not None and inc[0].group.index2_over != v.group.class_id:
                bad.append(
                    f"vertex {v.id}: special Seifert edge group is not index 2 in the vertex group"
                )

    for e in g.edges:
        for vid in e.ends:
            if vid not in vmap:
                bad.append(f"edge {e.id}: missing endpoint {vid}")
        if e.kind == TORUS and e.group.length != "n+1":
            bad.append(f"edge {e.id}: torus edge group must have length n+1")
        if e.kind == ANNULUS and e.group.length != "n":
            bad.append(f"edge {e.id}: annulus edge group must have length n")
        if e.kind not in (ANNULUS, TORUS):
            bad.append(f"edge {e.id}: unknown kind {e.kind}")
        if e.twisted and e.kind != ANNULUS:
            bad.append(f"edge {e.id}: only annulus edges may be twisted")
        if e.twisted and g.n == 1:
            bad.append(f"edge {e.id}: twisted annulus in dimension 3")
        if all(vid in vmap for vid in e.ends):
            pu, pv = vmap[e.ends[0]].part, vmap[e.ends[1]].part
            if pu == pv:
                bad.append(f"edge {e.id}: joins two {pu} vertices (not bipartite)")

    if g.vertices and not bad:
        seen = {g.vertices[0].id}
        frontier = [g.vertices[0].id]
        while frontier:
            vid = frontier.pop()
            for e in g.incident(vid):
                for w in e.ends:
                    if w not in seen:
                        seen.add(w)
                        frontier.append(w)
        if len(seen) != len(g.vertices):
            bad.append("graph is not connected")
    return bad


def require_valid_graph(g: GraphOfGroups):
    bad = validate_graph(g)
    if bad:
        raise GraphError("; ".join(bad))


# ---------------------------------------------------------------------------
# isolated vertices and reduction
# ---------------------------------------------------------------------------


def is_isolated_vertex(g: GraphOfGroups, vid: int) -> bool:
    v = g.vertex(vid)
    if v.group is None:
        return False
    if g.valence(vid) != 2:
        return False
    return all(e.group.class_id == v.group.class_id for e in g.incident(vid))


def _is_two_vertex_loop(g: GraphOfGroups) -> bool:
    return (
        len(g.vertices) == 2
        and len(g.edges) == 2
        and all(set(e.ends) == {g.vertices[0].id, g.vertices[1].id} for e in g.edges)
    )


def reduce_graph(g: GraphOfGroups):
    """Collapse runs of adjacent isolated vertices; returns (g', vmap, emap)."""
    vertices = {v.id: v for v in g.vertices}
    edges = {e.id: e for e in g.edges}
    vmap = {vid: vid for vid in vertices}
    emap = {eid: eid for eid in edges}

    def resolve_v(vid):
        while vmap[vid] != vid:
            vid = vmap[vid]
        return vid

    def current():
        return GraphOfGroups(
            g.n, tuple(vertices.values()), tuple(edges.values()), g.completed
        )

    changed = True
    while changed:
        changed = False
        cur = current()
        if _is_two_vertex_loop(cur) and all(
            is_isolated_vertex(cur, v.id) for v in cur.vertices
        ):
            break
        # collapse an edge joining two isolated vertices (lowest edge id first)
        for eid in sorted(edges):
            e = edges[eid]
            u, w = e.ends
            if u == w:
                continue
            if is_isolated_vertex(cur, u) and is_isolated_vertex(cur, w):
                keep, drop = (u, w) if u < w else (w, u)
                del edges[eid]
                other = [x for x in edges.values() if drop in x.ends]
                for x in other:
                    ends = tuple(keep if vid == drop else vid for vid in x.ends)
                    edges[x.id] = replace(x, ends=ends)
                survivors = sorted(x.id for x in edges.values() if keep in x.ends)
                emap[eid] = survivors[0] if survivors else None
                del vertices[drop]
                vmap[drop] = keep
                changed = True
                break
        if changed:
            continue
        # fix an isolated vertex joined to a same-part vertex: flip its part
        # when both neighbours share it, dissolve it when they disagree
        cur = current()
        for v in sorted(vertices.values(), key=lambda v: v.id):
            if not is_isolated_vertex(cur, v.id):
                continue
            inc = sorted(cur.incident(v.id), key=lambda e: e.id)
            if len(inc) != 2:
                continue
            nbrs = [e.ends[0] if e.ends[1] == v.id else e.ends[1] for e in inc]
            same = [n for n in nbrs if n != v.id and vertices[n].part == v.part]
            if not same:
                continue
            parts = {vertices[n].part for n in nbrs}
            if len(parts) == 1:
                flip = V0 if v.part == V1 else V1
                kind = ISOLATED_V0 if flip == V0 else ISOLATED_V1
                vertices[v.id] = replace(v, part=flip, kind=kind)
            else:
                e1, e2 = inc
                new = replace(e1, ends=(nbrs[0], nbrs[1]))
                del edges[e1.id]
                del edges[e2.id]
                edges[new.id] = new
                emap[e2.id] = new.id
                del vertices[v.id]
                vmap[v.id] = nbrs[0]
            changed = True
            break

    final_v = {vid: resolve_v(vid) for vid in vmap}

    def resolve_e(eid):
        seen = set()
        while emap.get(eid) is not None and emap[eid] != eid and eid not in seen:
            seen.add(eid)
            eid = emap[eid]
        return eid if eid in edges else None

    final_e = {eid: resolve_e(eid) for eid in emap}
    return current().with_parts(), final_v, final_e


def reduce(g: GraphOfGroups) -> GraphOfGroups:
    return reduce_graph(g)[0]


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------


def complete(g: GraphOfGroups):
    """Relabel special V1 vertices as V0 and restore bipartiteness.

    Returns (completed graph, vertex map, edge map); the edge map sends each
    original edge to the tuple of edges now carrying the same splitting.
    """
    if g.completed:
        raise GraphError("graph is already completed")
    require_valid_graph(g)
    vertices = {v.id: v for v in g.vertices}
    edges = {e.id: e for e in g.edges}
    for vid, v in vertices.items():
        if v.kind in (SPECIAL_SEIFERT, SPECIAL_SOLID_TORUS):
            vertices[vid] = replace(v, part=V0)

    next_vid = max(vertices) + 1 if vertices else 0
    next_eid = max(edges) + 1 if edges else 0
    halves = {}
    for eid in sorted(edges):
        e = edges[eid]
        u, w = e.ends
        if vertices[u].part == V0 and vertices[w].part == V0:
            mid = Vertex(next_vid, V1, ISOLATED_V1, group=e.group)
            vertices[next_vid] = mid
            next_vid += 1
            edges[eid] = replace(e, ends=(u, mid.id))
            second = Edge(next_eid, (mid.id, w), e.kind, e.group, e.twisted)
            edges[next_eid] = second
            halves[eid] = (eid, next_eid)
            next_eid += 1
        else:
            halves[eid] = (eid,)

    interim = GraphOfGroups(g.n, tuple(vertices.values()), tuple(edges.values()), True)
    reduced, vmap, emap = reduce_graph(interim)
    vertex_map = {v.id: vmap.get(v.id, v.id) for v in g.vertices}
    edge_map = {}
    for eid, hs in halves.items():
        out = []
        for h in hs:
            r = emap.get(h, h)
            if r is not None and r not in out:
                out.append(r)
        edge_map[eid] = tuple(out)
    require_valid_graph(reduced)
    return reduced, vertex_map, edge_map


# ---------------------------------------------------------------------------
# special canonical tori
# ---------------------------------------------------------------------------


def detect_special_canonical(gc: GraphOfGroups, eid: int) -> bool:
    if not gc.completed:
        raise GraphError("detection requires a completed graph")
    e = gc.edge(eid)
    if e.kind != TORUS:
        return False
    w = None
    for vid in e.ends:
        if gc.vertex(vid).part == V1:
            w = vid
    if w is None:
        return False
    if not is_isolated_vertex(gc, w):
        return False
    inc = gc.incident(w)
    nbrs = []
    for f in inc:
        for vid in f.ends:
            if vid != w:
                nbrs.append(vid)
    if len(nbrs) != 2:
        return False
    if nbrs[0] == nbrs[1]:
        # the two edges through w form a loop: the single neighbour must be
        # of peripheral Seifert type
        return gc.vertex(nbrs[0]).kind == PERIPHERAL_SEIFERT
    kinds = [gc.vertex(v).kind for v in nbrs]
    allowed = (PERIPHERAL_SEIFERT, TORUS_TYPE_2, SPECIAL_SEIFERT)
    if not all(k in allowed for k in kinds):
        return False
    if sum(1 for k in kinds if k == SPECIAL_SEIFERT) > 1:
        return False
    return True


def classify_edges(g: GraphOfGroups):
    """Label every edge canonical or special-canonical-torus."""
    require_valid_graph(g)
    if g.completed:
        return {e.id: (SPECIAL_CANONICAL_TORUS if detect_special_canonical(g, e.id) else CANONICAL) for e in g.edges}
    gc, _, emap = complete(g)
    out = {}
    for e in g.edges:
        mapped = emap.get(e.id, ())
        special = any(detect_special_canonical(gc, h) for h in mapped)
        out[e.id] = SPECIAL_CANONICAL_TORUS if special else CANONICAL
    return out


def parallel_edges_check(g: GraphOfGroups):
    """Check the allowed configurations of same-class torus edge pairs."""
    require_valid_graph(g)
    bad = []
    tori = [e for e in g.edges if e.kind == TORUS]
    for f, f2 in itertools.combinations(tori, 2):
        if f.group.class_id != f2.group.class_id:
            continue
        if _parallel_pair_ok(g, f, f2):
            continue
        bad.append(f"torus edges {f.id} and {f2.id} share a group class in an illegal pattern")
    return bad


def _parallel_pair_ok(g, f, f2) -> bool:
    shared = set(f.ends) & set(f2.ends)
    for w in shared:
        v = g.vertex(w)
        if is_isolated_vertex(g, w):
            return True  # separated by an isolated vertex
        if (
            v.part == V0
            and g.valence(w) == 2
            and v.group is not None
            and f.group.index2_over == v.group.class_id
        ):
            return True  # folded through an index-two vertex
    # both edges lie on a chain f, b, b2, f2 whose ends fold through two
    # isolated vertices into a central index-two vertex of valence 2
    for chain in _index_two_chains(g, f.group):
        if f.id in chain and f2.id in chain:
            return True
    return False


def _index_two_chains(g: GraphOfGroups, group: GroupMark):
    """Edge-id sets of chains f-b-b2-f2 centred on an index-two V0 vertex."""
    if group.index2_over is None:
        return
    for w in g.vertices:
        if w.part != V0 or w.group is None:
            continue
        if w.group.class_id != group.index2_over or g.valence(w.id) != 2:
            continue
        inc = sorted(g.incident(w.id), key=lambda e: e.id)
        if len(inc) != 2:
            continue
        if any(e.group.class_id != group.class_id for e in inc):
            continue
        chain = {e.id for e in inc}
        for b in inc:
            far = b.ends[0] if b.ends[1] == w.id else b.ends[1]
            v = g.vertex(far)
            if v.part == V1 and is_isolated_vertex(g, far):
                for e in g.incident(far):
                    if e.group.class_id == group.class_id:
                        chain.add(e.id)
        yield chain


# ---------------------------------------------------------------------------
# interval collapse
# ---------------------------------------------------------------------------


def collapse_special_intervals(g: GraphOfGroups) -> GraphOfGroups:
    """Collapse each special-canonical-torus interval to a merged vertex."""
    require_valid_graph(g)
    gc = g if g.completed else complete(g)[0]
    labels = {e.id: detect_special_canonical(gc, e.id) for e in gc.edges}
    special = [e for e in gc.edges if labels[e.id]]
    if not special:
        return gc

    # connected components of the special subgraph
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for e in special:
        for vid in e.ends:
            parent.setdefault(vid, vid)
    for e in special:
        union(e.ends[0], e.ends[1])

    groups = {}
    for vid in parent:
        groups.setdefault(find(vid), set()).add(vid)

    vertices = {v.id: v for v in gc.vertices}
    edges = {e.id: e for e in gc.edges}
    for root, members in sorted(groups.items()):
        mem = tuple(sorted((m, vertices[m].kind) for m in members))
        merged = Vertex(min(members), V0, MERGED, members=mem)
        for m in members:
            del vertices[m]
        vertices[merged.id] = merged
        for eid in sorted(edges):
            e = edges[eid]
            if labels.get(eid) and set(e.ends) <= members:
                del edges[eid]
                continue
            ends = tuple(merged.id if vid in members else vid for vid in e.ends)
            if ends != e.ends:
                edges[eid] = replace(e, ends=ends)

    out = GraphOfGroups(gc.n, tuple(vertices.values()), tuple(edges.values()), True)
    out = _restore_bipartite(out)
    out = reduce(out)
    require_valid_graph(out)
    return out


def _restore_bipartite(g: GraphOfGroups) -> GraphOfGroups:
    vertices = {v.id: v for v in g.vertices}
    edges = {e.id: e for e in g.edges}
    next_vid = max(vertices) + 1 if vertices else 0
    next_eid = max(edges) + 1 if edges else 0
    for eid in sorted(list(edges)):
        e = edges[eid]
        u, w = e.ends
        pu, pw = vertices[u].part, vertices[w].part
        if pu != pw and u != w:
            continue
        if pu == V0:
            mid = Vertex(next_vid, V1, ISOLATED_V1, group=e.group)
        else:
            mid = Vertex(next_vid, V0, ISOLATED_V0, group=e.group)
        vertices[next_vid] = mid
        next_vid += 1
        edges[eid] = replace(e, ends=(u, mid.id))
        edges[next_eid] = Edge(next_eid, (mid.id, w), e.kind, e.group, e.twisted)
        next_eid += 1
    return GraphOfGroups(g.n, tuple(vertices.values()), tuple(edges.values()), g.completed)


# ---------------------------------------------------------------------------
# exceptional annuli and the refinement
# ---------------------------------------------------------------------------


def exceptional_annuli(g: GraphOfGroups):
    """Isolated annulus splittings enclosed by commensuriser vertices."""
    require_valid_graph(g)
    out = []
    for v in sorted(g.vertices, key=lambda v: v.id):
        if v.kind not in (PERIPHERAL_SEIFERT, TORUS_TYPE_1, TORUS_TYPE_2):
            continue
        base = v.base_orbifold
        arcs = calculus.isolated_arcs(base)
        if euler_char(base) == 0 and not any(
            s.kind == D1 for _, s in base.segments()
        ):
            # relevant only when the whole group is the vertex group
            arcs = []
        for a in arcs:
            out.append((v.id, a))
    return out


def _relabel_cut_as_d1(o: Orbifold2) -> Orbifold2:
    circles = []
    for c in o.circles:
        circles.append(
            _merge_adjacent([Segment(D1 if s.kind == CUT else s.kind, s.corner) for s in c])
        )
    return Orbifold2(o.orientable, o.genus, o.cone_points, tuple(circles))


def _piece_vertex(vid: int, parent: Vertex, piece: Orbifold2) -> Vertex:
    ess = calculus.essential_arcs_oracle(piece)
    scc = calculus.has_essential_scc(piece)
    if ess or scc:
        kind = {
            NOT_VC: PERIPHERAL_SEIFERT,
            VC: TORUS_TYPE_1,
            FINITE: SOLID_TORUS,
        }[pi1_class(piece)]
        return Vertex(vid, V0, kind, fibre=parent.fibre, base_orbifold=piece)
    return Vertex(vid, V1, ORDINARY_V1, fibre=parent.fibre, base_orbifold=piece)


def waldhausen_refine(g: GraphOfGroups) -> GraphOfGroups:
    """Split every exceptional vertex along its exceptional annulus."""
    require_valid_graph(g)
    excs = exceptional_annuli(g)
    if not excs:
        return g
    by_vertex = {}
    for vid, arc in excs:
        by_vertex.setdefault(vid, []).append(arc)

    vertices = {v.id: v for v in g.vertices}
    edges = {e.id: e for e in g.edges}
    next_vid = max(vertices) + 1
    next_eid = max(edges) + 1 if edges else 0

    for vid in sorted(by_vertex):
        arcs = by_vertex[vid]
        if len(arcs) != 1:
            raise GraphError(f"vertex {vid}: expected a unique exceptional annulus")
        v = vertices[vid]
        pieces = [
            _relabel_cut_as_d1(p) for p in calculus.cut_along_arc(v.base_orbifold, arcs[0])
        ]
        new_ids = [vid]
        for _ in pieces[1:]:
            new_ids.append(next_vid)
            next_vid += 1
        piece_vertices = [
            _piece_vertex(nid, v, piece) for nid, piece in zip(new_ids, pieces)
        ]
        for pv in piece_vertices:
            vertices[pv.id] = pv
        # reattach the old edges of v deterministically: prefer a piece whose
        # base still records decomposition boundary
        with_d1 = [
            pv.id
            for pv in piece_vertices
            if any(s.kind == D1 for _, s in pv.base_orbifold.segments())
        ]
        target = with_d1[0] if with_d1 else new_ids[0]
        for eid in sorted(edges):
            e = edges[eid]
            if vid in e.ends and target != vid:
                edges[eid] = replace(
                    e, ends=tuple(target if x == vid else x for x in e.ends)
                )
        # the new annulus edge joins the pieces (a loop for one piece)
        if v.fibre is None:
            raise GraphError(f"vertex {vid}: exceptional vertex without a fibre mark")
        ends = (new_ids[0], new_ids[1]) if len(new_ids) == 2 else (new_ids[0], new_ids[0])
        edges[next_eid] = Edge(next_eid, ends, ANNULUS, v.fibre)
        next_eid += 1

    out = GraphOfGroups(g.n, tuple(vertices.values()), tuple(edges.values()), g.completed)
    out = _restore_bipartite(out)
    out = reduce(out)
    require_valid_graph(out)
    return out


# ---------------------------------------------------------------------------
# DOT export and serialization
# ---------------------------------------------------------------------------


def dot_export(g: GraphOfGroups) -> str:
    lines = ["graph decomposition {"]
    for v in sorted(g.vertices, key=lambda v: v.id):
        label = f"{v.part} {v.kind}"
        if v.group is not None:
            label += f" [{v.group.class_id}]"
        if v.fibre is not None:
            label += f" fibre={v.fibre.class_id}"
        lines.append(f'  v{v.id} [label="{label}"];')
    for e in sorted(g.edges, key=lambda e: e.id):
        label = f"{e.kind} {e.group.class_id}"
        if e.twisted:
            label += " twisted"
        lines.append(f'  v{e.ends[0]} -- v{e.ends[1]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def mark_to_dict(m: Optional[GroupMark]):
    if m is None:
        return None
    d = {"id": m.class_id, "length": m.length}
    if m.index2_over is not None:
        d["index2_over"] = m.index2_over
    return d


def mark_from_dict(d) -> Optional[GroupMark]:
    if d is None:
        return None
    return GroupMark(d["id"], d["length"], d.get("index2_over"))


def graph_to_dict(g: GraphOfGroups) -> dict:
    from .orbifold import to_dict as orb_to_dict

    verts = []
    for v in sorted(g.vertices, key=lambda v: v.id):
        d = {"id": v.id, "part": v.part, "kind": v.kind}
        if v.group is not None:
            d["group"] = mark_to_dict(v.group)
        if v.fibre is not None:
            d["fibre"] = mark_to_dict(v.fibre)
        if v.base_orbifold is not None:
            d["orbifold"] = orb_to_dict(v.base_orbifold)
        if v.members:
            d["members"] = [list(m) for m in v.members]
        verts.append(d)
    edges = []
    for e in sorted(g.edges, key=lambda e: e.id):
        d = {
            "id": e.id,
            "ends": list(e.ends),
            "kind": e.kind,
            "group": mark_to_dict(e.group),
        }
        if e.twisted:
            d["twisted"] = True
        edges.append(d)
    return {"n": g.n, "completed": g.completed, "vertices": verts, "edges": edges}


def graph_from_dict(d: dict) -> GraphOfGroups:
    from .orbifold import from_dict as orb_from_dict

    verts = []
    for vd in d["vertices"]:
        verts.append(
            Vertex(
                int(vd["id"]),
                vd["part"],
                vd["kind"],
                mark_from_dict(vd.get("group")),
                mark_from_dict(vd.get("fibre")),
                orb_from_dict(vd["orbifold"]) if vd.get("orbifold") else None,
                tuple(tuple(m) for m in vd.get("members", ())),
            )
        )
    edges = []
    for ed in d["edges"]:
        edges.append(
            Edge(
                int(ed["id"]),
                tuple(int(x) for x in ed["ends"]),
                ed["kind"],
                mark_from_dict(ed["group"]),
                bool(ed.get("twisted", False)),
            )
        )
    return GraphOfGroups(int(d["n"]), tuple(verts), tuple(edges), bool(d.get("completed", False)))


# ---------------------------------------------------------------------------
# isomorphism (tests and idempotence checks)
# ---------------------------------------------------------------------------


def graphs_isomorphic(g1: GraphOfGroups, g2: GraphOfGroups) -> bool:
    if g1.n != g2.n or len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False

    def vkey(v):
        return (v.part, v.kind, v.group, v.fibre, v.base_orbifold)

    v1 = sorted(g1.vertices, key=lambda v: v.id)
    v2 = sorted(g2.vertices, key=lambda v: v.id)
    if sorted(map(vkey, v1), key=str) != sorted(map(vkey, v2), key=str):
        return False

    def edge_multiset(g, perm):
        out = []
        for e in g.edges:
            ends = tuple(sorted(perm.get(x, x) for x in e.ends))
            out.append((ends, e.kind, e.group, e.twisted))
        return sorted(out, key=str)

    base = edge_multiset(g2, {})
    for cand in itertools.permutations(v2, len(v1)):
        if any(vkey(a) != vkey(b) for a, b in zip(v1, cand)):
            continue
        perm = {a.id: b.id for a, b in zip(v1, cand)}
        if edge_multiset(g1, perm) == base:
            return True
    return False
