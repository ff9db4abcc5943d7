import pytest

from jsjcalc.fixtures import build_klein_glue, build_scott, build_torus_type2, f1a_base, pants_base
from jsjcalc.gog import (
    ANNULUS,
    CANONICAL,
    ISOLATED_V0,
    ISOLATED_V1,
    ORDINARY_V1,
    PERIPHERAL_SEIFERT,
    SOLID_TORUS,
    SPECIAL_CANONICAL_TORUS,
    SPECIAL_SEIFERT,
    TORUS,
    TORUS_TYPE_2,
    V0,
    V1,
    Edge,
    GraphError,
    GraphOfGroups,
    GroupMark,
    Vertex,
    classify_edges,
    collapse_special_intervals,
    complete,
    detect_special_canonical,
    dot_export,
    exceptional_annuli,
    graph_from_dict,
    graph_to_dict,
    graphs_isomorphic,
    is_isolated_vertex,
    parallel_edges_check,
    reduce,
    validate_graph,
    waldhausen_refine,
)
from jsjcalc.orbifold import D0, D1, MIRROR, circle, disk
from jsjcalc.serialize import dumps

H = GroupMark("H", "n+1")
F = GroupMark("f", "n")


def mark(cid, length="n+1", over=None):
    return GroupMark(cid, length, over)


class TestValidate:
    def test_scott_ok(self):
        assert validate_graph(build_scott(1)) == []

    def test_annulus_edge_wrong_length(self):
        g = build_scott(1)
        edges = list(g.edges)
        edges[2] = Edge(3, (1, 4), ANNULUS, H)
        bad = validate_graph(GraphOfGroups(1, g.vertices, tuple(edges)))
        assert any("length n" in v for v in bad)

    def test_mirror_in_dimension_3(self):
        base = disk(cones=(2,), boundary=circle(D0, MIRROR))
        v = Vertex(1, V0, TORUS_TYPE_2, fibre=F, base_orbifold=base)
        g = GraphOfGroups(1, (v,), ())
        assert any("mirror in dimension 3" in x for x in validate_graph(g))
        assert validate_graph(GraphOfGroups(2, (v,), ())) == []

    def test_twisted_annulus_in_dimension_3(self):
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base()),
            Vertex(2, V1, ORDINARY_V1),
        )
        e = Edge(1, (1, 2), ANNULUS, F, twisted=True)
        bad = validate_graph(GraphOfGroups(1, vs, (e,)))
        assert any("twisted annulus in dimension 3" in x for x in bad)
        assert validate_graph(GraphOfGroups(2, vs, (e,))) == []

    def test_not_bipartite(self):
        vs = (
            Vertex(1, V1, ORDINARY_V1, group=H),
            Vertex(2, V1, ORDINARY_V1, group=H),
        )
        bad = validate_graph(GraphOfGroups(1, vs, (Edge(1, (1, 2), TORUS, H),)))
        assert any("not bipartite" in x for x in bad)

    def test_disconnected(self):
        vs = (
            Vertex(1, V1, ORDINARY_V1, group=H),
            Vertex(2, V0, ISOLATED_V0, group=H),
        )
        assert any("connected" in x for x in validate_graph(GraphOfGroups(1, vs, ())))

    def test_base_orbifold_class_mismatch(self):
        v = Vertex(1, V0, TORUS_TYPE_2, fibre=F, base_orbifold=pants_base())
        bad = validate_graph(GraphOfGroups(1, (v,), ()))
        assert any("kind wants" in x for x in bad)


class TestIsolated:
    def test_scott_middle_vertex(self):
        g = build_scott(1)
        assert is_isolated_vertex(g, 3)

    def test_valence_one_not_isolated(self):
        g = build_scott(1)
        assert not is_isolated_vertex(g, 4)

    def test_distinct_edge_classes_not_isolated(self):
        vs = (
            Vertex(1, V0, ISOLATED_V0, group=H),
            Vertex(2, V1, ORDINARY_V1, group=H),
            Vertex(3, V1, ORDINARY_V1, group=mark("K")),
        )
        es = (Edge(1, (1, 2), TORUS, H), Edge(2, (1, 3), TORUS, mark("K")))
        g = GraphOfGroups(1, vs, es)
        assert not is_isolated_vertex(g, 1)


class TestReduce:
    def test_two_vertex_loop_unchanged(self):
        vs = (Vertex(1, V0, ISOLATED_V0, group=H), Vertex(2, V1, ISOLATED_V1, group=H))
        es = (Edge(1, (1, 2), TORUS, H), Edge(2, (2, 1), TORUS, H))
        g = GraphOfGroups(1, vs, es)
        assert reduce(g) == g

    def test_already_reduced_identity(self):
        g = build_scott(1)
        assert reduce(g) == g

    def test_isolated_run_collapses(self):
        big = mark("G1")
        vs = (
            Vertex(1, V1, ORDINARY_V1, group=big),
            Vertex(2, V0, ISOLATED_V0, group=H),
            Vertex(3, V1, ISOLATED_V1, group=H),
            Vertex(4, V0, ISOLATED_V0, group=H),
            Vertex(5, V1, ORDINARY_V1, group=mark("G2")),
        )
        es = tuple(
            Edge(i, (i, i + 1), TORUS, H) for i in range(1, 5)
        )
        g = GraphOfGroups(1, vs, es)
        r = reduce(g)
        assert len(r.vertices) == 3
        mid = [v for v in r.vertices if v.id not in (1, 5)]
        assert len(mid) == 1 and mid[0].part == V0
        assert validate_graph(r) == []


class TestComplete:
    def test_no_specials_isomorphic(self):
        g = build_scott(1)
        gc, vmap, emap = complete(g)
        assert graphs_isomorphic(gc, GraphOfGroups(g.n, g.vertices, g.edges, True))
        assert all(len(v) == 1 for v in emap.values())

    def test_klein_completion(self):
        g = build_klein_glue(1)
        gc, vmap, emap = complete(g)
        relabelled = gc.vertex(2)
        assert relabelled.part == V0 and relabelled.kind == SPECIAL_SEIFERT
        inserted = [v for v in gc.vertices if v.kind == ISOLATED_V1]
        assert len(inserted) == 1
        assert emap[1] and len(emap[1]) == 2  # subdivided splitting

    def test_double_completion_errors(self):
        gc, _, _ = complete(build_scott(1))
        with pytest.raises(GraphError):
            complete(gc)

    def test_idempotent_up_to_isomorphism(self):
        gc, _, _ = complete(build_klein_glue(1))
        again, _, _ = complete(GraphOfGroups(gc.n, gc.vertices, gc.edges, False))
        assert graphs_isomorphic(gc, again)


class TestDetect:
    def test_scott_edges_special(self):
        g = build_scott(1)
        gc, _, emap = complete(g)
        for eid in emap[1]:
            assert detect_special_canonical(gc, eid)

    def test_klein_edge_special(self):
        g = build_klein_glue(1)
        labels = classify_edges(g)
        assert labels[1] == SPECIAL_CANONICAL_TORUS

    def test_two_special_neighbours_fails(self):
        hL = mark("H", over="HbarL")
        vs = (
            Vertex(1, V0, SPECIAL_SEIFERT, group=mark("HbarL")),
            Vertex(2, V0, SPECIAL_SEIFERT, group=mark("HbarL")),
            Vertex(3, V1, ISOLATED_V1, group=hL),
        )
        es = (Edge(1, (1, 3), TORUS, hL), Edge(2, (3, 2), TORUS, hL))
        g = GraphOfGroups(1, vs, es, completed=True)
        assert not detect_special_canonical(g, 1)
        assert not detect_special_canonical(g, 2)

    def test_loop_needs_peripheral_seifert(self):
        for kind, base, want in (
            (PERIPHERAL_SEIFERT, pants_base(), True),
            (TORUS_TYPE_2, f1a_base(), False),
        ):
            vs = (
                Vertex(1, V0, kind, fibre=F, base_orbifold=base),
                Vertex(2, V1, ISOLATED_V1, group=H),
            )
            es = (Edge(1, (1, 2), TORUS, H), Edge(2, (2, 1), TORUS, H))
            g = GraphOfGroups(1, vs, es, completed=True)
            assert detect_special_canonical(g, 1) is want

    def test_annulus_edge_never_special(self):
        g = build_scott(1)
        labels = classify_edges(g)
        assert labels[3] == CANONICAL and labels[4] == CANONICAL

    def test_requires_completed(self):
        g = build_scott(1)
        with pytest.raises(GraphError):
            detect_special_canonical(g, 1)


class TestParallel:
    def test_scott_case_two(self):
        assert parallel_edges_check(build_scott(1)) == []

    def test_meeting_only_at_seifert_vertex_fails(self):
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base(2)),
            Vertex(2, V1, ORDINARY_V1, group=H),
            Vertex(3, V1, ORDINARY_V1, group=H),
        )
        es = (Edge(1, (1, 2), TORUS, H), Edge(2, (1, 3), TORUS, H))
        g = GraphOfGroups(1, vs, es)
        bad = parallel_edges_check(g)
        assert bad and "illegal pattern" in bad[0]

    def test_index_two_fold(self):
        hbar = mark("Hbar")
        h = mark("H", over="Hbar")
        vs = (
            Vertex(1, V1, ORDINARY_V1, group=mark("A")),
            Vertex(2, V0, ISOLATED_V0, group=hbar),
            Vertex(3, V1, ORDINARY_V1, group=mark("B")),
        )
        es = (Edge(1, (1, 2), TORUS, h), Edge(2, (2, 3), TORUS, h))
        g = GraphOfGroups(1, vs, es)
        assert parallel_edges_check(g) == []

    def test_chain_case_four(self):
        hbar = mark("Hbar")
        h = mark("H", over="Hbar")
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base()),
            Vertex(2, V1, ISOLATED_V1, group=h),
            Vertex(3, V0, ISOLATED_V0, group=hbar),
            Vertex(4, V1, ISOLATED_V1, group=h),
            Vertex(5, V0, PERIPHERAL_SEIFERT, fibre=mark("f2", "n"), base_orbifold=pants_base()),
        )
        es = (
            Edge(1, (1, 2), TORUS, h),
            Edge(2, (2, 3), TORUS, h),
            Edge(3, (3, 4), TORUS, h),
            Edge(4, (4, 5), TORUS, h),
        )
        g = GraphOfGroups(1, vs, es)
        assert parallel_edges_check(g) == []


class TestCollapse:
    def test_scott_collapse(self):
        g = build_scott(1)
        out = collapse_special_intervals(g)
        merged = [v for v in out.vertices if v.kind == "merged"]
        assert len(merged) == 1
        assert {m[0] for m in merged[0].members} == {1, 2, 3}
        relabelled = classify_edges(out)
        assert all(lbl == CANONICAL for lbl in relabelled.values())
        assert validate_graph(out) == []

    def test_no_specials_identity_shape(self):
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base(2)),
            Vertex(2, V1, ORDINARY_V1, group=H),
        )
        es = (Edge(1, (1, 2), TORUS, H),)
        g = GraphOfGroups(1, vs, es)
        out = collapse_special_intervals(g)
        assert graphs_isomorphic(out, GraphOfGroups(g.n, g.vertices, g.edges, True))

    def test_klein_collapse(self):
        out = collapse_special_intervals(build_klein_glue(1))
        assert len(out.vertices) == 1
        (m,) = out.vertices
        kinds = {k for _, k in m.members}
        assert kinds == {PERIPHERAL_SEIFERT, SPECIAL_SEIFERT, ISOLATED_V1}


class TestExceptional:
    def test_torus_type2_vertices(self):
        g = build_torus_type2(1)
        exc = exceptional_annuli(g)
        assert [vid for vid, _ in exc] == [1, 2]
        assert all(a.separation is None for _, a in exc)

    def test_solid_torus_excluded(self):
        base = disk(boundary=circle(*([D0, D1] * 5)))
        vs = (
            Vertex(1, V0, SOLID_TORUS, fibre=F, base_orbifold=base),
            Vertex(2, V1, ORDINARY_V1, group=F),
        )
        es = (Edge(1, (1, 2), ANNULUS, F),)
        g = GraphOfGroups(1, vs, es)
        assert exceptional_annuli(g) == []

    def test_scott_pants_arcs(self):
        # a pants base with one marked circle carries an isolated arc, so the
        # fibred vertices of the gluing fixture are exceptional
        g = build_scott(1)
        exc = exceptional_annuli(g)
        assert [vid for vid, _ in exc] == [1, 2]

    def test_chi_zero_without_marks_dropped(self):
        from jsjcalc.orbifold import annulus

        vs = (
            Vertex(1, V0, TORUS_TYPE_2, fibre=F, base_orbifold=annulus()),
            Vertex(2, V1, ORDINARY_V1, group=H),
        )
        es = (Edge(1, (1, 2), TORUS, H),)
        g = GraphOfGroups(1, vs, es)
        assert exceptional_annuli(g) == []


class TestWaldhausen:
    def test_torus_type2_refinement(self):
        g = build_torus_type2(1)
        sigma = waldhausen_refine(g)
        assert validate_graph(sigma) == []
        assert exceptional_annuli(sigma) == []
        pieces = [v for v in sigma.vertices if v.base_orbifold is not None]
        assert all(v.part == V1 and v.kind == ORDINARY_V1 for v in pieces)
        loops = [e for e in sigma.edges if e.kind == ANNULUS]
        assert len(loops) == 4  # two loops, each through an inserted vertex

    def test_identity_without_exceptional_vertices(self):
        vs = (
            Vertex(1, V0, SOLID_TORUS, fibre=F, base_orbifold=disk(boundary=circle(D0, D1))),
            Vertex(2, V1, ORDINARY_V1, group=F),
        )
        es = (Edge(1, (1, 2), ANNULUS, F),)
        g = GraphOfGroups(1, vs, es)
        assert waldhausen_refine(g) == g

    def test_pants_vertex_splits_in_two(self):
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base(2)),
            Vertex(2, V1, ORDINARY_V1, group=H),
        )
        es = (Edge(1, (1, 2), TORUS, H),)
        g = GraphOfGroups(1, vs, es)
        sigma = waldhausen_refine(g)
        assert validate_graph(sigma) == []
        pieces = [v for v in sigma.vertices if v.base_orbifold is not None]
        assert len(pieces) == 2
        assert all(v.kind == ORDINARY_V1 for v in pieces)
        assert exceptional_annuli(sigma) == []

    def test_non_exceptional_vertices_persist(self):
        g = build_torus_type2(1)
        sigma = waldhausen_refine(g)
        assert any(v.id == 3 and v.part == V0 for v in sigma.vertices) or any(
            v.group == H and v.part == V0 for v in sigma.vertices
        )


class TestDotAndSerialization:
    def test_single_vertex_dot(self):
        g = GraphOfGroups(1, (Vertex(1, V1, ORDINARY_V1, group=H),), ())
        text = dot_export(g)
        assert text.count("label=") == 1

    def test_scott_dot_nodes(self):
        text = dot_export(build_scott(1))
        assert text.count("[label=") == 9  # 5 nodes + 4 edges
        for vid in (1, 2, 3, 4, 5):
            assert f"v{vid} [" in text

    def test_dot_deterministic(self):
        assert dot_export(build_scott(1)) == dot_export(build_scott(1))

    def test_graph_round_trip(self):
        for g in (build_scott(2), build_torus_type2(1), build_klein_glue(3)):
            assert graph_from_dict(graph_to_dict(g)) == g

    def test_graph_bit_exact(self):
        g = build_scott(1)
        text = dumps(graph_to_dict(g))
        assert dumps(graph_to_dict(graph_from_dict(__import__("json").loads(text)))) == text


class TestSplittingPreservation:
    def test_complete_keeps_kind_and_class(self):
        for build in (build_scott, build_klein_glue, build_torus_type2):
            g = build(1)
            gc, _, emap = complete(g)
            seen = set()
            for e in g.edges:
                mapped = emap[e.id]
                assert mapped, e.id
                for h in mapped:
                    assert h not in seen  # distinct images: a bijection on halves
                    seen.add(h)
                    he = gc.edge(h)
                    assert he.kind == e.kind
                    assert he.group.class_id == e.group.class_id
            assert seen == {e.id for e in gc.edges}

    def test_classify_total_and_exclusive(self):
        for build in (build_scott, build_klein_glue, build_torus_type2):
            g = build(1)
            labels = classify_edges(g)
            assert set(labels) == {e.id for e in g.edges}
            assert all(
                lbl in (CANONICAL, SPECIAL_CANONICAL_TORUS) for lbl in labels.values()
            )

    def test_parallel_check_on_pipeline_outputs(self):
        for build in (build_scott, build_klein_glue, build_torus_type2):
            g = build(1)
            assert parallel_edges_check(g) == []
            gc, _, _ = complete(g)
            assert parallel_edges_check(gc) == []
            assert parallel_edges_check(collapse_special_intervals(g)) == []
            assert parallel_edges_check(waldhausen_refine(g)) == []


class TestSpecialSolidTorus:
    def test_completion_relabels(self):
        from jsjcalc.gog import SPECIAL_SOLID_TORUS

        h = GroupMark("H", "n+1", index2_over=None)
        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base()),
            Vertex(2, V1, SPECIAL_SOLID_TORUS, group=GroupMark("K", "n+1")),
        )
        es = (Edge(1, (1, 2), TORUS, h),)
        g = GraphOfGroups(1, vs, es)
        assert validate_graph(g) == []
        gc, _, emap = complete(g)
        assert gc.vertex(2).part == V0
        assert gc.vertex(2).kind == SPECIAL_SOLID_TORUS
        assert len(emap[1]) == 2
        assert validate_graph(gc) == []


class TestMergedSerialization:
    def test_collapsed_graph_round_trips(self):
        import json

        from jsjcalc.serialize import dumps

        out = collapse_special_intervals(build_scott(1))
        text = dumps(graph_to_dict(out))
        back = graph_from_dict(json.loads(text))
        assert back == out
        merged = [v for v in back.vertices if v.kind == "merged"]
        assert merged and merged[0].members

    def test_two_piece_refinement_round_trips(self):
        import json

        from jsjcalc.serialize import dumps

        vs = (
            Vertex(1, V0, PERIPHERAL_SEIFERT, fibre=F, base_orbifold=pants_base(2)),
            Vertex(2, V1, ORDINARY_V1, group=H),
        )
        es = (Edge(1, (1, 2), TORUS, H),)
        sigma = waldhausen_refine(GraphOfGroups(1, vs, es))
        text = dumps(graph_to_dict(sigma))
        assert graph_from_dict(json.loads(text)) == sigma
