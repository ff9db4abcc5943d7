import json

import pytest

from jsjcalc import catalog
from jsjcalc.calculus import arcs_equivalent, isolated_arcs
from jsjcalc.orbifold import (
    D0,
    D1,
    MIRROR,
    annulus,
    circle,
    disk,
    euler_char,
    is_mirror_free,
    pants,
    validate,
)
from jsjcalc.serialize import dumps


class TestCounts:
    def test_chi_zero_count(self):
        assert len(catalog.catalog_chi_zero()) == 10

    def test_chi_neg_orbifold_count(self):
        assert len(catalog.catalog_chi_neg_orbifolds()) == 8

    def test_chi_neg_config_count(self):
        assert len(catalog.catalog_chi_neg_configs()) == 13

    def test_d1_empty_configs(self):
        empties = [
            e
            for e in catalog.catalog_chi_neg_configs()
            if all(s.kind != D1 for _, s in e.orbifold.segments())
        ]
        assert len(empties) == 6
        assert [e.figure_id for e in empties] == ["F3a", "F3b", "F3c", "F3d", "F3e", "F3f"]

    def test_dim3(self):
        d3 = catalog.catalog_dim3()
        assert [e.figure_id for e in d3] == ["F1a", "F3a", "F3b", "F4a", "F4b", "F4c"]
        assert all(e.dim3_legal for e in d3)

    def test_ns_omission_unique(self):
        flagged = [e.figure_id for e in catalog.all_entries() if e.ns_omission]
        assert flagged == ["F4b"]


class TestFlags:
    def test_dim3_legal_iff_mirror_free(self):
        for e in catalog.all_entries():
            assert e.dim3_legal == is_mirror_free(e.orbifold)

    def test_requires_nonvpc_iff_chi0_no_d1(self):
        for e in catalog.all_entries():
            expect = e.chi() == 0 and all(
                s.kind != D1 for _, s in e.orbifold.segments()
            )
            assert e.requires_nonVPC_ambient == expect, e.figure_id

    def test_chi_signs(self):
        for e in catalog.catalog_chi_zero():
            assert e.chi() == 0
        for e in catalog.catalog_chi_neg_configs():
            assert e.chi() < 0
        for o in catalog.catalog_chi_neg_orbifolds():
            assert euler_char(o) < 0

    def test_all_entries_validate(self):
        for e in catalog.all_entries():
            assert validate(e.orbifold) == []


class TestMatching:
    def test_annulus_with_marked_inner(self):
        hit = catalog.catalog_match(annulus(inner=circle(D0, D1)))
        assert hit is not None and hit[0].figure_id == "F1a"

    def test_two_cone_disk_binds_parameters(self):
        hit = catalog.catalog_match(disk(cones=(3, 3)))
        assert hit is not None and hit[0].figure_id == "F3a"

    def test_plain_disk_pattern_no_match(self):
        o = disk(boundary=circle(*[D0, D1] * 4))
        assert catalog.catalog_match(o) is None

    def test_two_cone_disk_both_two_is_chi_zero(self):
        hit = catalog.catalog_match(disk(cones=(2, 2)))
        assert hit is not None and hit[0].figure_id == "F1e"

    def test_match_up_to_symmetry(self):
        # pants with the marked circle listed first still matches F4c
        o = pants((D1, D0, D1))
        hit = catalog.catalog_match(o)
        assert hit is not None and hit[0].figure_id == "F4c"
        entry, arc = hit
        assert arc.endpoints[0][0] == 1  # re-indexed to the D0 circle of o

    def test_matched_arc_is_isolated(self):
        o = pants((D1, D0, D1))
        entry, arc = catalog.catalog_match(o)
        assert [a for a in isolated_arcs(o)] == [arc]

    def test_folded_family_binds_label(self):
        o = disk(boundary=circle(D0, MIRROR, (MIRROR, 6), (MIRROR, 8)))
        hit = catalog.catalog_match(o)
        assert hit is not None and hit[0].figure_id == "F3e"

    def test_corner_two_pair_is_chi_zero_entry(self):
        o = disk(boundary=circle(D0, MIRROR, (MIRROR, 2), (MIRROR, 2)))
        hit = catalog.catalog_match(o)
        assert hit is not None and hit[0].figure_id == "F1j"


class TestOracleEquivalence:
    @pytest.mark.parametrize(
        "fid", [e.figure_id for e in catalog.all_entries() if is_mirror_free(e.orbifold)]
    )
    def test_mirror_free_entries(self, fid):
        e = catalog.entry_by_id(fid)
        o = e.orbifold
        import jsjcalc.calculus as calc
        from jsjcalc.arcs import forced_cross

        ess = calc.essential_arcs_oracle(o)
        if calc._mobius_plain(o):
            iso = ess
        else:
            sccs = calc._essential_sccs(o)
            iso = [
                a
                for a in ess
                if not any(forced_cross(o, a, b) for b in ess if b != a)
                and not any(forced_cross(o, a, s) for s in sccs)
            ]
            iso = calc.dedupe_arcs_up_to_symmetry(o, iso)
        assert len(iso) == 1
        assert arcs_equivalent(o, iso[0], e.isolated_arc)

    @pytest.mark.parametrize(
        "fid",
        [e.figure_id for e in catalog.all_entries() if not is_mirror_free(e.orbifold)],
    )
    def test_mirror_entries_lift_check(self, fid):
        from jsjcalc.arcs import is_essential_arc
        from jsjcalc.cover import lift_arc, mirror_double

        e = catalog.entry_by_id(fid)
        md = mirror_double(e.orbifold)
        lifts = lift_arc(md, e.isolated_arc)
        assert lifts
        assert all(is_essential_arc(md.cover, x) for x in lifts)
        if e.isolated_arc.twisted:
            assert len(lifts) == 1


class TestBoundaryConstraint:
    def test_endpoint_components_pure_d0(self):
        exceptions = {"F1a", "F1b", "F1c"}
        for e in catalog.all_entries():
            o, a = e.orbifold, e.isolated_arc
            for ci, si in a.endpoints:
                comp = next(
                    run for run in o.boundary_components(ci) if si in run
                )
                pure = all(o.circles[ci][j].kind == D0 for j in comp)
                if e.figure_id in exceptions:
                    continue
                assert pure, e.figure_id

    def test_exceptions_are_actually_mixed(self):
        for fid in ("F1a", "F1b", "F1c"):
            e = catalog.entry_by_id(fid)
            o, a = e.orbifold, e.isolated_arc
            mixed = False
            for ci, si in a.endpoints:
                comp = next(run for run in o.boundary_components(ci) if si in run)
                if any(o.circles[ci][j].kind == D1 for j in comp):
                    mixed = True
            assert mixed, fid


class TestEscalation:
    def test_relabelled_arcs_stay_essential(self):
        from jsjcalc.arcs import is_essential_arc
        from jsjcalc.calculus import relabel_d1_as_d0

        for e in catalog.all_entries():
            if e.chi() > 0:
                continue
            o2, a2 = relabel_d1_as_d0(e.orbifold, e.isolated_arc)
            assert validate(o2) == []
            assert is_essential_arc(o2, a2), e.figure_id


class TestExport:
    def test_export_counts_and_note(self):
        doc = catalog.catalog_export()
        assert "fourteen" in doc["count_note"]
        assert doc["counts"]["chi_zero_configurations"] == 10
        assert doc["counts"]["chi_negative_orbifolds"] == 8
        assert doc["counts"]["chi_negative_configurations"] == 13
        assert doc["counts"]["dimension_3_configurations"] == 6
        assert len(doc["configurations"]) == 23
        assert doc["configurations"]["F4b"]["ns_omission"] is True

    def test_export_deterministic(self):
        assert dumps(catalog.catalog_export()) == dumps(catalog.catalog_export())

    def test_export_json_round_trip(self):
        text = dumps(catalog.catalog_export())
        assert dumps(json.loads(text)) == text
