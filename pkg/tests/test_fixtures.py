from fractions import Fraction

import pytest

from jsjcalc.fixtures import (
    build_dim4_orbifolds,
    build_fixture,
    build_klein_glue,
    build_scott,
    build_torus_type2,
)
from jsjcalc.gog import (
    TORUS_TYPE_1,
    V0,
    Vertex,
    GraphOfGroups,
    validate_graph,
)
from jsjcalc.gog import GroupMark
from jsjcalc.orbifold import euler_char, is_mirror_free, validate


class TestBuilders:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_fixtures_valid(self, n):
        for build in (build_scott, build_torus_type2, build_klein_glue):
            assert validate_graph(build(n)) == []

    def test_deterministic(self):
        assert build_scott(1) == build_scott(1)
        assert build_torus_type2(2) == build_torus_type2(2)
        assert build_klein_glue(1) == build_klein_glue(1)

    def test_build_by_name(self):
        assert build_fixture("scott", 1) == build_scott(1)
        assert build_fixture("torus-type-2", 1) == build_torus_type2(1)
        assert build_fixture("klein-glue", 1) == build_klein_glue(1)
        with pytest.raises(ValueError):
            build_fixture("nope")

    def test_scott_needs_positive_dimension(self):
        with pytest.raises(ValueError):
            build_scott(0)


class TestDim4:
    def test_orbifolds(self):
        q_cross_i, corner = build_dim4_orbifolds()
        assert validate(q_cross_i) == [] and validate(corner) == []
        assert not is_mirror_free(q_cross_i)
        assert not is_mirror_free(corner)
        assert euler_char(corner) == Fraction(1, 4)
        assert euler_char(q_cross_i) == 0

    def test_rejected_in_dimension_3(self):
        q_cross_i, corner = build_dim4_orbifolds()
        f = GroupMark("f", "n")
        for base in (q_cross_i, corner):
            kind = TORUS_TYPE_1 if euler_char(base) == 0 else None
            if kind is None:
                continue
            v = Vertex(1, V0, kind, fibre=f, base_orbifold=base)
            bad = validate_graph(GraphOfGroups(1, (v,), ()))
            assert any("mirror in dimension 3" in x for x in bad)
            assert validate_graph(GraphOfGroups(2, (v,), ())) == []


class TestBundledData:
    DATA = __import__("pathlib").Path(__file__).parent / "data"

    def test_graph_fixtures_match_bundles(self):
        import json

        from jsjcalc.gog import graph_from_dict
        from jsjcalc.serialize import dumps
        from jsjcalc.gog import graph_to_dict

        for name, build in (
            ("scott", build_scott),
            ("torus-type-2", build_torus_type2),
            ("klein-glue", build_klein_glue),
        ):
            text = (self.DATA / f"{name}.json").read_text()
            assert graph_from_dict(json.loads(text)) == build(1)
            assert dumps(graph_to_dict(build(1))) == text

    def test_dim4_bundle(self):
        import json

        from jsjcalc.orbifold import from_dict

        docs = json.loads((self.DATA / "dim4-orbifolds.json").read_text())
        assert [from_dict(d) for d in docs] == build_dim4_orbifolds()
