import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decompkit.decomposition import make_minor_model, singleton_decomposition, validate_decomposition
from decompkit.drawing import (
    PlanarizedDrawing,
    crossing_count,
    drawing_to_decomposition,
    identity_drawing,
    k5_one_crossing,
    mcr_certificate_pipeline,
    random_drawing,
    straight_line_drawing,
    validate_drawing,
)
from decompkit.embedding import embed, euler_characteristic_ok
from decompkit.errors import InvalidDrawingError, MalformedInputError
from decompkit.graph import build_graph, complete_graph, grid_graph
from decompkit.io import drawing_from_json
from decompkit.realizer import Realizer, expand_to_realizer

from helpers import K4, k4_two_bags

# three hull points and two inner points: the rectilinear K5 drawing with one crossing
K5_POS = {"v1": (0, 0), "v2": (10, 0), "v3": (5, 10), "v4": (4, 3), "v5": (6, 3.5)}


def two_squares():
    g = build_graph(list("abcdpqrs"), [(u, v) for grp in ("abcd", "pqrs") for i, u in enumerate(grp) for v in grp[i + 1:]])
    pos = {"a": (0, 0), "b": (1, 0), "c": (1, 1), "d": (0, 1), "p": (5, 0), "q": (6, 0), "r": (6, 1), "s": (5, 1)}
    return straight_line_drawing(g, pos)


def assert_valid_planar(d):
    rep = validate_decomposition(d, check_planarity=False)
    assert rep.valid, rep.problems
    assert euler_characteristic_ok(d.graph, d.rotation)


class TestValidate:
    def test_identity_planarization(self):
        drw = identity_drawing(K4, embed(K4))
        assert validate_drawing(drw).valid and crossing_count(drw) == 0

    def test_k5_one_crossing(self):
        drw = k5_one_crossing()
        assert validate_drawing(drw).valid
        assert crossing_count(drw) == 1
        (x,) = drw.crossings
        assert {drw.routes[("v1", "v3")], drw.routes[("v2", "v4")]} == {("v1", x, "v3"), ("v2", x, "v4")}
        assert len(drw.plan) == 6 and euler_characteristic_ok(drw.plan, drw.rotation)

    def test_two_independent_crossings(self):
        assert crossing_count(two_squares()) == 2

    def test_crossing_of_degree_three(self):
        drw = k5_one_crossing()
        plan = build_graph(drw.plan.vertices, [e for e in drw.plan.edges if e != ("v1", "x1")])
        rot = {v: [u for u in ns if {u, v} != {"v1", "x1"}] for v, ns in drw.rotation.items()}
        bad = PlanarizedDrawing(drw.base, plan, rot, drw.crossings, drw.routes)
        rep = validate_drawing(bad)
        assert "degree" in rep.kinds
        with pytest.raises(InvalidDrawingError):
            crossing_count(bad)

    def test_pairs_must_be_opposite(self):
        drw = k5_one_crossing()
        rot = dict(drw.rotation)
        rot["x1"] = ["v1", "v3", "v2", "v4"]
        assert "pairs" in validate_drawing(PlanarizedDrawing(drw.base, drw.plan, rot, drw.crossings, drw.routes)).kinds

    def test_routes_must_cover_plan(self):
        drw = k5_one_crossing()
        routes = dict(drw.routes)
        del routes[("v1", "v2")]
        assert {"routes", "coverage"} <= validate_drawing(PlanarizedDrawing(drw.base, drw.plan, drw.rotation, drw.crossings, routes)).kinds


class TestStraightLine:
    def test_rectilinear_k5(self):
        drw = straight_line_drawing(complete_graph(5), K5_POS)
        assert validate_drawing(drw).valid and drw.crossing_count == 1

    def test_collinear_overlap_rejected(self):
        g = build_graph("abc", [("a", "c"), ("b", "c")])
        with pytest.raises(MalformedInputError):
            straight_line_drawing(g, {"a": (0, 0), "b": (1, 0), "c": (2, 0)})

    def test_json_round_trip(self):
        drw = two_squares()
        back = drawing_from_json(drw.to_json())
        assert back.to_json() == drw.to_json() and validate_drawing(back).valid


class TestToDecomposition:
    def test_crossing_free_is_singleton(self):
        g = grid_graph(3, 4)
        d = drawing_to_decomposition(identity_drawing(g, embed(g)))
        assert d.width == 1 and d.order == len(g) and d.graph == g
        assert_valid_planar(d)

    def test_k5(self):
        d = drawing_to_decomposition(k5_one_crossing())
        assert (d.order, d.width) == (6, 2)
        assert sorted(len(b) for b in d.bags.values()) == [1, 1, 1, 1, 1, 2]
        assert_valid_planar(d)

    def test_random_drawings_order_is_exact(self):
        rng = np.random.default_rng(7)
        total = 0
        for _ in range(25):
            drw = random_drawing(rng)
            assert validate_drawing(drw).valid
            d = drawing_to_decomposition(drw)
            assert d.order == len(drw.base) + drw.crossing_count and d.width <= 2
            assert_valid_planar(d)
            total += drw.crossing_count
        assert total > 0


@given(st.integers(0, 10**6))
@settings(max_examples=25)
def test_random_drawing_respects_caps(seed):
    drw = random_drawing(np.random.default_rng(seed), max_vertices=12, max_crossings=4)
    assert len(drw.base) <= 12 and drw.crossing_count <= 4
    assert validate_drawing(drw).valid


class TestPipeline:
    def test_planar_trivial_realizer(self):
        g = grid_graph(3, 3)
        r = Realizer(g, make_minor_model(g, g, {v: [v] for v in g.vertices}), "identity")
        out = mcr_certificate_pipeline(g, r, identity_drawing(g, embed(g)))
        assert out.order == len(g) and out.width == 1
        assert validate_decomposition(out).valid

    def test_k4_two_bag_realizer_with_one_crossing(self):
        r, _ = expand_to_realizer(k4_two_bags())
        names = list(r.expanded.vertices)
        assert r.expanded.num_edges == 10  # G' is K5
        drw = straight_line_drawing(r.expanded, dict(zip(names, K5_POS.values())))
        assert drw.crossing_count == 1
        out = mcr_certificate_pipeline(K4, r, drw)
        assert out.host == K4 and out.width <= 2
        assert out.order <= len(K4) + 2 * out.info["crossings"] <= 6
        assert validate_decomposition(out).valid

    def test_pattern_mismatch(self):
        r, _ = expand_to_realizer(k4_two_bags())
        with pytest.raises(MalformedInputError):
            mcr_certificate_pipeline(complete_graph(4), r, k5_one_crossing())
