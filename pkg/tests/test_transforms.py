from collections import defaultdict
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from decompkit.contracts import check_simplify
from decompkit.decomposition import (
    make_decomposition,
    make_minor_model,
    singleton_decomposition,
    validate_decomposition,
)
from decompkit.embedding import euler_characteristic_ok
from decompkit.errors import CompositionMismatchError, EmbeddingRequiredError, ModelViolationError, NonPlanarError
from decompkit.generators import random_planar_decomposition
from decompkit.graph import build_graph, complete_graph, contract_edge
from decompkit.transforms import (
    _link_chain,
    bridge_count,
    compact_degree,
    compose,
    count_by_origin,
    degree_three_from_width,
    lift_decomposition,
    simplify_both,
    simplify_degree,
    simplify_width,
    split_degree_four,
)

from helpers import K4, K4_ROT, k4_shaped, k4_two_bags


def assert_valid_planar(d):
    rep = validate_decomposition(d, check_planarity=False)
    assert rep.valid, rep.problems
    assert d.rotation is not None and euler_characteristic_ok(d.graph, d.rotation)


def bridged_instance():
    """Smallest generated input whose width step needs a bridge grid."""
    host = build_graph(["h0", "h1", "h2", "h3"], [("h0", "h3"), ("h1", "h2"), ("h1", "h3")])
    return make_decomposition(
        host,
        {"X0": ["h1", "h2"], "X1": ["h1", "h2", "h3"], "X2": ["h0", "h1", "h2"]},
        [("X0", "X1"), ("X0", "X2"), ("X1", "X2")],
        {"X0": ["X2", "X1"], "X1": ["X0", "X2"], "X2": ["X1", "X0"]},
    )


class TestCompose:
    def test_identity_outer(self):
        d = k4_two_bags()
        out = compose(d, singleton_decomposition(d.graph))
        assert {x: set(b) for x, b in out.bags.items()} == {x: set(b) for x, b in d.bags.items()}
        assert out.width == d.width and validate_decomposition(out).valid

    def test_width_multiplies_at_most(self):
        d = k4_shaped()
        j = make_decomposition(d.graph, {"P": ["X", "Y"], "Q": ["Z", "W"]}, [("P", "Q")])
        out = compose(d, j)
        assert out.width <= 4 and validate_decomposition(out).valid

    def test_wrong_host(self):
        with pytest.raises(CompositionMismatchError):
            compose(k4_two_bags(), singleton_decomposition(K4))


class TestLift:
    def test_identity_model(self):
        j = k4_shaped()
        out = lift_decomposition(make_minor_model(K4, K4, {v: [v] for v in K4.vertices}), j)
        assert {x: set(b) for x, b in out.bags.items()} == {x: set(b) for x, b in j.bags.items()}

    def test_k3_in_k4(self):
        k3 = contract_edge(K4, ("a", "b"))
        m = make_minor_model(k3, K4, {"a": ["a", "b"], "c": ["c"], "d": ["d"]})
        out = lift_decomposition(m, singleton_decomposition(K4))
        assert out.width == 1 and out.order == 4 and out.host == k3
        assert validate_decomposition(out).valid

    def test_invalid_model(self):
        m = make_minor_model(K4, K4, {"a": ["a", "b"], "b": ["b"], "c": ["c"], "d": ["d"]})
        with pytest.raises(ModelViolationError):
            lift_decomposition(m, singleton_decomposition(K4))


class TestSimplifyDegree:
    def test_k4_shaped(self):
        d1 = simplify_degree(k4_shaped())
        assert (d1.order, d1.degree, d1.width) == (12, 3, 2)
        assert_valid_planar(d1)
        assert d1.provenance == "simplify-a"

    def test_single_bag_is_padded(self):
        g = build_graph(["a"], [])
        d = make_decomposition(g, {"X": "a"}, [], {"X": []})
        d1 = simplify_degree(d)
        assert d1.order == 12
        nonempty = {x for x in d1.graph.vertices if d1.bags[x]}
        assert nonempty == {x for x in d1.graph.vertices if d1.belongs[x] == "X"}
        assert_valid_planar(d1)

    def test_nonplanar_input(self):
        k5 = complete_graph(5)
        d = make_decomposition(build_graph(["a"], []), {x: "a" for x in k5.vertices}, k5.edges)
        with pytest.raises(NonPlanarError):
            simplify_degree(d, compute_embedding=True)
        with pytest.raises(EmbeddingRequiredError):
            simplify_degree(d)

    def test_copies_of_a_bag_form_a_cycle(self):
        d1 = simplify_degree(random_planar_decomposition(20, 3, 5))
        groups = defaultdict(list)
        for x in d1.graph.vertices:
            groups[d1.belongs[x]].append(x)
        for members in groups.values():
            inside = set(members)
            degs = [sum(1 for y in d1.graph.neighbors(x) if y in inside) for x in members]
            assert all(deg == 2 for deg in degs) and d1.graph.is_connected_subset(inside)


class TestSimplifyWidth:
    def test_k4_shaped(self):
        d2 = simplify_width(k4_shaped())
        assert d2.width == 2 and d2.degree <= 4 and d2.order <= 36
        assert_valid_planar(d2)

    def test_width_one_keeps_shape(self):
        d = singleton_decomposition(K4, K4_ROT)
        d1, d2 = simplify_degree(d), simplify_width(d)
        assert d2.order == d1.order and d2.graph.num_edges == d1.graph.num_edges
        assert sorted(d2.graph.degree(x) for x in d2.graph.vertices) == [3] * 12
        assert count_by_origin(d2) == {x: 1 for x in d1.graph.vertices}

    def test_wedges_are_connected(self):
        d2 = simplify_width(random_planar_decomposition(15, 4, 3))
        groups = defaultdict(set)
        for x in d2.graph.vertices:
            groups[d2.belongs[x]].add(x)
        assert all(d2.graph.is_connected_subset(g) for g in groups.values())

    def test_overrides_still_valid(self):
        d = k4_shaped()
        d2 = simplify_width(d, vertex_order=["d", "c", "b", "a"], orientation=[(b, a) for a, b in d.graph.edges])
        assert_valid_planar(d2)

    def test_crossing_requirements_have_no_monotone_links(self):
        # x2 must meet y3 and x3 must meet y2: the links would cross
        assert _link_chain(3, 3, [(2, 3), (3, 2)]) is None
        assert _link_chain(3, 3, [(2, 2), (3, 3)]) == [(2, 2), (3, 3)]
        # a pinned row and a pinned column share one link
        assert _link_chain(3, 3, [(1, 2), (2, 1)]) == [(2, 2)]

    def test_bridged_instance_is_valid_but_exceeds_cell_budget(self):
        d = bridged_instance()
        assert validate_decomposition(d).valid
        d2 = simplify_width(d)
        assert bridge_count(d2) > 0
        assert_valid_planar(d2)
        assert d2.width <= 2 and d2.degree <= 4
        # wedge cells alone respect C(k+1, 2); bridge cells come on top
        assert max(count_by_origin(d2).values()) <= comb(d.width + 1, 2)


class TestSimplifyBoth:
    def test_k4_shaped(self):
        d3 = simplify_both(k4_shaped())
        assert d3.width == 2 and d3.degree <= 3 and d3.order <= 48
        assert_valid_planar(d3)

    def test_width_one_matches_degree_step(self):
        d = singleton_decomposition(K4, K4_ROT)
        d1, d3 = simplify_degree(d), simplify_both(d)
        assert d3.order == d1.order and d3.degree == 3

    def test_split_needs_embedding(self):
        d2 = simplify_width(k4_shaped())
        with pytest.raises(EmbeddingRequiredError):
            split_degree_four(d2.with_rotation(None))

    def test_reuse_of_width_output(self):
        d = k4_shaped()
        a, b = simplify_both(d), degree_three_from_width(simplify_width(d))
        assert a.graph == b.graph and dict(a.belongs) == dict(b.belongs)


class TestCompact:
    def test_degree_three_node_unchanged(self):
        dc = compact_degree(singleton_decomposition(K4, K4_ROT))
        assert dc.order == 4 and dc.degree == 3

    def test_degree_six_node_becomes_four(self):
        # wheel with six spokes: the hub has degree six
        rim = [f"r{i}" for i in range(6)]
        edges = [("hub", r) for r in rim] + [(rim[i], rim[(i + 1) % 6]) for i in range(6)]
        g = build_graph(["hub", *rim], edges)
        d = singleton_decomposition(g)
        dc = compact_degree(d, compute_embedding=True)
        assert sum(1 for x in dc.graph.vertices if dc.belongs[x] == "hub") == 4
        assert dc.degree == 3
        assert_valid_planar(dc)

    def test_k4_shaped(self):
        dc = compact_degree(k4_shaped())
        assert dc.order <= 16
        assert_valid_planar(dc)


def test_bridge_cells_break_the_origin_chain():
    """Every non-bridge D3 bag sits inside the D1 bag it came from; bridge cells
    pair vertices from both ends of an edge, so they have no D1 origin."""
    d = bridged_instance()
    d1 = simplify_degree(d)
    d3 = simplify_both(d)
    for x in d3.graph.vertices:
        origin = d3.belongs[x]
        if origin.startswith("bridge:"):
            assert origin.removeprefix("bridge:") in d1.graph.vertices
            assert not any(d3.bags[x] <= d1.bags[y] for y in d1.graph.vertices)
            break
    else:
        pytest.fail("expected a bridge cell")


@given(st.integers(1, 25), st.integers(1, 4), st.integers(0, 10**6))
@settings(max_examples=30)
def test_origin_chain_without_bridges(order, k, seed):
    d = random_planar_decomposition(order, k, seed)
    d1 = simplify_degree(d)
    d3 = simplify_both(d)
    if bridge_count(d3):
        return
    for x in d3.graph.vertices:
        origin = d3.belongs[x]
        assert origin in d1.graph.vertices
        assert d3.bags[x] <= d1.bags[origin]


@given(st.integers(1, 30), st.integers(1, 4), st.integers(0, 10**6))
@settings(max_examples=40)
def test_contracts_on_random_inputs(order, k, seed):
    d = random_planar_decomposition(order, k, seed)
    for variant, fn in (("a", simplify_degree), ("c", simplify_both), ("compact", compact_degree)):
        out = fn(d)
        check = check_simplify(variant, d, out)
        assert check.ok, (variant, check.failed())
        assert out.host == d.host
    d2 = simplify_width(d)
    check = check_simplify("b", d, d2)
    for name in ("valid", "embedding", "width", "degree", "per_node", "same_host"):
        assert check.checks[name], name
