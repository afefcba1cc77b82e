import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decompkit.decomposition import (
    MinorModel,
    extract_minor_model,
    make_decomposition,
    make_minor_model,
    metrics,
    minor_to_decomposition,
    require_valid,
    singleton_decomposition,
    validate_decomposition,
    verify_minor_model,
)
from decompkit.errors import InvalidDecompositionError, ModelViolationError, UnknownVertexError, WidthViolationError
from decompkit.generators import random_planar_decomposition
from decompkit.graph import build_graph, complete_graph, cycle_graph

from helpers import K4, k4_two_bags
from oracles import brute_valid
from suite import corrupt

K3 = build_graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
P3 = build_graph("abc", [("a", "b"), ("b", "c")])


def test_one_bag_triangle():
    d = make_decomposition(K3, {"X": "abc"})
    rep = validate_decomposition(d)
    assert rep.valid and rep.planar
    assert (d.width, d.order) == (3, 1)


def test_empty_middle_vertex_reported():
    d = make_decomposition(P3, {"X": "a", "Y": "c"}, [("X", "Y")])
    rep = validate_decomposition(d)
    assert not rep.valid
    assert rep.vertex_nonempty["b"] is False
    assert "D(b) is empty" in rep.problems


def test_k4_two_bags_valid_via_touching():
    rep = validate_decomposition(k4_two_bags())
    assert rep.valid
    assert rep.edge_touch[("a", "d")] and rep.edge_touch[("b", "d")]


def test_disconnected_vertex_set():
    g = build_graph("ab", [])
    d = make_decomposition(g, {"X": "a", "Y": "b", "Z": "a"}, [("X", "Y"), ("Y", "Z")])
    assert "D(a) is disconnected" in validate_decomposition(d).problems


def test_untouched_edge():
    g = build_graph("ab", [("a", "b")])
    d = make_decomposition(g, {"X": "a", "Y": "b"})
    assert validate_decomposition(d).problems == ["D(a) and D(b) do not touch"]


def test_unknown_vertex_is_named():
    with pytest.raises(UnknownVertexError, match="'q'"):
        make_decomposition(K3, {"X": ["a", "b", "c", "q"]})


def test_nonplanar_decomposition_is_still_valid_but_flagged():
    k5 = complete_graph(5)
    d = make_decomposition(build_graph(["a"], []), {x: "a" for x in k5.vertices}, k5.edges)
    rep = validate_decomposition(d)
    assert rep.valid and rep.planar is False and not rep.valid_planar


def test_bad_rotation_invalidates():
    d = make_decomposition(K3, {"X": "abc", "Y": "a", "Z": "a", "W": "a"},
                           [("X", "Y"), ("X", "Z"), ("X", "W"), ("Y", "Z"), ("Y", "W"), ("Z", "W")],
                           {"X": ["Y", "Z", "W"], "Y": ["X", "Z", "W"], "Z": ["X", "Y", "W"], "W": ["X", "Y", "Z"]})
    rep = validate_decomposition(d)
    assert rep.embedding_ok is False and not rep.valid


class TestMetrics:
    def test_single_bag(self):
        m = metrics(make_decomposition(K3, {"X": "abc"}))
        assert (m.width, m.order, m.degree, m.planar) == (3, 1, 0, True)

    def test_repeated_bags(self):
        g = build_graph(["a"], [])
        m = metrics(make_decomposition(g, {"X": "a", "Y": "a", "Z": "a"}, [("X", "Y"), ("Y", "Z"), ("X", "Z")]))
        assert (m.width, m.order, m.degree, m.planar) == (1, 3, 2, True)

    def test_k4_example(self):
        m = metrics(k4_two_bags())
        assert (m.width, m.order, m.degree, m.planar) == (3, 2, 1, True)


def test_require_valid_raises():
    with pytest.raises(InvalidDecompositionError):
        require_valid(make_decomposition(P3, {"X": "a", "Y": "c"}, [("X", "Y")]))


class TestMinorModels:
    def identity(self, g):
        return make_minor_model(g, g, {v: [v] for v in g.vertices})

    def test_identity_valid(self):
        assert verify_minor_model(self.identity(K4)).valid

    def test_overlap(self):
        m = make_minor_model(K3, K4, {"a": "ab", "b": "b", "c": "c"})
        assert not verify_minor_model(m).disjoint

    def test_missing_witness_named(self):
        m = self.identity(K4)
        wits = dict(m.witnesses)
        del wits[("a", "c")]
        rep = verify_minor_model(MinorModel(m.pattern, m.host, m.branch_sets, wits))
        assert rep.problems == ["witness: pattern edge a-c has no witness"]

    def test_identity_to_decomposition(self):
        d = minor_to_decomposition(self.identity(K4))
        assert d.graph == K4 and all(d.bags[v] == {v} for v in K4.vertices)

    def test_c4_in_c8(self):
        c4, c8 = cycle_graph(4, "u"), cycle_graph(8, "w")
        m = make_minor_model(c4, c8, {f"u{i}": [f"w{2 * i - 1}", f"w{2 * i}"] for i in range(1, 5)})
        d = minor_to_decomposition(m)
        assert validate_decomposition(d).valid and d.width == 1 and d.order == 8
        back = extract_minor_model(d)
        assert all(len(bs) == 2 for bs in back.branch_sets.values())
        assert verify_minor_model(back).valid

    def test_unused_host_vertex_gets_empty_bag(self):
        host = build_graph(list(complete_graph(5).vertices) + ["spare"], list(complete_graph(5).edges) + [("v1", "spare")])
        k5 = complete_graph(5)
        d = minor_to_decomposition(make_minor_model(k5, host, {v: [v] for v in k5.vertices}))
        assert d.bags["spare"] == frozenset() and validate_decomposition(d).valid

    def test_round_trip_identity(self):
        m = self.identity(K4)
        back = extract_minor_model(minor_to_decomposition(m))
        assert dict(back.branch_sets) == dict(m.branch_sets)

    def test_extract_rejects_width_two(self):
        with pytest.raises(WidthViolationError):
            extract_minor_model(k4_two_bags())

    def test_invalid_model_rejected(self):
        m = make_minor_model(K3, K4, {"a": "ab", "b": "b", "c": "c"})
        with pytest.raises(ModelViolationError):
            minor_to_decomposition(m)


@st.composite
def minor_models(draw):
    """Random valid models: contract random connected groups of a random host."""
    n = draw(st.integers(2, 10))
    rng = np.random.default_rng(draw(st.integers(0, 10**6)))
    vs = [f"h{i}" for i in range(n)]
    es = {(vs[int(rng.integers(i))], vs[i]) for i in range(1, n)}
    for _ in range(int(rng.integers(0, n))):
        a, b = rng.choice(n, 2, replace=False)
        es.add((vs[min(a, b)], vs[max(a, b)]))
    host = build_graph(vs, es)
    # grow branch sets along a spanning tree
    groups: dict[str, list[str]] = {}
    owner = {}
    for v in vs:
        nbr = [w for w in host.neighbors(v) if w in owner]
        if nbr and rng.random() < 0.4:
            owner[v] = owner[nbr[0]]
        elif len(groups) < 8:
            owner[v] = f"p{len(groups)}"
        else:
            continue
        groups.setdefault(owner[v], []).append(v)
    pattern_edges = {tuple(sorted((owner[a], owner[b]))) for a, b in host.edges
                     if a in owner and b in owner and owner[a] != owner[b]}
    keep = [e for e in sorted(pattern_edges) if rng.random() < 0.8]
    pattern = build_graph(sorted(groups), keep)
    return make_minor_model(pattern, host, groups)


@given(minor_models())
def test_minor_round_trip(m):
    assert verify_minor_model(m).valid
    d = minor_to_decomposition(m)
    assert d.width <= 1 and validate_decomposition(d).valid
    back = extract_minor_model(d)
    assert {v: set(bs) for v, bs in back.branch_sets.items()} == {v: set(bs) for v, bs in m.branch_sets.items()}


def test_validator_agrees_with_brute_force_oracle():
    rng = np.random.default_rng(2024)
    verdicts = {True: 0, False: 0}
    for i in range(1000):
        base = random_planar_decomposition(int(rng.integers(1, 13)), int(rng.integers(1, 5)), rng=rng)
        if i % 2 == 0:
            host, bags, dedges = base.host, {x: set(b) for x, b in base.bags.items()}, list(base.graph.edges)
        else:
            host, bags, dedges = corrupt(base, rng)
        d = make_decomposition(host, bags, dedges)
        assert d.order <= 12
        mine = validate_decomposition(d, check_planarity=False).valid
        oracle = brute_valid(host.vertices, host.edges, bags, dedges)
        assert mine == oracle, (i, bags, dedges, host.edges)
        verdicts[oracle] += 1
    # the corrupted half must really exercise the invalid branch
    assert verdicts[False] >= 150 and verdicts[True] >= 500


@given(st.integers(1, 40), st.integers(1, 5), st.integers(0, 10**6))
@settings(max_examples=40)
def test_generator_output_is_valid_and_embedded(order, k, seed):
    d = random_planar_decomposition(order, k, seed)
    rep = validate_decomposition(d, check_planarity=False)
    assert rep.valid and rep.embedding_ok and d.width <= k and d.order == order


def test_generator_is_deterministic():
    a = random_planar_decomposition(30, 3, 11)
    b = random_planar_decomposition(30, 3, 11)
    assert a.graph == b.graph and dict(a.bags) == dict(b.bags) and a.host == b.host


def test_singleton_decomposition():
    d = singleton_decomposition(K4)
    assert validate_decomposition(d).valid and d.width == 1 and d.graph == K4
