import unittest

from hypothesis import given, strategies as st

from decompkit.errors import MalformedInputError, MissingEdgeError, UnknownVertexError
from decompkit.graph import (
    build_graph,
    complete_bipartite,
    complete_graph,
    contract_edge,
    delete_edge,
    delete_vertices,
    edge_key,
    grid_graph,
    max_degree,
    path_graph,
    to_dot,
)
from decompkit.realizer import minor_search_small


class BuildGraph(unittest.TestCase):
    def test_duplicate_edges_collapse(self):
        g = build_graph("abc", [("a", "b"), ("b", "c"), ("c", "a"), ("a", "b")])
        self.assertEqual(g.num_edges, 3)
        self.assertEqual(set(g.edges), {("a", "b"), ("b", "c"), ("a", "c")})

    def test_single_vertex(self):
        g = build_graph(["a"], [])
        self.assertEqual(len(g), 1)
        self.assertEqual(max_degree(g), 0)

    def test_loop_rejected(self):
        with self.assertRaises(MalformedInputError):
            build_graph("ab", [("a", "a")])

    def test_unknown_endpoint(self):
        with self.assertRaises(UnknownVertexError):
            build_graph("ab", [("a", "z")])

    def test_duplicate_vertex(self):
        with self.assertRaises(MalformedInputError):
            build_graph(["a", "a"], [])

    def test_edges_stored_smaller_first(self):
        g = build_graph(["b", "a"], [("b", "a")])
        self.assertEqual(g.edges, (("a", "b"),))
        self.assertEqual(g.to_json(), {"vertices": ["b", "a"], "edges": [["a", "b"]]})

    def test_input_order_is_kept(self):
        g = build_graph(["z", "y", "x"], [])
        self.assertEqual(g.vertices, ("z", "y", "x"))
        self.assertEqual(g.position("x"), 2)


class Contraction(unittest.TestCase):
    def test_triangle_to_edge(self):
        g = contract_edge(complete_graph(3, ""), ("1", "2"))
        self.assertEqual(g.vertices, ("1", "3"))
        self.assertEqual(g.edges, (("1", "3"),))

    def test_path(self):
        g = build_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
        h = contract_edge(g, ("c", "b"))
        self.assertEqual(h.vertices, ("a", "b", "d"))
        self.assertEqual(set(h.edges), {("a", "b"), ("b", "d")})

    def test_k4_any_edge_gives_k3(self):
        k4 = complete_graph(4)
        for e in k4.edges:
            h = contract_edge(k4, e)
            self.assertEqual(len(h), 3)
            self.assertEqual(h.num_edges, 3)

    def test_missing_edge(self):
        with self.assertRaises(MissingEdgeError):
            contract_edge(path_graph(3), ("v1", "v3"))


class Degrees(unittest.TestCase):
    def test_values(self):
        self.assertEqual(max_degree(complete_graph(4)), 3)
        self.assertEqual(max_degree(complete_bipartite(1, 5)), 5)
        self.assertEqual(max_degree(build_graph("abc", [])), 0)


def test_grid_size():
    g = grid_graph(3, 3)
    assert len(g) == 9 and g.num_edges == 12


def test_delete_edge_and_vertices():
    g = complete_graph(4)
    h = delete_edge(g, ("v2", "v1"))
    assert not h.has_edge("v1", "v2") and h.num_edges == 5
    h = delete_vertices(g, ["v1"])
    assert h.vertices == ("v2", "v3", "v4") and h.num_edges == 3


def test_components_and_connected_subsets():
    g = build_graph("abcde", [("a", "b"), ("c", "d")])
    assert g.components() == [["a", "b"], ["c", "d"], ["e"]]
    assert g.is_connected_subset({"a", "b"})
    assert not g.is_connected_subset({"a", "c"})


def test_dot_export_lists_every_edge():
    text = to_dot(complete_graph(3))
    assert text.startswith("graph G {")
    assert text.count("--") == 3


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    vs = [f"v{i}" for i in range(n)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    es = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(vs, es)


@given(small_graphs(), st.data())
def test_minor_operations_yield_minors(g, data):
    h = g
    for _ in range(data.draw(st.integers(0, 3))):
        if h.num_edges and data.draw(st.booleans()):
            e = data.draw(st.sampled_from(h.edges))
            h = contract_edge(h, e)
            # simple: no loops, symmetric adjacency
            assert all(v not in h.neighbors(v) for v in h)
            assert all(v in h.neighbors(w) for v in h for w in h.neighbors(v))
        elif len(h) > 1:
            h = delete_vertices(h, [data.draw(st.sampled_from(h.vertices))])
    assert minor_search_small(h, g) is not None


@given(small_graphs())
def test_edge_key_is_canonical(g):
    for u, w in g.edges:
        assert edge_key(w, u) == (u, w) and u < w
