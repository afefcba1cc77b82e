"""Small fixed instances used across test modules."""

from decompkit.decomposition import Decomposition, make_decomposition
from decompkit.graph import Graph, build_graph, complete_graph

K4 = build_graph("abcd", [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")])
K4_ROT = {"a": ["b", "c", "d"], "b": ["a", "d", "c"], "c": ["a", "b", "d"], "d": ["a", "c", "b"]}


def k4_two_bags() -> Decomposition:
    return make_decomposition(K4, {"X": "abc", "Y": "cd"}, [("X", "Y")])


def k4_shaped() -> Decomposition:
    """Four bags of size 2 on a K4-shaped decomposition graph, embedded."""
    bags = {"X": "ab", "Y": "bc", "Z": "cd", "W": "da"}
    edges = [("X", "Y"), ("X", "Z"), ("X", "W"), ("Y", "Z"), ("Y", "W"), ("Z", "W")]
    rot = {"X": ["Y", "Z", "W"], "Y": ["X", "W", "Z"], "Z": ["X", "Y", "W"], "W": ["X", "Z", "Y"]}
    return make_decomposition(K4, bags, edges, rot)


def graph_from_nx(h) -> Graph:
    names = {v: f"n{v}" for v in h.nodes}
    return build_graph([names[v] for v in h.nodes], [(names[a], names[b]) for a, b in h.edges])


__all__ = ["K4", "K4_ROT", "k4_two_bags", "k4_shaped", "graph_from_nx", "complete_graph"]
