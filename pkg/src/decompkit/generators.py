"""Deterministic instance families for tests, benchmarks and the CLI."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .decomposition import Decomposition
from .embedding import RotationSystem, euler_characteristic_ok
from .graph import Graph, build_graph, complete_bipartite, grid_graph

__all__ = [
    "complete_bipartite",
    "grid_graph",
    "random_planar_decomposition",
    "random_triangulation",
]


def random_triangulation(order: int, rng: np.random.Generator, prefix: str = "X") -> tuple[Graph, RotationSystem]:
    """Delaunay triangulation of random points with its clockwise rotation."""
    names = [f"{prefix}{i}" for i in range(order)]
    if order <= 2:
        edges = [(names[0], names[1])] if order == 2 else []
        g = build_graph(names, edges)
        return g, RotationSystem({v: sorted(g.neighbors(v)) for v in names})
    pts = rng.random((order, 2))
    tri = Delaunay(pts)
    adj: dict[int, set[int]] = {i: set() for i in range(order)}
    for simplex in tri.simplices:
        for a in range(3):
            for b in range(a + 1, 3):
                u, w = int(simplex[a]), int(simplex[b])
                adj[u].add(w)
                adj[w].add(u)
    rot = {}
    for i in range(order):
        ns = sorted(adj[i], key=lambda j: np.arctan2(pts[j, 1] - pts[i, 1], pts[j, 0] - pts[i, 0]), reverse=True)
        rot[names[i]] = [names[j] for j in ns]
    g = build_graph(names, [(names[a], names[b]) for a in adj for b in adj[a] if a < b])
    rs = RotationSystem(rot)
    assert euler_characteristic_ok(g, rs)
    return g, rs


def random_planar_decomposition(
    order: int,
    k: int,
    seed: int | None = None,
    *,
    vertex_budget: int | None = None,
    p_shared: float = 0.5,
    p_cross: float = 0.1,
    rng: np.random.Generator | None = None,
) -> Decomposition:
    """A valid embedded planar decomposition of width at most ``k``.

    The decomposition graph is a random triangulation. Host vertices occupy
    random connected sets of nodes subject to the width cap; host edges are
    sampled among pairs that share a bag (probability ``p_shared``) or lie
    in adjacent bags (probability ``p_cross``).
    """
    if order < 1 or k < 1:
        raise ValueError("order and k must be positive")
    rng = rng if rng is not None else np.random.default_rng(seed)
    dgraph, rot = random_triangulation(order, rng)
    nodes = list(dgraph.vertices)
    load = {x: 0 for x in nodes}
    members: dict[str, list[str]] = {x: [] for x in nodes}
    budget = vertex_budget if vertex_budget is not None else int(rng.integers(1, max(2, order * k // 2) + 1))
    host_vertices: list[str] = []
    attempts = 0
    while len(host_vertices) < budget and attempts < 4 * budget + 10:
        attempts += 1
        free = [x for x in nodes if load[x] < k]
        if not free:
            break
        seed_node = free[int(rng.integers(len(free)))]
        size = int(rng.integers(1, 5))
        region = [seed_node]
        frontier = [y for y in sorted(dgraph.neighbors(seed_node)) if load[y] < k]
        while len(region) < size and frontier:
            y = frontier.pop(int(rng.integers(len(frontier))))
            if y in region:
                continue
            region.append(y)
            frontier += [z for z in sorted(dgraph.neighbors(y)) if load[z] < k and z not in region]
        v = f"h{len(host_vertices)}"
        host_vertices.append(v)
        for x in region:
            load[x] += 1
            members[x].append(v)
    if not host_vertices:
        host_vertices.append("h0")
        members[nodes[0]].append("h0")

    edges = set()
    for x in nodes:
        ms = members[x]
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                if rng.random() < p_shared:
                    edges.add(tuple(sorted((ms[i], ms[j]))))
    for x, y in dgraph.edges:
        for a in members[x]:
            for b in members[y]:
                if a != b and rng.random() < p_cross:
                    edges.add(tuple(sorted((a, b))))
    host = build_graph(host_vertices, sorted(edges))
    bags = {x: frozenset(members[x]) for x in nodes}
    return Decomposition(host, bags, dgraph, rot, "random")
