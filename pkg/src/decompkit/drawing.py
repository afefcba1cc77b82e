"""Planarized drawings, crossing counts and drawing-to-decomposition conversion.

A drawing of a graph ``G`` is stored by its planarization: a plane graph in
which every crossing point is a vertex of degree 4. Each edge ``vw`` of ``G``
has a route, a path from ``v`` to ``w`` whose interior vertices are
crossings. At every crossing the two routes use opposite pairs of the four
incident edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import atan2, ceil
from typing import Mapping, Sequence

import numpy as np

from .decomposition import Decomposition, validate_decomposition
from .embedding import RotationSystem, check_rotation, euler_characteristic_ok
from .errors import EmbeddingError, InvalidDrawingError, MalformedInputError
from .graph import Edge, Graph, build_graph, complete_graph, edge_key

Point = tuple[float, float]


@dataclass(frozen=True, eq=False)
class PlanarizedDrawing:
    base: Graph
    plan: Graph
    rotation: RotationSystem
    # crossing vertex -> the two opposite neighbour pairs routes pass through
    crossings: Mapping[str, tuple[tuple[str, str], tuple[str, str]]]
    # canonical base edge -> plan vertices from edge[0] to edge[1]
    routes: Mapping[Edge, tuple[str, ...]]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "plan": self.plan.to_json(),
            "rotation": {v: list(ns) for v, ns in self.rotation.items()},
            "crossings": {x: {"pairs": [list(p) for p in pairs]} for x, pairs in self.crossings.items()},
            "routes": {f"{a}-{b}": list(r) for (a, b), r in self.routes.items()},
        }


@dataclass
class DrawingReport:
    problems: list[tuple[str, str]] = field(default_factory=list)

    def add(self, kind: str, detail: str) -> None:
        self.problems.append((kind, detail))

    @property
    def valid(self) -> bool:
        return not self.problems

    @property
    def kinds(self) -> set[str]:
        return {k for k, _ in self.problems}

    def to_json(self) -> dict:
        return {"valid": self.valid, "problems": [f"{k}: {d}" for k, d in self.problems]}


def _opposite(rot: Sequence[str], a: str, b: str) -> bool:
    return len(rot) == 4 and a in rot and b in rot and (rot.index(a) - rot.index(b)) % 4 == 2


def validate_drawing(drw: PlanarizedDrawing) -> DrawingReport:
    """Check every structural invariant of a planarized drawing."""
    rep = DrawingReport()
    base, plan = drw.base, drw.plan
    cross = set(drw.crossings)
    for v in base.vertices:
        if v not in plan:
            rep.add("vertices", f"base vertex {v} missing from the planarization")
    for x in plan.vertices:
        if x not in cross and x not in base:
            rep.add("vertices", f"plan vertex {x} is neither a base vertex nor a crossing")
    for x in cross:
        if x in base:
            rep.add("vertices", f"crossing {x} is also a base vertex")
        if x not in plan:
            rep.add("vertices", f"crossing {x} is not a plan vertex")

    try:
        check_rotation(plan, drw.rotation)
        if not euler_characteristic_ok(plan, drw.rotation):
            rep.add("planarity", "rotation system fails the Euler check")
    except EmbeddingError as exc:
        rep.add("planarity", str(exc))

    for x, pairs in drw.crossings.items():
        if x not in plan:
            continue
        if plan.degree(x) != 4:
            rep.add("degree", f"crossing {x} has degree {plan.degree(x)}")
            continue
        flat = [v for p in pairs for v in p]
        if len(pairs) != 2 or sorted(flat) != sorted(plan.neighbors(x)):
            rep.add("pairs", f"pairs at {x} do not partition its neighbours")
            continue
        rot = drw.rotation.get(x, ())
        for a, b in pairs:
            if not _opposite(rot, a, b):
                rep.add("pairs", f"{a} and {b} are not opposite at {x}")

    if set(drw.routes) != set(base.edges):
        rep.add("routes", "routes do not correspond one-to-one with base edges")
    used: dict[Edge, Edge] = {}
    through: dict[str, list[tuple[Edge, tuple[str, str]]]] = {x: [] for x in cross}
    for key, route in drw.routes.items():
        if len(route) < 2 or (route[0], route[-1]) != key:
            rep.add("routes", f"route of {key[0]}-{key[1]} has wrong endpoints")
            continue
        if len(set(route)) != len(route):
            rep.add("routes", f"route of {key[0]}-{key[1]} repeats a vertex")
        for i in range(len(route) - 1):
            a, b = route[i], route[i + 1]
            if not plan.has_edge(a, b):
                rep.add("routes", f"route of {key[0]}-{key[1]} uses non-edge {a}-{b}")
                continue
            e = edge_key(a, b)
            if e in used:
                rep.add("coverage", f"plan edge {a}-{b} lies on two routes")
            used[e] = key
        for i in range(1, len(route) - 1):
            x = route[i]
            if x not in cross:
                rep.add("routes", f"route of {key[0]}-{key[1]} passes through non-crossing {x}")
                continue
            through[x].append((key, (route[i - 1], route[i + 1])))
    for e in plan.edges:
        if e not in used:
            rep.add("coverage", f"plan edge {e[0]}-{e[1]} lies on no route")
    for x, passes in through.items():
        if len(passes) != 2:
            rep.add("crossing-routes", f"crossing {x} is interior to {len(passes)} routes")
            continue
        pairs = {frozenset(p) for p in drw.crossings.get(x, ())}
        used_pairs = [frozenset(p) for _, p in passes]
        if any(p not in pairs for p in used_pairs) or used_pairs[0] == used_pairs[1]:
            rep.add("crossing-routes", f"routes through {x} do not follow its opposite pairs")
    return rep


def require_valid_drawing(drw: PlanarizedDrawing) -> None:
    rep = validate_drawing(drw)
    if not rep.valid:
        raise InvalidDrawingError("; ".join(f"{k}: {d}" for k, d in rep.problems))


def crossing_count(drw: PlanarizedDrawing) -> int:
    require_valid_drawing(drw)
    return len(drw.crossings)


def drawing_to_decomposition(drw: PlanarizedDrawing) -> Decomposition:
    """Width-2 planar decomposition of the base graph shaped like the planarization.

    A base vertex node holds itself. Along the route of ``vw`` (listed from
    ``v``) the first ``ceil(t/2)`` of its ``t`` crossings receive ``v`` and the
    rest receive ``w``.
    """
    require_valid_drawing(drw)
    bags: dict[str, set[str]] = {x: set() for x in drw.plan.vertices}
    for v in drw.base.vertices:
        bags[v].add(v)
    for (v, w), route in drw.routes.items():
        inner = route[1:-1]
        split = ceil(len(inner) / 2)
        for i, x in enumerate(inner):
            bags[x].add(v if i < split else w)
    info = {"crossings": len(drw.crossings), "base_order": len(drw.base)}
    return Decomposition(
        drw.base,
        {x: frozenset(b) for x, b in bags.items()},
        drw.plan,
        drw.rotation,
        "drawing",
        info=info,
    )


# --- construction from straight-line positions ----------------------------


def _segment_crossings(pts: np.ndarray, edges: list[Edge], index: dict[str, int]) -> list[tuple[int, int, float, float]]:
    """Proper crossings between segments without common endpoints.

    Returns ``(i, j, s, t)`` with the crossing at parameter ``s`` on edge ``i``
    and ``t`` on edge ``j``. Touching or overlapping segments raise.
    """
    if not edges:
        return []
    a = np.array([pts[index[u]] for u, _ in edges])
    b = np.array([pts[index[w]] for _, w in edges])
    ends = np.array([[index[u], index[w]] for u, w in edges])
    d = b - a
    # vertices on a non-incident edge (this also catches overlapping collinear edges)
    scale = max(1.0, float(np.abs(pts).max()))
    tol = 1e-9 * scale
    length2 = (d**2).sum(axis=1)
    for i in range(len(edges)):
        rel = pts - a[i]
        s_par = rel @ d[i] / length2[i]
        dist = np.abs(rel[:, 0] * d[i][1] - rel[:, 1] * d[i][0]) / np.sqrt(length2[i])
        on = (dist <= tol) & (s_par > -1e-12) & (s_par < 1 + 1e-12)
        on[ends[i]] = False
        if on.any():
            raise MalformedInputError("positions are not in general position (vertex on an edge)")
    out = []
    eps = 1e-12
    for i in range(len(edges) - 1):
        p, r = a[i], d[i]
        q, s = a[i + 1:], d[i + 1:]
        denom = r[0] * s[:, 1] - r[1] * s[:, 0]
        qp = q - p
        t_num = qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]
        u_num = qp[:, 0] * r[1] - qp[:, 1] * r[0]
        shared = (ends[i + 1:] == ends[i, 0]).any(axis=1) | (ends[i + 1:] == ends[i, 1]).any(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(denom) > eps, t_num / denom, -1.0)
            u = np.where(np.abs(denom) > eps, u_num / denom, -1.0)
        hit = (t > eps) & (t < 1 - eps) & (u > eps) & (u < 1 - eps) & ~shared
        near = ((np.abs(t) <= 1e-9) | (np.abs(t - 1) <= 1e-9) | (np.abs(u) <= 1e-9) | (np.abs(u - 1) <= 1e-9))
        near &= (t >= -1e-9) & (t <= 1 + 1e-9) & (u >= -1e-9) & (u <= 1 + 1e-9) & ~shared & (np.abs(denom) > eps)
        if near.any():
            raise MalformedInputError("positions are not in general position (vertex on an edge)")
        for off in np.nonzero(hit)[0]:
            out.append((i, i + 1 + int(off), float(t[off]), float(u[off])))
    return out


def straight_line_drawing(g: Graph, pos: Mapping[str, Point], prefix: str = "x") -> PlanarizedDrawing:
    """Planarization of the straight-line drawing of ``g`` at ``pos``.

    Crossing vertices are named ``{prefix}1, {prefix}2, ...`` in order of the
    edge pairs that create them. Positions must be in general position.
    """
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    pts = np.array([pos[v] for v in verts], dtype=float).reshape(len(verts), 2)
    if len(np.unique(pts, axis=0)) < len(pts):
        raise MalformedInputError("two vertices share a position")
    edges = list(g.edges)
    hits = _segment_crossings(pts, edges, index)
    taken = set(verts)
    names = []
    i = 1
    while len(names) < len(hits):
        if f"{prefix}{i}" not in taken:
            names.append(f"{prefix}{i}")
        i += 1
    point: dict[str, Point] = {v: (float(pts[index[v], 0]), float(pts[index[v], 1])) for v in verts}
    on_edge: dict[int, list[tuple[float, str]]] = {k: [] for k in range(len(edges))}
    for name, (ei, ej, s, t) in zip(names, hits):
        (u, w) = edges[ei]
        pu, pw = point[u], point[w]
        point[name] = (pu[0] + s * (pw[0] - pu[0]), pu[1] + s * (pw[1] - pu[1]))
        on_edge[ei].append((s, name))
        on_edge[ej].append((t, name))
    routes: dict[Edge, tuple[str, ...]] = {}
    plan_edges = []
    for k, (u, w) in enumerate(edges):
        route = (u, *[name for _, name in sorted(on_edge[k])], w)
        routes[(u, w)] = route
        plan_edges += list(zip(route, route[1:]))
    plan = build_graph(verts + names, plan_edges)
    if plan.num_edges != len(plan_edges):
        raise MalformedInputError("positions are not in general position (overlapping pieces)")

    def clockwise(x: str) -> list[str]:
        px = point[x]
        return sorted(plan.neighbors(x), key=lambda y: atan2(point[y][1] - px[1], point[y][0] - px[0]), reverse=True)

    rotation = RotationSystem({x: clockwise(x) for x in plan.vertices})
    crossings = {}
    for name in names:
        passes = []
        for key, route in routes.items():
            if name in route[1:-1]:
                i = route.index(name)
                passes.append((route[i - 1], route[i + 1]))
        crossings[name] = (passes[0], passes[1])
    return PlanarizedDrawing(g, plan, rotation, crossings, routes)


def identity_drawing(g: Graph, rotation: Mapping[str, Sequence[str]]) -> PlanarizedDrawing:
    """Crossing-free drawing of a plane graph given by its rotation system."""
    if not euler_characteristic_ok(g, rotation):
        raise EmbeddingError("rotation is not a planar embedding")
    rs = rotation if isinstance(rotation, RotationSystem) else RotationSystem(rotation)
    return PlanarizedDrawing(g, g, rs, {}, {e: e for e in g.edges})


def k5_one_crossing() -> PlanarizedDrawing:
    """``K5`` on ``v1..v5`` with a single crossing ``x1`` of ``v1v3`` and ``v2v4``.

    The square ``v1 v2 v3 v4`` surrounds ``x1``; ``v5`` sits outside.
    """
    base = complete_graph(5)
    plan_edges = [("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")]
    plan_edges += [(f"v{i}", "x1") for i in range(1, 5)] + [(f"v{i}", "v5") for i in range(1, 5)]
    plan = build_graph(list(base.vertices) + ["x1"], plan_edges)
    # v1 top, v2 right, v3 bottom, v4 left; v5 reached around the outside
    rotation = RotationSystem({
        "v1": ["v5", "v2", "x1", "v4"],
        "v2": ["v5", "v3", "x1", "v1"],
        "v3": ["v5", "v4", "x1", "v2"],
        "v4": ["v5", "v1", "x1", "v3"],
        "v5": ["v4", "v3", "v2", "v1"],
        "x1": ["v1", "v2", "v3", "v4"],
    })
    routes = {e: e for e in base.edges}
    routes[("v1", "v3")] = ("v1", "x1", "v3")
    routes[("v2", "v4")] = ("v2", "x1", "v4")
    return PlanarizedDrawing(base, plan, rotation, {"x1": (("v1", "v3"), ("v2", "v4"))}, routes)


def random_drawing(
    rng: np.random.Generator,
    max_vertices: int = 30,
    max_crossings: int = 10,
    prefix: str = "v",
) -> PlanarizedDrawing:
    """Straight-line drawing of a random graph with bounded crossing count.

    Starts from a Delaunay triangulation of random points, deletes a random
    share of its edges and adds random chords while the crossing count stays
    within ``max_crossings``.
    """
    from scipy.spatial import Delaunay

    n = int(rng.integers(1, max_vertices + 1))
    names = [f"{prefix}{i}" for i in range(n)]
    pts = rng.random((n, 2))
    pos = {names[i]: (float(pts[i, 0]), float(pts[i, 1])) for i in range(n)}
    edges: set[Edge] = set()
    if n == 2:
        edges.add(edge_key(names[0], names[1]))
    elif n >= 3:
        for simplex in Delaunay(pts).simplices:
            for a in range(3):
                for b in range(a + 1, 3):
                    edges.add(edge_key(names[int(simplex[a])], names[int(simplex[b])]))
    edges = {e for e in sorted(edges) if rng.random() < 0.7}
    target = int(rng.integers(0, max_crossings + 1))
    index = {v: i for i, v in enumerate(names)}
    count = 0
    for _ in range(4 * n):
        if count >= target or n < 4:
            break
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        e = edge_key(names[a], names[b])
        if e in edges:
            continue
        trial = sorted(edges | {e})
        c = len(_segment_crossings(pts, trial, index))
        if c <= max_crossings:
            edges.add(e)
            count = c
    g = build_graph(names, sorted(edges))
    return straight_line_drawing(g, pos)


def tutte_layout(g: Graph, rotation: Mapping[str, Sequence[str]]) -> dict[str, Point]:
    """Barycentric straight-line layout of a plane graph.

    The graph is first triangulated (extra vertices are dropped from the
    result); one triangular face is pinned and every other vertex sits at
    the average of its neighbours.
    """
    from .embedding import trace_faces, triangulate

    if len(g) == 0:
        return {}
    tri = triangulate(g, rotation, pad_prefix="_lay")
    h = tri.graph
    outer = [a for a, _ in trace_faces(h, tri.rotation)[0]]
    verts = list(h.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = np.zeros((n, n))
    rhs = np.zeros((n, 2))
    corners = {outer[0]: (0.0, 0.0), outer[1]: (1.0, 0.0), outer[2]: (0.5, 0.866)}
    for v in verts:
        i = idx[v]
        if v in corners:
            lap[i, i] = 1.0
            rhs[i] = corners[v]
            continue
        lap[i, i] = h.degree(v)
        for w in h.neighbors(v):
            lap[i, idx[w]] -= 1.0
    sol = np.linalg.solve(lap, rhs)
    return {v: (float(sol[idx[v], 0]), float(sol[idx[v], 1])) for v in g.vertices}


def layout_drawing(d: Decomposition, rng: np.random.Generator) -> PlanarizedDrawing:
    """Straight-line drawing of ``d.host`` clustered by the shape of ``d``.

    Nodes of ``d`` get a barycentric layout; the host vertices of each bag
    sit on a small jittered circle around their node. Every host vertex
    must lie in exactly one bag, as in an expanded realizer.
    """
    where: dict[str, str] = {}
    for x in d.graph.vertices:
        for v in d.bags[x]:
            if v in where:
                raise MalformedInputError(f"host vertex {v} lies in several bags")
            where[v] = x
    missing = [v for v in d.host.vertices if v not in where]
    if missing:
        raise MalformedInputError(f"host vertex {missing[0]} lies in no bag")
    if d.rotation is not None:
        rot = d.rotation
    else:
        from .embedding import embed

        rot = embed(d.graph)
    centre = tutte_layout(d.graph, rot)
    pts = np.array([centre[x] for x in d.graph.vertices])
    reach = {}
    for i, x in enumerate(d.graph.vertices):
        gaps = np.sqrt(((pts - pts[i]) ** 2).sum(axis=1))
        gaps[i] = np.inf
        reach[x] = float(gaps.min()) if len(pts) > 1 else 1.0
    pos: dict[str, Point] = {}
    for x in d.graph.vertices:
        members = sorted(d.bags[x], key=d.host.position)
        cx, cy = centre[x]
        radius = 0.25 * reach[x]
        phase = float(rng.random()) * 2 * np.pi
        for i, v in enumerate(members):
            ang = phase + 2 * np.pi * i / len(members) + float(rng.normal(0, 0.05))
            r = radius * (1 + float(rng.normal(0, 0.05))) if len(members) > 1 else 0.0
            jx, jy = rng.normal(0, 0.01 * radius, size=2)
            pos[v] = (cx + r * np.cos(ang) + float(jx), cy + r * np.sin(ang) + float(jy))
    return straight_line_drawing(d.host, pos)


def mcr_certificate_pipeline(g: Graph, r, drw: PlanarizedDrawing) -> Decomposition:
    """Trim the realizer, convert its drawing, and lift the result to ``g``.

    Output: a planar decomposition of ``g`` of width at most 2 whose order is
    the reduced realizer order plus the reduced crossing count.
    """
    from .realizer import reduce_realizer
    from .transforms import lift_decomposition

    if set(r.model.pattern.vertices) != set(g.vertices) or set(r.model.pattern.edges) != set(g.edges):
        raise MalformedInputError("realizer does not model the given graph")
    reduced, rdrw = reduce_realizer(r, drw)
    j = drawing_to_decomposition(rdrw)
    out = lift_decomposition(reduced.model, j)
    info = {
        "reduced_order": len(reduced.expanded),
        "crossings": len(rdrw.crossings),
        "host_order": len(g),
    }
    result = Decomposition(out.host, out.bags, out.graph, out.rotation, "mcr-pipeline", info=info)
    assert validate_decomposition(result, check_planarity=False).valid
    return result
