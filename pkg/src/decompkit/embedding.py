"""Rotation systems, face tracing and planar augmentation.

A rotation lists, for each vertex, its neighbours in clockwise order. Face
tracing follows the rule: after the dart ``u -> v`` comes ``v -> w`` where
``w`` is the successor of ``u`` in the rotation at ``v``. A rotation system
describes a planar embedding exactly when every connected component
satisfies ``V - E + F = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import EmbeddingError
from .graph import Graph, build_graph

Dart = tuple[str, str]


class RotationSystem(Mapping[str, tuple[str, ...]]):
    """Immutable clockwise neighbour order per vertex."""

    __slots__ = ("_rot",)

    def __init__(self, rotation: Mapping[str, Sequence[str]]):
        self._rot = {v: tuple(ns) for v, ns in rotation.items()}

    def __getitem__(self, v: str) -> tuple[str, ...]:
        return self._rot[v]

    def __iter__(self):
        return iter(self._rot)

    def __len__(self) -> int:
        return len(self._rot)

    def __repr__(self) -> str:
        return f"RotationSystem({len(self._rot)} vertices)"

    def successor(self, v: str, u: str) -> str:
        ns = self._rot[v]
        return ns[(ns.index(u) + 1) % len(ns)]

    def to_json(self) -> dict:
        return {"rotation": {v: list(ns) for v, ns in self._rot.items()}}


def check_rotation(g: Graph, r: Mapping[str, Sequence[str]]) -> None:
    """Raise :class:`EmbeddingError` unless ``r`` covers exactly the incidences of ``g``."""
    for v in g.vertices:
        ns = r.get(v, ())
        nbrs = g.neighbors(v)
        if len(ns) != len(nbrs) or nbrs != frozenset(ns):
            if len(ns) != len(set(ns)):
                raise EmbeddingError(f"rotation at {v!r} repeats a neighbour")
            raise EmbeddingError(f"rotation at {v!r} does not match its neighbourhood")
    extra = [v for v in r if v not in g]
    if extra:
        raise EmbeddingError(f"rotation mentions unknown vertices {sorted(extra)}")


def trace_faces(g: Graph, r: Mapping[str, Sequence[str]]) -> list[list[Dart]]:
    """All facial walks; every dart appears in exactly one of them."""
    check_rotation(g, r)
    if isinstance(r, RotationSystem):
        r = r._rot
    succ = {v: dict(zip(ns, ns[1:] + ns[:1])) for v, ns in r.items()}
    seen: set[Dart] = set()
    faces = []
    for u in g.vertices:
        for v in r[u]:
            if (u, v) in seen:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append((a, b))
                a, b = b, succ[b][a]
            faces.append(walk)
    return faces


def _face_counts(g: Graph, r: Mapping[str, Sequence[str]]) -> tuple[list[int], list[int]]:
    """Component label per vertex and face count per component, via dart ids."""
    if isinstance(r, RotationSystem):
        r = r._rot
    verts = g.vertices
    rots = [r[v] for v in verts]
    offset = []
    total = 0
    for ns in rots:
        offset.append(total)
        total += len(ns)
    index = {v: i for i, v in enumerate(verts)}
    where = [dict(zip(ns, range(len(ns)))) for ns in rots]
    # nxt[d] for the dart d = (v -> rot[v][i]) is the dart leaving its head
    nxt = [0] * total
    head = [0] * total
    for vi, ns in enumerate(rots):
        base = offset[vi]
        for i, w in enumerate(ns):
            wi = index[w]
            j = where[wi][verts[vi]]
            nxt[base + i] = offset[wi] + (j + 1) % len(rots[wi])
            head[base + i] = wi
    comp = [-1] * len(verts)
    ncomp = 0
    for s in range(len(verts)):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        stack = [s]
        while stack:
            vi = stack.pop()
            base = offset[vi]
            for d in range(base, base + len(rots[vi])):
                wi = head[d]
                if comp[wi] < 0:
                    comp[wi] = ncomp
                    stack.append(wi)
        ncomp += 1
    faces = [0] * ncomp
    seen = bytearray(total)
    owner = [0] * total
    for vi in range(len(verts)):
        for d in range(offset[vi], offset[vi] + len(rots[vi])):
            owner[d] = vi
    for d0 in range(total):
        if seen[d0]:
            continue
        faces[comp[owner[d0]]] += 1
        d = d0
        while not seen[d]:
            seen[d] = 1
            d = nxt[d]
    return comp, faces


def euler_characteristic_ok(g: Graph, r: Mapping[str, Sequence[str]]) -> bool:
    """Per-component Euler check ``V - E + F == 2`` (genus-0 certificate)."""
    try:
        check_rotation(g, r)
    except EmbeddingError:
        return False
    comp, faces = _face_counts(g, r)
    v_count = [0] * len(faces)
    degree_sum = [0] * len(faces)
    for vi, v in enumerate(g.vertices):
        v_count[comp[vi]] += 1
        degree_sum[comp[vi]] += g.degree(v)
    for c in range(len(faces)):
        e = degree_sum[c] // 2
        f = faces[c] if e else 1
        if v_count[c] - e + f != 2:
            return False
    return True


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    rotation: RotationSystem | None = None
    witness: Graph | None = None  # Kuratowski subgraph when non-planar

    def __bool__(self) -> bool:
        return self.planar


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def test_planarity(g: Graph, witness: bool = False) -> PlanarityResult:
    """Decide planarity; planar verdicts carry an Euler-checked rotation."""
    if len(g) >= 3 and g.num_edges > 3 * len(g) - 6:
        if not witness:
            return PlanarityResult(False)
    planar, emb = nx.check_planarity(_to_nx(g), counterexample=witness)
    if not planar:
        wit = None
        if witness and emb is not None:
            wit = build_graph([v for v in g.vertices if v in emb], list(emb.edges()))
        return PlanarityResult(False, witness=wit)
    rot = RotationSystem({v: list(emb.neighbors_cw_order(v)) for v in g.vertices})
    if not euler_characteristic_ok(g, rot):
        raise EmbeddingError("planarity backend returned an embedding failing the Euler check")
    return PlanarityResult(True, rotation=rot)


# Prevent pytest from collecting the public API function as a test.
test_planarity.__test__ = False


def embed(g: Graph, rotation: Mapping[str, Sequence[str]] | None = None) -> RotationSystem:
    """Return ``rotation`` if it is a valid planar one, else compute one."""
    if rotation is not None:
        if not euler_characteristic_ok(g, rotation):
            raise EmbeddingError("supplied rotation is not a planar embedding")
        return rotation if isinstance(rotation, RotationSystem) else RotationSystem(rotation)
    res = test_planarity(g)
    if not res.planar:
        from .errors import NonPlanarError

        raise NonPlanarError("graph is not planar")
    return res.rotation


@dataclass(frozen=True)
class Augmentation:
    graph: Graph
    rotation: RotationSystem
    added_vertices: tuple[str, ...]
    added_edges: tuple[tuple[str, str], ...]


def _fresh_names(taken: Iterable[str], count: int, prefix: str) -> list[str]:
    taken = set(taken)
    out = []
    i = 1
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return out


def augment_min_degree_3(
    g: Graph, r: Mapping[str, Sequence[str]], pad_prefix: str = "_pad", *, checked: bool = False
) -> Augmentation:
    """Planar supergraph with minimum degree at least 3.

    Graphs that already have minimum degree 3 are returned unchanged.
    Otherwise the graph is padded to four vertices if needed, its components
    are joined by single edges, and every face is triangulated by chords.
    ``checked`` skips re-verifying that ``r`` is planar.
    """
    if not checked and not euler_characteristic_ok(g, r):
        raise EmbeddingError("augmentation requires a planar rotation system")
    if len(g) >= 4 and all(g.degree(v) >= 3 for v in g.vertices):
        return Augmentation(g, RotationSystem(r), (), ())
    return triangulate(g, r, pad_prefix, checked=True)


def triangulate(
    g: Graph, r: Mapping[str, Sequence[str]], pad_prefix: str = "_pad", *, checked: bool = False
) -> Augmentation:
    """Maximal planar supergraph on at least four vertices, extending ``r``."""
    if not checked and not euler_characteristic_ok(g, r):
        raise EmbeddingError("triangulation requires a planar rotation system")

    pads = _fresh_names(g.vertices, max(0, 4 - len(g)), pad_prefix)
    verts = list(g.vertices) + pads
    rot = {v: list(r.get(v, ())) for v in g.vertices}
    for p in pads:
        rot[p] = []
    adj = {v: set(rot[v]) for v in verts}
    added: list[tuple[str, str]] = []

    def link(a: str, b: str) -> None:
        adj[a].add(b)
        adj[b].add(a)
        added.append((a, b) if a <= b else (b, a))

    # join components at arbitrary corners; planarity is preserved
    comps = build_graph(verts, [(a, b) for a in verts for b in adj[a] if a < b]).components()
    hub = comps[0][0]
    for comp in comps[1:]:
        other = comp[0]
        rot[hub].append(other)
        rot[other].append(hub)
        link(hub, other)

    cur = build_graph(verts, [(a, b) for a in verts for b in adj[a] if a < b])
    faces = [[d[0] for d in walk] for walk in trace_faces(cur, rot)]
    while faces:
        walk = faces.pop()
        m = len(walk)
        if m <= 3:
            continue
        chord = None
        for i in range(m):
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue
                a, b = walk[i], walk[j]
                if a != b and b not in adj[a]:
                    chord = (i, j)
                    break
            if chord:
                break
        if chord is None:
            raise EmbeddingError("face admits no chord; input is not a simple plane graph")
        i, j = chord
        a, b = walk[i], walk[j]
        ra, rb = rot[a], rot[b]
        ra.insert(ra.index(walk[(i + 1) % m]), b)
        rb.insert(rb.index(walk[(j + 1) % m]), a)
        link(a, b)
        faces.append([a] + walk[j:] + walk[:i])
        faces.append([b] + walk[i:j])

    out = build_graph(verts, [(a, b) for a in verts for b in adj[a] if a < b])
    rs = RotationSystem(rot)
    if not euler_characteristic_ok(out, rs):
        raise EmbeddingError("augmentation broke planarity")  # pragma: no cover
    return Augmentation(out, rs, tuple(pads), tuple(added))
