"""Simple undirected graphs over string identifiers.

The vertex order given at construction is preserved and doubles as the
fixed linear order used by the wedge construction in :mod:`transforms`.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import MalformedInputError, MissingEdgeError, UnknownVertexError

Edge = tuple[str, str]


def edge_key(u: str, v: str) -> Edge:
    """Canonical form of an unordered pair: smaller identifier first."""
    return (u, v) if u <= v else (v, u)


class Graph:
    """Immutable simple graph.

    ``vertices`` keeps insertion order; ``edges`` is a sorted tuple of
    canonical pairs. Adjacency is precomputed.
    """

    __slots__ = ("_vertices", "_index", "_adj", "_edges")

    def __init__(self, vertices: Sequence[str], adjacency: Mapping[str, frozenset[str]]):
        self._vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self._vertices)}
        self._adj = dict(adjacency)
        self._edges: tuple[Edge, ...] | None = None

    # construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> "Graph":
        return build_graph(vertices, edges)

    # basic queries ------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        if self._edges is None:
            out = set()
            for u, nbrs in self._adj.items():
                for w in nbrs:
                    out.add(edge_key(u, w))
            self._edges = tuple(sorted(out))
        return self._edges

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self)}, |E|={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def neighbors(self, v: str) -> frozenset[str]:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        return u in self._adj and v in self._adj[u]

    def position(self, v: str) -> int:
        """Rank of ``v`` in the fixed vertex order."""
        return self._index[v]

    def adjacency(self) -> dict[str, frozenset[str]]:
        return dict(self._adj)

    # derived graphs -----------------------------------------------------

    def subgraph(self, keep: Iterable[str]) -> "Graph":
        keep = set(keep)
        verts = [v for v in self._vertices if v in keep]
        adj = {v: frozenset(w for w in self._adj[v] if w in keep) for v in verts}
        return Graph(verts, adj)

    def components(self) -> list[list[str]]:
        """Connected components, each listed in vertex order."""
        seen: set[str] = set()
        comps = []
        for s in self._vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        queue.append(y)
            comps.append(sorted(comp, key=self._index.__getitem__))
        return comps

    def is_connected_subset(self, subset: Iterable[str]) -> bool:
        subset = set(subset)
        if not subset:
            return False
        start = next(iter(subset))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y in subset and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(subset)

    def to_json(self) -> dict:
        return {"vertices": list(self._vertices), "edges": [list(e) for e in self.edges]}


def build_graph(vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> Graph:
    """Build a simple graph; duplicate edges collapse, loops are rejected."""
    verts = []
    seen = set()
    for v in vertices:
        if not isinstance(v, str):
            raise MalformedInputError(f"vertex identifiers must be strings, got {v!r}")
        if v in seen:
            raise MalformedInputError(f"duplicate vertex {v!r}")
        seen.add(v)
        verts.append(v)
    adj: dict[str, set[str]] = {v: set() for v in verts}
    for e in edges:
        if len(e) != 2:
            raise MalformedInputError(f"edge {e!r} is not a pair")
        u, w = e
        if u not in adj or w not in adj:
            raise UnknownVertexError(f"edge {u}-{w} has an unknown endpoint")
        if u == w:
            raise MalformedInputError(f"loop at {u!r}")
        adj[u].add(w)
        adj[w].add(u)
    return Graph(verts, {v: frozenset(n) for v, n in adj.items()})


def contract_edge(g: Graph, e: Sequence[str]) -> Graph:
    """Identify the endpoints of ``e``, dropping loops and parallel edges.

    The merged vertex keeps the lexicographically smaller identifier and its
    slot in the vertex order.
    """
    u, w = e
    if not g.has_edge(u, w):
        raise MissingEdgeError(f"{u}-{w} is not an edge")
    keep, gone = edge_key(u, w)
    adj = {}
    for v in g.vertices:
        if v == gone:
            continue
        nbrs = set(g.neighbors(v))
        if gone in nbrs:
            nbrs.discard(gone)
            if v != keep:
                nbrs.add(keep)
        if v == keep:
            nbrs |= g.neighbors(gone)
            nbrs.discard(keep)
            nbrs.discard(gone)
        adj[v] = frozenset(nbrs)
    out = Graph([v for v in g.vertices if v != gone], adj)
    assert all(v not in n for v, n in adj.items()), "contraction produced a loop"
    return out


def delete_vertices(g: Graph, drop: Iterable[str]) -> Graph:
    drop = set(drop)
    return g.subgraph(v for v in g.vertices if v not in drop)


def delete_edge(g: Graph, e: Sequence[str]) -> Graph:
    u, w = e
    if not g.has_edge(u, w):
        raise MissingEdgeError(f"{u}-{w} is not an edge")
    adj = g.adjacency()
    adj[u] = adj[u] - {w}
    adj[w] = adj[w] - {u}
    return Graph(g.vertices, adj)


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


def to_dot(g: Graph, name: str = "G", labels: Mapping[str, str] | None = None) -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        label = labels.get(v, v) if labels else v
        lines.append(f'  "{v}" [label="{label}"];')
    for u, w in g.edges:
        lines.append(f'  "{u}" -- "{w}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# small named families used by tests, generators and the CLI


def complete_graph(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return build_graph(vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]])


def cycle_graph(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return build_graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)] if n > 2 else
                       ([(vs[0], vs[1])] if n == 2 else []))


def path_graph(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return build_graph(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    name = lambda r, c: f"g{r}_{c}"
    vs = [name(r, c) for r in range(rows) for c in range(cols)]
    es = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                es.append((name(r, c), name(r, c + 1)))
            if r + 1 < rows:
                es.append((name(r, c), name(r + 1, c)))
    return build_graph(vs, es)


def complete_bipartite(m: int, n: int) -> Graph:
    left = [f"a{i}" for i in range(1, m + 1)]
    right = [f"b{j}" for j in range(1, n + 1)]
    return build_graph(left + right, [(a, b) for a in left for b in right])


def petersen_graph() -> Graph:
    outer = [f"o{i}" for i in range(5)]
    inner = [f"i{i}" for i in range(5)]
    es = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
    es += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
    es += [(outer[i], inner[i]) for i in range(5)]
    return build_graph(outer + inner, es)
