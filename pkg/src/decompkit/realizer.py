"""Realizers: graphs containing the host as a minor, with their minor models.

:func:`expand_to_realizer` blows every bag up into a clique of copies;
:func:`reduce_realizer` trims a realizer against a drawing of it; and
:func:`minor_search_small` is an exhaustive minor test used as an oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .decomposition import (
    Decomposition,
    MinorModel,
    find_witness,
    make_minor_model,
    require_valid,
    verify_minor_model,
)
from .drawing import PlanarizedDrawing, require_valid_drawing
from .errors import InstanceTooLargeError, MalformedInputError
from .graph import Edge, Graph, build_graph, edge_key
from .planwork import PlanWork

__all__ = [
    "Realizer",
    "branch_tree_edges",
    "copy_id",
    "expand_to_realizer",
    "minor_search_small",
    "reduce_realizer",
    "verify_minor_model",
]


@dataclass(frozen=True, eq=False)
class Realizer:
    expanded: Graph
    model: MinorModel
    source: str = "expansion"

    def to_json(self) -> dict:
        return {"graph": self.expanded.to_json(), "model": self.model.to_json(), "source": self.source}


def copy_id(v: str, node: str) -> str:
    return f"{v}@{node}"


def expand_to_realizer(d: Decomposition) -> tuple[Realizer, Decomposition]:
    """Replace each bag by its copies: one vertex per (host vertex, node) incidence.

    Two copies are adjacent when their nodes coincide or are adjacent. The
    copies of ``v`` form its branch set; the returned decomposition of the
    expanded graph has the same shape and width as ``d``.
    """
    require_valid(d)
    host = d.host
    copies: dict[str, list[str]] = {}
    verts: list[str] = []
    for x in d.graph.vertices:
        cs = [copy_id(v, x) for v in sorted(d.bags[x], key=host.position)]
        copies[x] = cs
        verts += cs
    edges = []
    for x in d.graph.vertices:
        cs = copies[x]
        edges += [(cs[i], cs[j]) for i in range(len(cs)) for j in range(i + 1, len(cs))]
    for x, y in d.graph.edges:
        edges += [(a, b) for a in copies[x] for b in copies[y]]
    expanded = build_graph(verts, edges)
    bsets = {v: [] for v in host.vertices}
    for x in d.graph.vertices:
        for v in d.bags[x]:
            bsets[v].append(copy_id(v, x))
    model = make_minor_model(host, expanded, bsets)
    jd = Decomposition(
        expanded,
        {x: frozenset(copies[x]) for x in d.graph.vertices},
        d.graph,
        d.rotation,
        "expansion",
    )
    return Realizer(expanded, model, "expansion"), jd


def branch_tree_edges(m: MinorModel) -> dict[str, list[Edge]]:
    """Breadth-first spanning tree of each branch set, rooted at its first vertex."""
    out = {}
    for v in m.pattern.vertices:
        bs = m.branch_sets[v]
        if not bs:
            out[v] = []
            continue
        root = min(bs, key=m.host.position)
        seen = {root}
        queue = deque([root])
        tree = []
        while queue:
            x = queue.popleft()
            for y in sorted(m.host.neighbors(x), key=m.host.position):
                if y in bs and y not in seen:
                    seen.add(y)
                    tree.append(edge_key(x, y))
                    queue.append(y)
        out[v] = tree
    return out


def reduce_realizer(r: Realizer, drw: PlanarizedDrawing) -> tuple[Realizer, PlanarizedDrawing]:
    """Trim a realizer against a drawing of it.

    Vertices in no branch set are deleted with their edges, as are edges
    joining branch sets of non-adjacent pattern vertices. Then, while some
    edge inside a branch set is drawn without crossings, the
    lexicographically first such edge is contracted. No step adds crossings.
    """
    require_valid_drawing(drw)
    if set(drw.base.vertices) != set(r.expanded.vertices) or set(drw.base.edges) != set(r.expanded.edges):
        raise MalformedInputError("drawing is not a drawing of the realizer graph")
    rep = verify_minor_model(r.model)
    if not rep.valid:
        raise MalformedInputError("; ".join(rep.problems))
    owner = r.model.owner()
    work = PlanWork(drw)
    for v in list(work.base_vertices):
        if v not in owner:
            work.delete_vertex(v)
    pattern = r.model.pattern
    for a, b in work.base_edges():
        if owner[a] != owner[b] and not pattern.has_edge(owner[a], owner[b]):
            work.delete_route((a, b))
    work.normalize()
    while True:
        key = next(
            (
                e
                for e in work.base_edges()
                if owner[e[0]] == owner[e[1]] and len(work.route[e]) == 1
            ),
            None,
        )
        if key is None:
            break
        work.contract(key)
    out = work.to_drawing()
    alive = set(out.base.vertices)
    bsets = {v: frozenset(x for x in bs if x in alive) for v, bs in r.model.branch_sets.items()}
    wits = {}
    for a, b in r.model.pattern.edges:
        w = find_witness(out.base, bsets[a], bsets[b])
        if w is not None:
            wits[(a, b)] = w
    model = MinorModel(r.model.pattern, out.base, bsets, wits)
    return Realizer(out.base, model, "reduced"), out


# --- exhaustive minor search ------------------------------------------------


def _connected_sets(adj: list[int], free: int, must_touch: int, size: int) -> Iterator[int]:
    """Connected subsets of ``free`` with exactly ``size`` vertices meeting ``must_touch``.

    Each set is generated once, from its lowest vertex inside ``must_touch``.
    """
    roots = free & must_touch
    while roots:
        low = roots & -roots
        roots ^= low
        root = low.bit_length() - 1
        # vertices of must_touch below the root are excluded to avoid repeats
        allowed = free & ~((low - 1) & must_touch)

        def grow(cur: int, frontier: int, banned: int) -> Iterator[int]:
            if cur.bit_count() == size:
                yield cur
                return
            cand = frontier & ~banned
            while cand:
                bit = cand & -cand
                cand ^= bit
                i = bit.bit_length() - 1
                banned |= bit
                yield from grow(cur | bit, (frontier | adj[i]) & allowed & ~cur & ~bit, banned)

        yield from grow(low, adj[root] & allowed & ~low, low)


def minor_search_small(
    pattern: Graph, host: Graph, *, max_pattern: int | None = 8, max_host: int | None = 16
) -> MinorModel | None:
    """Exhaustive search for a minor model of ``pattern`` in ``host``.

    Pattern vertices are placed one by one (neighbours of placed vertices
    first); each receives a connected set of unused host vertices, smallest
    sets first, touching the sets of its placed neighbours. Returns the
    first model found, or ``None`` if none exists.
    """
    if max_pattern is not None and len(pattern) > max_pattern:
        raise InstanceTooLargeError(f"pattern has {len(pattern)} > {max_pattern} vertices")
    if max_host is not None and len(host) > max_host:
        raise InstanceTooLargeError(f"host has {len(host)} > {max_host} vertices")
    p, n = len(pattern), len(host)
    if p == 0:
        return make_minor_model(pattern, host, {})
    if p > n or pattern.num_edges > host.num_edges:
        return None
    hv = list(host.vertices)
    hidx = {v: i for i, v in enumerate(hv)}
    adj = [0] * n
    for a, b in host.edges:
        adj[hidx[a]] |= 1 << hidx[b]
        adj[hidx[b]] |= 1 << hidx[a]
    full = (1 << n) - 1

    # placement order: breadth-first from high degree, so later vertices are constrained
    order: list[str] = []
    left = set(pattern.vertices)
    while left:
        start = max(sorted(left, key=pattern.position), key=pattern.degree)
        queue = deque([start])
        left.discard(start)
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(pattern.neighbors(x), key=lambda y: (-pattern.degree(y), pattern.position(y))):
                if y in left:
                    left.discard(y)
                    queue.append(y)
    rank = {x: i for i, x in enumerate(order)}
    placed_nbrs = [[y for y in pattern.neighbors(x) if rank[y] < i] for i, x in enumerate(order)]
    # unplaced neighbours of order[j] once the first i vertices are placed
    pending = [[sum(1 for y in pattern.neighbors(x) if rank[y] >= i) for x in order] for i in range(p + 1)]
    sets: dict[str, int] = {}

    def nbhd(mask: int) -> int:
        out = 0
        m = mask
        while m:
            bit = m & -m
            m ^= bit
            out |= adj[bit.bit_length() - 1]
        return out & ~mask

    def solve(i: int, used: int) -> bool:
        if i == p:
            return True
        x = order[i]
        free = full & ~used
        spare = free.bit_count() - (p - i - 1)
        need = [sets[y] for y in placed_nbrs[i]]
        touch = free
        reach = [nbhd(s) for s in need]
        if reach:
            touch &= reach[0]
        for size in range(1, spare + 1):
            for s in _connected_sets(adj, free, touch, size):
                if any(not (s & r) for r in reach[1:]):
                    continue
                # every placed set still needs a free neighbour per unplaced pattern neighbour
                rest = free & ~s
                if (nbhd(s) & rest).bit_count() < pending[i + 1][i]:
                    continue
                if any(
                    pending[i + 1][j] and (nbhd(sets[order[j]]) & rest).bit_count() < pending[i + 1][j]
                    for j in range(i)
                ):
                    continue
                sets[x] = s
                if solve(i + 1, used | s):
                    return True
                del sets[x]
        return False

    if not solve(0, 0):
        return None
    bsets = {x: [hv[i] for i in range(n) if sets[x] >> i & 1] for x in pattern.vertices}
    model = make_minor_model(pattern, host, bsets)
    assert verify_minor_model(model).valid
    return model
