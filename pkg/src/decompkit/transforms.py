"""Transformations of planar decompositions.

* :func:`compose` and :func:`lift_decomposition` push a decomposition of a
  decomposition (or of a graph containing a minor) down to the base graph.
* :func:`simplify_degree` replaces every bag by a cycle of copies (degree 3).
* :func:`simplify_width` replaces every copy by a triangular wedge of bags of
  size at most 2 (degree 4).
* :func:`simplify_both` splits the degree-4 wedge bags (degree 3, width 2).
* :func:`compact_degree` replaces a degree-``d`` bag by a path of ``d - 2``
  copies of degree 3.

All of them construct the rotation system of their output explicitly, so
planarity is certified by the Euler check instead of being re-tested.
"""

from __future__ import annotations

from collections import defaultdict
from math import comb
from typing import Iterable, Mapping, Sequence

from .decomposition import Decomposition, MinorModel, minor_to_decomposition, require_valid
from .embedding import RotationSystem, augment_min_degree_3, test_planarity
from .errors import CompositionMismatchError, EmbeddingRequiredError, NonPlanarError
from .graph import Graph, build_graph, edge_key

PAD_PREFIX = "_pad"


# --- composition ---------------------------------------------------------


def compose(d: Decomposition, j: Decomposition) -> Decomposition:
    """Decomposition of ``d.host`` shaped like ``j.graph``.

    ``j`` must decompose the graph of ``d``; the bag of a node of ``j`` is the
    union of the ``d``-bags it lists. Width is at most ``width(d) * width(j)``.
    """
    if set(j.host.vertices) != set(d.graph.vertices) or set(j.host.edges) != set(d.graph.edges):
        raise CompositionMismatchError("outer decomposition is not over the inner decomposition graph")
    require_valid(d)
    require_valid(j)
    bags = {}
    for y in j.graph.vertices:
        contents: set[str] = set()
        for x in j.bags[y]:
            contents |= d.bags[x]
        bags[y] = frozenset(contents)
    return Decomposition(d.host, bags, j.graph, j.rotation, "compose")


def lift_decomposition(m: MinorModel, j: Decomposition) -> Decomposition:
    """Decomposition of ``m.pattern`` shaped like ``j``, for ``j`` a decomposition of ``m.host``."""
    inner = minor_to_decomposition(m)
    out = compose(inner, j)
    return Decomposition(out.host, out.bags, out.graph, out.rotation, "lift")


# --- shared preprocessing ------------------------------------------------


class _Prepared:
    """A valid decomposition with a planar embedding, augmented to min degree 3."""

    def __init__(self, d: Decomposition, compute_embedding: bool):
        require_valid(d)
        rot = d.rotation
        if rot is None:
            if not compute_embedding:
                raise EmbeddingRequiredError("decomposition has no embedding")
            res = test_planarity(d.graph)
            if not res.planar:
                raise NonPlanarError("decomposition graph is not planar")
            rot = res.rotation
        aug = augment_min_degree_3(d.graph, rot, pad_prefix=PAD_PREFIX, checked=True)
        self.source = d
        self.graph: Graph = aug.graph
        self.rot: Mapping[str, tuple[str, ...]] = aug.rotation
        self.bags = dict(d.bags)
        for p in aug.added_vertices:
            self.bags[p] = frozenset()
        self.pads = aug.added_vertices
        self.added_edges = aug.added_edges

    def info(self, variant: str) -> dict:
        return {
            "variant": variant,
            "input_order": self.source.order,
            "input_edges": self.source.graph.num_edges,
            "augmented_order": len(self.graph),
            "augmented_edges": self.graph.num_edges,
            "width": self.source.width,
        }

    def nxt(self, x: str, y: str) -> str:
        ns = self.rot[x]
        return ns[(ns.index(y) + 1) % len(ns)]

    def prv(self, x: str, y: str) -> str:
        ns = self.rot[x]
        return ns[(ns.index(y) - 1) % len(ns)]


def _finish(host: Graph, order: list[str], bags, rot, provenance, belongs, info) -> Decomposition:
    adj = {x: frozenset(rot[x]) for x in order}
    for x, ns in adj.items():
        for y in ns:
            if x not in adj[y]:
                raise AssertionError(f"asymmetric rotation between {x} and {y}")  # pragma: no cover
    graph = Graph(order, adj)
    return Decomposition(host, bags, graph, RotationSystem(rot), provenance, belongs, info)


# --- Simplify (a) --------------------------------------------------------


def d1_node(x: str, y: str) -> str:
    """Copy of bag ``x`` sitting on the decomposition edge towards ``y``."""
    return f"{x}|{y}"


def simplify_degree(d: Decomposition, *, compute_embedding: bool = False) -> Decomposition:
    """Replace each bag by a cycle of copies, one per incident edge.

    Output: width unchanged, maximum degree 3, order twice the number of
    edges of the augmented decomposition graph.
    """
    p = _Prepared(d, compute_embedding)
    order, bags, rot, belongs = [], {}, {}, {}
    for x in p.graph.vertices:
        for y in p.rot[x]:
            node = d1_node(x, y)
            order.append(node)
            bags[node] = p.bags[x]
            belongs[node] = x
            # clockwise: previous copy, the copy across the edge, next copy
            rot[node] = [d1_node(x, p.prv(x, y)), d1_node(y, x), d1_node(x, p.nxt(x, y))]
    return _finish(d.host, order, bags, rot, "simplify-a", belongs, p.info("a"))


# --- Simplify (b) --------------------------------------------------------


def _rank_function(host: Graph, vertex_order: Sequence[str] | None):
    if vertex_order is None:
        return host.position
    rank = {v: i for i, v in enumerate(vertex_order)}
    missing = [v for v in host.vertices if v not in rank]
    if missing:
        raise ValueError(f"vertex order misses {missing[:3]}")
    return rank.__getitem__


def _tail_function(arcs: Iterable[Sequence[str]] | None):
    given = {}
    for a, b in arcs or ():
        given[edge_key(a, b)] = a

    def tail(x: str, y: str) -> str:
        return given.get(edge_key(x, y), min(x, y))

    return tail


def cell_id(x: str, y: str, i: int, j: int) -> str:
    return f"{x}|{y}|{i}.{j}"


def bridge_id(t: str, h: str, i: int, j: int) -> str:
    return f"{t}|{h}|b{i}.{j}"


def _link_chain(n_x: int, n_y: int, reqs: Iterable[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """Links across one edge ``XY`` that witness every requirement, or None.

    A link ``(i, j)`` joins ``{x_1, x_i}`` on the ``X`` side to ``{y_1, y_j}``
    on the ``Y`` side; links stay planar when they form a chain strictly
    increasing in both coordinates. A requirement ``(p, q)`` asks that the
    vertex at position ``p`` of ``X`` touch the one at position ``q`` of
    ``Y``. Since row 1 of a wedge holds ``x_1`` in every cell, ``(1, q)``
    only pins the column, ``(p, 1)`` only the row, and ``(1, 1)`` asks for
    any link; ``(p, q)`` with both above 1 forces the link ``(p, q)``.
    Any equally long lists of rows and columns zip into a chain, so
    between consecutive forced links the free requirements fit exactly
    when their count fits the box between them.
    """
    reqs = set(reqs)
    forced = sorted((p, q) for p, q in reqs if p > 1 and q > 1)
    rows = {p for p, q in reqs if q == 1 and p > 1} - {p for p, _ in forced}
    cols = {q for p, q in reqs if p == 1 and q > 1} - {q for _, q in forced}
    bounds = [(0, 0), *forced, (n_x + 1, n_y + 1)]
    chain: list[tuple[int, int]] = []
    for (a1, b1), (a2, b2) in zip(bounds, bounds[1:]):
        if a2 <= a1 or b2 <= b1:
            return None
        rr = sorted(r for r in rows if a1 < r < a2)
        cc = sorted(c for c in cols if b1 < c < b2)
        size = max(len(rr), len(cc))
        if size > min(a2 - a1 - 1, b2 - b1 - 1):
            return None
        rr = sorted(rr + [r for r in range(a1 + 1, a2) if r not in rr][: size - len(rr)])
        cc = sorted(cc + [c for c in range(b1 + 1, b2) if c not in cc][: size - len(cc)])
        chain += zip(rr, cc)
        if (a2, b2) != bounds[-1]:
            chain.append((a2, b2))
    if not chain and (1, 1) in reqs:
        chain.append((1, 1))
    return chain


def _covers(chain: Iterable[tuple[int, int]], p: int, q: int) -> bool:
    return any((p == 1 or p == i) and (q == 1 or q == j) for i, j in chain)


def _plan_links(p: _Prepared, sorted_bags: Mapping[str, list[str]]):
    """Choose cross links and, where links cannot help, bridges.

    Every decomposition edge must witness its shared vertices. Each host
    edge whose ends share no bag is assigned to an incident decomposition
    edge whose links can witness it too, or failing that to a bridge grid
    on the incident edge where it adds the fewest bags. Returns
    ``(links, needs)``: link pairs per unbridged edge and, per bridged
    edge, the host vertices each side contributes to its grid.
    """
    host = p.source.host
    pos = {x: {v: i + 1 for i, v in enumerate(vs)} for x, vs in sorted_bags.items()}
    dims = {x: len(vs) for x, vs in sorted_bags.items()}
    reqs: dict[tuple[str, str], list[tuple[int, int]]] = {}
    chains: dict[tuple[str, str], list[tuple[int, int]]] = {}
    for x, y in p.graph.edges:
        reqs[(x, y)] = [(pos[x][v], pos[y][v]) for v in p.bags[x] & p.bags[y]]
        chain = _link_chain(dims[x], dims[y], reqs[(x, y)])
        assert chain is not None, "shared vertices appear in the same order on both sides"
        chains[(x, y)] = chain

    contains: dict[str, list[str]] = defaultdict(list)
    for x in p.graph.vertices:
        for v in p.bags[x]:
            contains[v].append(x)

    def ends_on(key, a, b):
        x, y = key
        return (pos[x][a], pos[y][b]) if a in pos[x] else (pos[x][b], pos[y][a])

    # host edges witnessed by links, per decomposition edge
    witnessed: dict[tuple[str, str], list[tuple[str, str]]] = defaultdict(list)
    stuck = []
    for a, b in host.edges:
        xs = contains[a]
        if any(b in p.bags[x] for x in xs):
            continue
        cands = sorted(edge_key(x, y) for x in xs for y in p.graph.neighbors(x) if b in p.bags[y])
        # prefer an edge whose links already witness the pair
        order = sorted(cands, key=lambda key: not _covers(chains[key], *ends_on(key, a, b)))
        for key in order:
            req = ends_on(key, a, b)
            chain = _link_chain(dims[key[0]], dims[key[1]], reqs[key] + [req])
            if chain is not None:
                reqs[key].append(req)
                chains[key] = chain
                witnessed[key].append((a, b))
                break
        else:
            stuck.append((a, b, cands))

    needs: dict[tuple[str, str], dict[str, set[str]]] = {}

    def sides_with(key, extra):
        x, y = key
        sides = needs.get(key)
        cur = {x: set(sides[x]) if sides else set(), y: set(sides[y]) if sides else set()}
        if not sides:
            for a, b in witnessed.get(key, ()):
                ax, by = (a, b) if a in p.bags[x] else (b, a)
                cur[x].add(ax)
                cur[y].add(by)
        for a, b in extra:
            ax, by = (a, b) if a in p.bags[x] else (b, a)
            cur[x].add(ax)
            cur[y].add(by)
        return cur

    def size(key, sides) -> int:
        common = p.bags[key[0]] & p.bags[key[1]]
        return len(sides[key[0]] | common) * len(sides[key[1]] | common)

    for a, b, cands in stuck:
        def cost(key):
            before = size(key, needs[key]) if key in needs else 0
            return size(key, sides_with(key, [(a, b)])) - before

        key = min(cands, key=lambda k: (cost(k), k))
        needs[key] = sides_with(key, [(a, b)])
        chains.pop(key, None)

    links = {}
    for key, chain in chains.items():
        # keep the adjacency of the copies across every edge when nothing else is linked
        if not chain and sorted_bags[key[0]] and sorted_bags[key[1]]:
            chain = [(1, 1)]
        links[key] = chain
    return links, needs


def _build_d2(p: _Prepared, rank, tail):
    sorted_bags = {x: sorted(p.bags[x], key=rank) for x in p.graph.vertices}
    pos = {x: {v: i + 1 for i, v in enumerate(vs)} for x, vs in sorted_bags.items()}
    links, needs = _plan_links(p, sorted_bags)

    order: list[str] = []
    bags: dict[str, frozenset[str]] = {}
    rot: dict[str, list[str]] = {}
    belongs: dict[str, str] = {}
    cross: dict[str, str] = {}  # row-1 wedge cell -> node across the edge

    # bridges between tail row 1 and head row 1
    for key, sides in needs.items():
        x, y = key
        t = tail(x, y)
        h = y if t == x else x
        common = p.bags[t] & p.bags[h]
        cols = sorted((pos[t][v] for v in sides[t] | common), reverse=True)
        rows = sorted(pos[h][v] for v in sides[h] | common)
        tv, hv = sorted_bags[t], sorted_bags[h]
        for r, jj in enumerate(rows):
            for c, ii in enumerate(cols):
                node = bridge_id(t, h, ii, jj)
                order.append(node)
                bags[node] = frozenset({tv[ii - 1], hv[jj - 1]})
                belongs[node] = f"bridge:{d1_node(t, h)}"
                up = bridge_id(t, h, ii, rows[r - 1]) if r > 0 else cell_id(t, h, 1, ii)
                right = bridge_id(t, h, cols[c + 1], jj) if c + 1 < len(cols) else cell_id(h, t, 1, jj)
                down = bridge_id(t, h, ii, rows[r + 1]) if r + 1 < len(rows) else None
                left = bridge_id(t, h, cols[c - 1], jj) if c > 0 else None
                rot[node] = [s for s in (up, right, down, left) if s is not None]
        for ii in cols:
            cross[cell_id(t, h, 1, ii)] = bridge_id(t, h, ii, rows[0])
        for jj in rows:
            cross[cell_id(h, t, 1, jj)] = bridge_id(t, h, cols[-1], jj)

    # direct links across edges without a bridge
    for (x, y), chain in links.items():
        for i, j in chain:
            a, b = cell_id(x, y, 1, i), cell_id(y, x, 1, j)
            cross[a] = b
            cross[b] = a

    def link_cell(x: str, y: str, i: int, k: int, facing_next: bool) -> str:
        # the cell of wedge (x, y) holding row i's link to a neighbouring wedge
        out = tail(x, y) == x
        diagonal = out != facing_next
        return cell_id(x, y, i, i if diagonal else k)

    for x in p.graph.vertices:
        vs = sorted_bags[x]
        k = len(vs)
        for y in p.rot[x]:
            out = tail(x, y) == x
            nxt, prv = p.nxt(x, y), p.prv(x, y)
            d1 = d1_node(x, y)
            for i in range(1, k + 1):
                for j in range(i, k + 1):
                    node = cell_id(x, y, i, j)
                    order.append(node)
                    bags[node] = frozenset({vs[i - 1], vs[j - 1]})
                    belongs[node] = d1
                    up = cell_id(x, y, i + 1, j) if i + 1 <= j else None
                    down = cell_id(x, y, i - 1, j) if i >= 2 else cross.get(node)
                    toward_diag = cell_id(x, y, i, j - 1) if j - 1 >= i else None
                    toward_last = cell_id(x, y, i, j + 1) if j + 1 <= k else None
                    if out:
                        right = toward_diag or link_cell(x, prv, i, k, facing_next=True)
                        left = toward_last or link_cell(x, nxt, i, k, facing_next=False)
                    else:
                        left = toward_diag or link_cell(x, nxt, i, k, facing_next=False)
                        right = toward_last or link_cell(x, prv, i, k, facing_next=True)
                    rot[node] = [s for s in (up, right, down, left) if s is not None]
    return order, bags, rot, belongs


def simplify_width(
    d: Decomposition,
    *,
    vertex_order: Sequence[str] | None = None,
    orientation: Iterable[Sequence[str]] | None = None,
    compute_embedding: bool = False,
) -> Decomposition:
    """Replace every bag copy by a wedge of bags of size at most 2.

    ``vertex_order`` fixes the linear order on host vertices (default: host
    order); ``orientation`` lists arcs ``(tail, head)`` for decomposition
    edges (default: smaller node id is the tail).
    """
    p = _Prepared(d, compute_embedding)
    order, bags, rot, belongs = _build_d2(p, _rank_function(d.host, vertex_order), _tail_function(orientation))
    info = p.info("b")
    return _finish(d.host, order, bags, rot, "simplify-b", belongs, info)


# --- Simplify (c) --------------------------------------------------------


def split_degree_four(d2: Decomposition, provenance: str = "simplify-c") -> Decomposition:
    """Split each degree-4 node ``X`` with clockwise neighbours ``Y1..Y4``
    into ``X#1 ~ {Y1, Y2}`` and ``X#2 ~ {Y3, Y4}``, adjacent to each other."""
    if d2.rotation is None:
        raise EmbeddingRequiredError("splitting needs the embedding of its input")
    rot = {x: list(ns) for x, ns in d2.rotation.items()}
    bags = dict(d2.bags)
    belongs = {}
    order = []
    for x in d2.graph.vertices:
        ns = rot[x]
        if len(ns) != 4:
            order.append(x)
            belongs[x] = x
            continue
        x1, x2 = f"{x}#1", f"{x}#2"
        y1, y2, y3, y4 = ns
        for y, new in ((y1, x1), (y2, x1), (y3, x2), (y4, x2)):
            ry = rot[y]
            ry[ry.index(x)] = new
        del rot[x]
        rot[x1] = [y1, y2, x2]
        rot[x2] = [y3, y4, x1]
        bags[x1] = bags[x2] = bags.pop(x)
        belongs[x1] = belongs[x2] = x
        order += [x1, x2]
    info = dict(d2.info or {})
    info["variant"] = "c"
    return _finish(d2.host, order, bags, rot, provenance, belongs, info)


def simplify_both(
    d: Decomposition,
    *,
    vertex_order: Sequence[str] | None = None,
    orientation: Iterable[Sequence[str]] | None = None,
    compute_embedding: bool = False,
) -> Decomposition:
    """Width 2 and degree 3: :func:`simplify_width` followed by degree-4 splits."""
    d2 = simplify_width(d, vertex_order=vertex_order, orientation=orientation, compute_embedding=compute_embedding)
    return degree_three_from_width(d2)


def degree_three_from_width(d2: Decomposition) -> Decomposition:
    """Split a :func:`simplify_width` output; nodes keep their D1 origin in ``belongs``."""
    d3 = split_degree_four(d2)
    belongs = {x: d2.belongs[src] for x, src in d3.belongs.items()}
    return Decomposition(d3.host, d3.bags, d3.graph, d3.rotation, "simplify-c", belongs, d3.info)


# --- compact degree-3 variant ---------------------------------------------


def compact_degree(d: Decomposition, *, compute_embedding: bool = False) -> Decomposition:
    """Replace each bag of degree ``d`` by a path of ``d - 2`` copies of degree 3."""
    p = _Prepared(d, compute_embedding)

    def copy(x: str, t: int) -> str:
        return f"{x}~{t}"

    def copy_towards(x: str, y: str) -> str:
        ns = p.rot[x]
        deg = len(ns)
        s = ns.index(y) + 1
        if s <= 2:
            return copy(x, 1)
        if s >= deg - 1:
            return copy(x, deg - 2)
        return copy(x, s - 1)

    order, bags, rot, belongs = [], {}, {}, {}
    for x in p.graph.vertices:
        ns = p.rot[x]
        deg = len(ns)
        cs = [copy(x, t) for t in range(1, deg - 1)]
        for c in cs:
            order.append(c)
            bags[c] = p.bags[x]
            belongs[c] = x
        far = [copy_towards(y, x) for y in ns]
        if deg == 3:
            rot[cs[0]] = far
            continue
        rot[cs[0]] = [far[0], far[1], cs[1]]
        for t in range(1, deg - 3):
            rot[cs[t]] = [far[t + 1], cs[t + 1], cs[t - 1]]
        rot[cs[-1]] = [far[deg - 2], far[deg - 1], cs[-2]]
    return _finish(d.host, order, bags, rot, "compact", belongs, p.info("compact"))


# --- bookkeeping used by tests and reports --------------------------------


def wedge_size(k: int) -> int:
    return comb(k + 1, 2)


def count_by_origin(d: Decomposition, skip_bridges: bool = True) -> dict[str, int]:
    counts: dict[str, int] = defaultdict(int)
    for x in d.graph.vertices:
        origin = d.belongs[x]
        if skip_bridges and origin.startswith("bridge:"):
            continue
        counts[origin] += 1
    return dict(counts)


def bridge_count(d: Decomposition) -> int:
    return sum(1 for x in d.graph.vertices if d.belongs[x].startswith("bridge:"))
