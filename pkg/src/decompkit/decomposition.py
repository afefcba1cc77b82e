"""Graph decompositions, their validity checker and metrics, and minor models.

A decomposition of a host graph ``G`` is a graph ``D`` whose nodes carry
bags (subsets of ``V(G)``) such that for every host vertex ``v`` the nodes
containing ``v`` induce a nonempty connected subgraph ``D(v)``, and for every
host edge ``vw`` the subgraphs ``D(v)`` and ``D(w)`` touch: they share a node
or some edge of ``D`` joins a node of one to a node of the other.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .embedding import RotationSystem, check_rotation, euler_characteristic_ok, test_planarity
from .errors import EmbeddingError, InvalidDecompositionError, MalformedInputError, ModelViolationError, UnknownVertexError, WidthViolationError
from .graph import Edge, Graph, build_graph, edge_key


@dataclass(frozen=True, eq=False)
class Decomposition:
    host: Graph
    bags: Mapping[str, frozenset[str]]
    graph: Graph
    rotation: RotationSystem | None = None
    provenance: str | None = None
    # node -> node id of the bag it was copied from, for transform outputs
    belongs: Mapping[str, str] | None = None
    info: Mapping | None = None

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def order(self) -> int:
        return len(self.graph)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0)

    @property
    def degree(self) -> int:
        return max((self.graph.degree(x) for x in self.graph.vertices), default=0)

    def nodes_containing(self) -> dict[str, list[str]]:
        index: dict[str, list[str]] = {v: [] for v in self.host.vertices}
        for x in self.graph.vertices:
            for v in self.bags[x]:
                index[v].append(x)
        return index

    def with_rotation(self, rotation: RotationSystem | None) -> "Decomposition":
        return Decomposition(self.host, self.bags, self.graph, rotation, self.provenance, self.belongs, self.info)


def make_decomposition(
    host: Graph,
    bags: Mapping[str, Iterable[str]] | Sequence[tuple[str, Iterable[str]]],
    bag_edges: Iterable[Sequence[str]] = (),
    rotation: Mapping[str, Sequence[str]] | None = None,
    provenance: str | None = None,
    belongs: Mapping[str, str] | None = None,
) -> Decomposition:
    """Assemble a decomposition, rejecting bags that mention unknown vertices."""
    items = list(bags.items()) if isinstance(bags, Mapping) else list(bags)
    ids = [x for x, _ in items]
    if len(ids) != len(set(ids)):
        raise MalformedInputError("duplicate bag identifiers")
    frozen = {}
    for x, contents in items:
        contents = frozenset(contents)
        unknown = sorted(v for v in contents if v not in host)
        if unknown:
            raise UnknownVertexError(f"bag {x!r} contains unknown host vertex {unknown[0]!r}")
        frozen[x] = contents
    try:
        dgraph = build_graph(ids, bag_edges)
    except MalformedInputError as exc:
        raise type(exc)(f"bag edges: {exc}") from None
    rot = None
    if rotation is not None:
        check_rotation(dgraph, rotation)
        rot = rotation if isinstance(rotation, RotationSystem) else RotationSystem(rotation)
    return Decomposition(host, frozen, dgraph, rot, provenance, belongs)


@dataclass
class ValidityReport:
    vertex_nonempty: dict[str, bool] = field(default_factory=dict)
    vertex_connected: dict[str, bool] = field(default_factory=dict)
    edge_touch: dict[Edge, bool] = field(default_factory=dict)
    planar: bool | None = None
    embedding_ok: bool | None = None

    @property
    def problems(self) -> list[str]:
        out = [f"D({v}) is empty" for v, ok in self.vertex_nonempty.items() if not ok]
        out += [
            f"D({v}) is disconnected"
            for v, ok in self.vertex_connected.items()
            if not ok and self.vertex_nonempty.get(v, True)
        ]
        out += [f"D({a}) and D({b}) do not touch" for (a, b), ok in self.edge_touch.items() if not ok]
        if self.embedding_ok is False:
            out.append("supplied rotation is not a planar embedding")
        return out

    @property
    def valid(self) -> bool:
        """Decomposition axioms hold (and any supplied rotation is planar)."""
        return not self.problems

    @property
    def valid_planar(self) -> bool:
        return self.valid and bool(self.planar)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "planar": self.planar,
            "problems": self.problems,
        }


def validate_decomposition(d: Decomposition, check_planarity: bool = True) -> ValidityReport:
    """Check both decomposition axioms and report planarity of the decomposition graph."""
    for x in d.graph.vertices:
        for v in d.bags[x]:
            if v not in d.host:
                raise MalformedInputError(f"bag {x!r} contains unknown host vertex {v!r}")
    rep = ValidityReport()
    index = d.nodes_containing()
    gadj = d.graph
    for v in d.host.vertices:
        nodes = index[v]
        rep.vertex_nonempty[v] = bool(nodes)
        if not nodes:
            rep.vertex_connected[v] = False
            continue
        member = set(nodes)
        seen = {nodes[0]}
        queue = deque([nodes[0]])
        while queue:
            x = queue.popleft()
            for y in gadj.neighbors(x):
                if y in member and y not in seen:
                    seen.add(y)
                    queue.append(y)
        rep.vertex_connected[v] = len(seen) == len(member)
    for a, b in d.host.edges:
        rep.edge_touch[(a, b)] = _touch(d, index, a, b)
    if d.rotation is not None:
        rep.embedding_ok = euler_characteristic_ok(d.graph, d.rotation)
        rep.planar = True if rep.embedding_ok else None
    if check_planarity and rep.planar is None:
        rep.planar = test_planarity(d.graph).planar
    return rep


def _touch(d: Decomposition, index: Mapping[str, list[str]], a: str, b: str) -> bool:
    # iterate from the vertex with fewer nodes
    if len(index[a]) > len(index[b]):
        a, b = b, a
    for x in index[a]:
        if b in d.bags[x]:
            return True
        for y in d.graph.neighbors(x):
            if b in d.bags[y]:
                return True
    return False


@dataclass(frozen=True)
class Metrics:
    width: int
    order: int
    degree: int
    planar: bool

    def to_json(self) -> dict:
        return {"width": self.width, "order": self.order, "degree": self.degree, "planar": self.planar}


def metrics(d: Decomposition) -> Metrics:
    if d.rotation is not None and euler_characteristic_ok(d.graph, d.rotation):
        planar = True
    else:
        planar = test_planarity(d.graph).planar
    return Metrics(d.width, d.order, d.degree, planar)


# --- minor models --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MinorModel:
    """Branch sets of ``host`` realising ``pattern`` as a minor."""

    pattern: Graph
    host: Graph
    branch_sets: Mapping[str, frozenset[str]]
    witnesses: Mapping[Edge, Edge]

    def owner(self) -> dict[str, str]:
        out = {}
        for v, bs in self.branch_sets.items():
            for x in bs:
                out[x] = v
        return out

    def to_json(self) -> dict:
        return {
            "branch_sets": {v: sorted(bs) for v, bs in self.branch_sets.items()},
            "witnesses": {f"{a}-{b}": list(w) for (a, b), w in self.witnesses.items()},
        }


@dataclass
class ModelReport:
    disjoint: bool = True
    nonempty: dict[str, bool] = field(default_factory=dict)
    connected: dict[str, bool] = field(default_factory=dict)
    witnessed: dict[Edge, bool] = field(default_factory=dict)
    unknown: list[str] = field(default_factory=list)

    @property
    def problems(self) -> list[str]:
        out = []
        if self.unknown:
            out.append(f"unknown host vertices {self.unknown}")
        if not self.disjoint:
            out.append("disjointness: branch sets overlap")
        out += [f"nonempty: branch set of {v} is empty" for v, ok in self.nonempty.items() if not ok]
        out += [
            f"connectivity: branch set of {v} is disconnected"
            for v, ok in self.connected.items()
            if not ok and self.nonempty.get(v, True)
        ]
        out += [f"witness: pattern edge {a}-{b} has no witness" for (a, b), ok in self.witnessed.items() if not ok]
        return out

    @property
    def valid(self) -> bool:
        return not self.problems


def verify_minor_model(m: MinorModel) -> ModelReport:
    """Check disjointness, connectivity and edge witnesses of a minor model."""
    rep = ModelReport()
    seen: set[str] = set()
    for v in m.pattern.vertices:
        bs = m.branch_sets.get(v, frozenset())
        bad = [x for x in bs if x not in m.host]
        rep.unknown.extend(sorted(bad))
        if seen & set(bs):
            rep.disjoint = False
        seen |= set(bs)
        rep.nonempty[v] = bool(bs)
        rep.connected[v] = bool(bs) and not bad and m.host.is_connected_subset(bs)
    for a, b in m.pattern.edges:
        w = m.witnesses.get((a, b))
        ok = False
        if w is not None and len(w) == 2:
            x, y = w
            ba = m.branch_sets.get(a, frozenset())
            bb = m.branch_sets.get(b, frozenset())
            ok = m.host.has_edge(x, y) and ((x in ba and y in bb) or (x in bb and y in ba))
        rep.witnessed[(a, b)] = ok
    return rep


def make_minor_model(
    pattern: Graph,
    host: Graph,
    branch_sets: Mapping[str, Iterable[str]],
    witnesses: Mapping[Edge, Sequence[str]] | None = None,
) -> MinorModel:
    """Build a model, filling in missing witnesses with the first available host edge."""
    bsets = {v: frozenset(branch_sets.get(v, ())) for v in pattern.vertices}
    wits: dict[Edge, Edge] = {}
    for a, b in pattern.edges:
        given = (witnesses or {}).get((a, b)) or (witnesses or {}).get((b, a))
        if given is not None:
            wits[(a, b)] = tuple(given)
            continue
        found = find_witness(host, bsets[a], bsets[b])
        if found is not None:
            wits[(a, b)] = found
    return MinorModel(pattern, host, bsets, wits)


def find_witness(host: Graph, sa: Iterable[str], sb: Iterable[str]) -> Edge | None:
    sb = set(sb)
    best = None
    for x in sa:
        for y in host.neighbors(x):
            if y in sb and (best is None or (x, y) < best):
                best = (x, y)
    return best


def minor_to_decomposition(m: MinorModel) -> Decomposition:
    """Width-1 decomposition of the pattern shaped like the host.

    Each host vertex becomes a node whose bag is the pattern vertex owning
    it, or empty when it lies in no branch set.
    """
    rep = verify_minor_model(m)
    if not rep.valid:
        first = rep.problems[0]
        raise ModelViolationError(first.split(":")[0], first)
    owner = m.owner()
    bags = {x: frozenset([owner[x]]) if x in owner else frozenset() for x in m.host.vertices}
    return Decomposition(m.pattern, bags, m.host, provenance="minor-to-decomposition")


def extract_minor_model(d: Decomposition) -> MinorModel:
    """Inverse of :func:`minor_to_decomposition` for width at most 1."""
    if d.width > 1:
        raise WidthViolationError(f"width {d.width} > 1; branch sets would overlap")
    rep = validate_decomposition(d, check_planarity=False)
    if not rep.valid:
        raise ModelViolationError("decomposition", "; ".join(rep.problems))
    index = d.nodes_containing()
    bsets = {v: frozenset(index[v]) for v in d.host.vertices}
    return make_minor_model(d.host, d.graph, bsets)


def singleton_decomposition(g: Graph, rotation: Mapping[str, Sequence[str]] | None = None) -> Decomposition:
    """The trivial width-1 decomposition: one node per vertex, shaped like ``g``."""
    rot = None
    if rotation is not None:
        rot = rotation if isinstance(rotation, RotationSystem) else RotationSystem(rotation)
    return Decomposition(g, {v: frozenset([v]) for v in g.vertices}, g, rot, "singleton")


# decompositions are immutable, so a passed check never needs repeating
_known_valid: "weakref.WeakSet[Decomposition]" = weakref.WeakSet()


def require_valid(d: Decomposition) -> None:
    """Raise :class:`InvalidDecompositionError` unless ``d`` is valid."""
    if d in _known_valid:
        return
    rep = validate_decomposition(d, check_planarity=False)
    if not rep.valid:
        raise InvalidDecompositionError("; ".join(rep.problems))
    _known_valid.add(d)


__all__ = [
    "Decomposition",
    "EmbeddingError",
    "Metrics",
    "MinorModel",
    "ModelReport",
    "ValidityReport",
    "extract_minor_model",
    "find_witness",
    "make_decomposition",
    "make_minor_model",
    "metrics",
    "minor_to_decomposition",
    "require_valid",
    "singleton_decomposition",
    "validate_decomposition",
    "verify_minor_model",
]
