"""Mutable planarization used while trimming realizers.

Plan edges carry integer ids so that parallel edges can exist for a moment
after a contraction; :meth:`PlanWork.normalize` removes them again by
uncrossing, which never adds crossings.
"""

from __future__ import annotations

from collections import defaultdict

from .drawing import PlanarizedDrawing
from .embedding import RotationSystem, euler_characteristic_ok
from .graph import Edge, build_graph, edge_key


class PlanWork:
    def __init__(self, drw: PlanarizedDrawing):
        self.base_vertices: list[str] = list(drw.base.vertices)
        self.order: list[str] = list(drw.plan.vertices)
        self.cross: set[str] = set(drw.crossings)
        self.ends: dict[int, list[str]] = {}
        eid = {}
        for i, e in enumerate(drw.plan.edges):
            self.ends[i] = list(e)
            eid[e] = i
        self._next = len(self.ends)
        self.rot: dict[str, list[int]] = {
            x: [eid[edge_key(x, y)] for y in drw.rotation[x]] for x in drw.plan.vertices
        }
        self.route: dict[Edge, list[int]] = {}
        self.owner: dict[int, Edge] = {}
        for key, r in drw.routes.items():
            es = [eid[edge_key(a, b)] for a, b in zip(r, r[1:])]
            self.route[key] = es
            for e in es:
                self.owner[e] = key

    # --- queries ------------------------------------------------------------

    def other(self, e: int, x: str) -> str:
        a, b = self.ends[e]
        return b if a == x else a

    def route_vertices(self, key: Edge) -> list[str]:
        out = [key[0]]
        for e in self.route[key]:
            out.append(self.other(e, out[-1]))
        return out

    def crossings_on(self, key: Edge) -> int:
        return len(self.route[key]) - 1

    def base_edges(self) -> list[Edge]:
        return sorted(self.route)

    # --- primitive edits ------------------------------------------------------

    def _new_edge(self, a: str, b: str) -> int:
        assert a != b, "smoothing would create a loop"
        e = self._next
        self._next += 1
        self.ends[e] = [a, b]
        return e

    def _drop_vertex(self, x: str) -> None:
        del self.rot[x]
        self.order.remove(x)
        self.cross.discard(x)

    @staticmethod
    def _replace_run(seq: list[int], run: list[int], new: int) -> None:
        # replace the contiguous run (in either direction) by a single id
        n = len(run)
        for i in range(len(seq) - n + 1):
            window = seq[i:i + n]
            if window == run or window == run[::-1]:
                seq[i:i + n] = [new]
                return
        raise AssertionError("route does not contain the expected edges")

    def _smooth(self, z: str) -> None:
        """Remove a crossing left with exactly the two edges of one route."""
        e1, e2 = self.rot[z]
        a, b = self.other(e1, z), self.other(e2, z)
        g = self._new_edge(a, b)
        self.rot[a][self.rot[a].index(e1)] = g
        self.rot[b][self.rot[b].index(e2)] = g
        key = self.owner.pop(e1)
        self.owner.pop(e2)
        self.owner[g] = key
        self._replace_run(self.route[key], [e1, e2], g)
        del self.ends[e1], self.ends[e2]
        self._drop_vertex(z)

    def _excise(self, es: list[int], start: str) -> None:
        # remove a route's edges, smoothing every crossing it passed through
        verts = [start]
        for e in es:
            verts.append(self.other(e, verts[-1]))
        for e in es:
            del self.owner[e]
        for i, z in enumerate(verts):
            mine = {es[i - 1]} if i > 0 else set()
            if i < len(es):
                mine.add(es[i])
            self.rot[z] = [e for e in self.rot[z] if e not in mine]
            if 0 < i < len(verts) - 1:
                self._smooth(z)
        for e in es:
            del self.ends[e]

    def delete_route(self, key: Edge) -> None:
        self._excise(self.route.pop(key), key[0])

    def delete_vertex(self, v: str) -> None:
        for key in [k for k in self.route if v in k]:
            self.delete_route(key)
        assert not self.rot[v]
        self._drop_vertex(v)
        self.base_vertices.remove(v)

    def contract(self, key: Edge) -> str:
        """Contract a crossing-free base edge; returns the surviving identifier."""
        (e,) = self.route[key]
        keep, gone = key
        rk, rg = self.rot[keep], self.rot[gone]
        i, j = rk.index(e), rg.index(e)
        moved = rg[j + 1:] + rg[:j]
        self.rot[keep] = rk[:i] + moved + rk[i + 1:]
        for f in moved:
            self.ends[f] = [keep if x == gone else x for x in self.ends[f]]
        del self.route[key], self.owner[e], self.ends[e]
        self.rot[gone] = []
        self._drop_vertex(gone)
        self.base_vertices.remove(gone)

        renamed: dict[Edge, list[list[int]]] = defaultdict(list)
        for old in [k for k in self.route if gone in k]:
            es = self.route.pop(old)
            start = keep if old[0] == gone else old[0]
            other = old[1] if old[0] == gone else old[0]
            new = edge_key(keep, other)
            if start != new[0]:
                es = es[::-1]
            renamed[new].append(es)
        losers = []
        for new, lists in renamed.items():
            if new in self.route:
                lists.append(self.route.pop(new))
            # parallel base edges collapse onto the route with fewest crossings
            lists.sort(key=len)
            self.route[new] = lists[0]
            for f in lists[0]:
                self.owner[f] = new
            for es in lists[1:]:
                # losers stay registered under a private key until excised,
                # since they may cross each other
                tmp = (new[0], new[1], len(losers))
                self.route[tmp] = es
                for f in es:
                    self.owner[f] = tmp
                losers.append((tmp, new[0]))
        for tmp, start in losers:
            self._excise(self.route.pop(tmp), start)
        self.normalize()
        return keep

    # --- removing parallel plan edges --------------------------------------

    def _at(self, key: Edge, z: str, not_e: int) -> int:
        # the edge of route ``key`` at crossing ``z`` other than ``not_e``
        for f in self.rot[z]:
            if f != not_e and self.owner[f] == key:
                return f
        raise AssertionError("route does not pass through the crossing")

    def _uncross_at_base(self, m: str, z: str, e1: int, e2: int) -> None:
        r1, r2 = self.owner[e1], self.owner[e2]
        f1, f2 = self._at(r1, z, e1), self._at(r2, z, e2)
        a1, a2 = self.other(f1, z), self.other(f2, z)
        g1, g2 = self._new_edge(m, a1), self._new_edge(m, a2)
        rm = self.rot[m]
        rm[rm.index(e2)], rm[rm.index(e1)] = g1, g2
        self.rot[a1][self.rot[a1].index(f1)] = g1
        self.rot[a2][self.rot[a2].index(f2)] = g2
        self._replace_run(self.route[r1], [e1, f1], g1)
        self._replace_run(self.route[r2], [e2, f2], g2)
        for f in (e1, e2, f1, f2):
            del self.owner[f], self.ends[f]
        self.owner[g1], self.owner[g2] = r1, r2
        self._drop_vertex(z)

    def _uncross_bigon(self, z: str, m: str, e1: int, e2: int) -> None:
        r1, r2 = self.owner[e1], self.owner[e2]
        f1, f2 = self._at(r1, z, e1), self._at(r2, z, e2)
        h1, h2 = self._at(r1, m, e1), self._at(r2, m, e2)
        a1, b1 = self.other(f1, z), self.other(h1, m)
        a2, b2 = self.other(f2, z), self.other(h2, m)
        g1, g2 = self._new_edge(a1, b1), self._new_edge(a2, b2)
        for f, far, g in ((f1, a1, g1), (h1, b1, g1), (f2, a2, g2), (h2, b2, g2)):
            r = self.rot[far]
            r[r.index(f)] = g
        self._replace_run(self.route[r1], [f1, e1, h1], g1)
        self._replace_run(self.route[r2], [f2, e2, h2], g2)
        for f in (e1, e2, f1, f2, h1, h2):
            del self.owner[f], self.ends[f]
        self.owner[g1], self.owner[g2] = r1, r2
        self._drop_vertex(z)
        self._drop_vertex(m)

    def _find_parallel(self) -> tuple[str, str, int, int] | None:
        seen: dict[frozenset, int] = {}
        for e in sorted(self.ends):
            pair = frozenset(self.ends[e])
            if pair in seen:
                a, b = sorted(pair)
                return a, b, seen[pair], e
            seen[pair] = e
        return None

    def normalize(self) -> None:
        while (found := self._find_parallel()) is not None:
            a, b, e1, e2 = found
            if a in self.cross and b in self.cross:
                self._uncross_bigon(a, b, e1, e2)
            elif a in self.cross:
                self._uncross_at_base(b, a, e1, e2)
            elif b in self.cross:
                self._uncross_at_base(a, b, e1, e2)
            else:  # pragma: no cover - duplicates are collapsed at contraction
                raise AssertionError(f"duplicate base routes between {a} and {b}")

    # --- export ------------------------------------------------------------

    def to_drawing(self) -> PlanarizedDrawing:
        base = build_graph(self.base_vertices, self.base_edges())
        plan = build_graph(self.order, [tuple(e) for e in self.ends.values()])
        assert plan.num_edges == len(self.ends), "planarization still has parallel edges"
        rotation = RotationSystem({x: [self.other(e, x) for e in self.rot[x]] for x in self.order})
        assert euler_characteristic_ok(plan, rotation), "planarization lost planarity"
        routes = {key: tuple(self.route_vertices(key)) for key in self.base_edges()}
        passes: dict[str, list[tuple[str, str]]] = defaultdict(list)
        for r in routes.values():
            for i in range(1, len(r) - 1):
                passes[r[i]].append((r[i - 1], r[i + 1]))
        crossings = {x: (passes[x][0], passes[x][1]) for x in self.order if x in self.cross}
        return PlanarizedDrawing(base, plan, rotation, crossings, routes)
