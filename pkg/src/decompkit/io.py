"""JSON (canonical) and DOT (export-only) formats."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping

from .decomposition import Decomposition, MinorModel, make_decomposition
from .drawing import PlanarizedDrawing
from .embedding import RotationSystem
from .errors import EmbeddingError, MalformedInputError
from .graph import Graph, build_graph, to_dot
from .realizer import Realizer


def _need(obj: Mapping, key: str, where: str) -> Any:
    if not isinstance(obj, Mapping) or key not in obj:
        raise MalformedInputError(f"{where}: missing field {key!r}")
    return obj[key]


def graph_to_json(g: Graph) -> dict:
    return g.to_json()


def graph_from_json(obj: Mapping, where: str = "graph") -> Graph:
    verts = _need(obj, "vertices", where)
    edges = _need(obj, "edges", where)
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise MalformedInputError(f"{where}: vertices and edges must be lists")
    try:
        return build_graph(verts, [tuple(e) if isinstance(e, list) else e for e in edges])
    except MalformedInputError as exc:
        raise type(exc)(f"{where}: {exc}") from None
    except TypeError:
        raise MalformedInputError(f"{where}: edges must be pairs of identifiers") from None


def _rotation_from(obj: Any, where: str) -> RotationSystem | None:
    if obj is None:
        return None
    if isinstance(obj, Mapping) and set(obj) == {"rotation"} and isinstance(obj["rotation"], Mapping):
        obj = obj["rotation"]
    if not isinstance(obj, Mapping) or not all(isinstance(v, list) for v in obj.values()):
        raise MalformedInputError(f"{where}: rotation must map vertices to neighbour lists")
    return RotationSystem(obj)


def decomposition_to_json(d: Decomposition, extra: Mapping | None = None) -> dict:
    out: dict[str, Any] = {
        "host": d.host.to_json(),
        "bags": [{"id": x, "contents": sorted(d.bags[x], key=d.host.position)} for x in d.graph.vertices],
        "bag_edges": [list(e) for e in d.graph.edges],
    }
    if d.rotation is not None:
        out["rotation"] = {x: list(d.rotation[x]) for x in d.graph.vertices}
    if d.provenance:
        out["provenance"] = d.provenance
    if d.belongs:
        out["belongs"] = dict(d.belongs)
    if extra:
        out.update(extra)
    return out


def decomposition_from_json(obj: Mapping, where: str = "decomposition") -> Decomposition:
    host = graph_from_json(_need(obj, "host", where), f"{where}.host")
    raw = _need(obj, "bags", where)
    if not isinstance(raw, list):
        raise MalformedInputError(f"{where}.bags must be a list")
    bags = []
    for i, b in enumerate(raw):
        x = _need(b, "id", f"{where}.bags[{i}]")
        contents = _need(b, "contents", f"{where}.bags[{i}]")
        if not isinstance(contents, list):
            raise MalformedInputError(f"{where}.bags[{i}].contents must be a list")
        bags.append((x, contents))
    edges = [tuple(e) for e in obj.get("bag_edges", [])]
    rot = _rotation_from(obj.get("rotation"), f"{where}.rotation")
    try:
        return make_decomposition(host, bags, edges, rot, obj.get("provenance"), obj.get("belongs"))
    except EmbeddingError as exc:
        raise MalformedInputError(f"{where}.rotation: {exc}") from None


def model_from_json(obj: Mapping, pattern: Graph, host: Graph, where: str = "model") -> MinorModel:
    bs = _need(obj, "branch_sets", where)
    wits_raw = obj.get("witnesses", {})
    wits = {}
    for name, pair in wits_raw.items():
        a, sep, b = name.partition("-")
        # identifiers may contain dashes: split at the first dash that names pattern vertices
        if not (a in pattern and b in pattern):
            for i, ch in enumerate(name):
                if ch == "-" and name[:i] in pattern and name[i + 1:] in pattern:
                    a, b = name[:i], name[i + 1:]
                    break
            else:
                raise MalformedInputError(f"{where}.witnesses: cannot parse edge {name!r}")
        key = (a, b) if a <= b else (b, a)
        wits[key] = tuple(pair)
    return MinorModel(pattern, host, {v: frozenset(bs.get(v, ())) for v in pattern.vertices}, wits)


def realizer_to_json(r: Realizer, decomposition: Decomposition | None = None) -> dict:
    out = {
        "pattern": r.model.pattern.to_json(),
        "graph": r.expanded.to_json(),
        "model": r.model.to_json(),
        "source": r.source,
    }
    if decomposition is not None:
        out["decomposition"] = decomposition_to_json(decomposition)
    return out


def realizer_from_json(obj: Mapping, where: str = "realizer") -> Realizer:
    pattern = graph_from_json(_need(obj, "pattern", where), f"{where}.pattern")
    g = graph_from_json(_need(obj, "graph", where), f"{where}.graph")
    model = model_from_json(_need(obj, "model", where), pattern, g, f"{where}.model")
    return Realizer(g, model, obj.get("source", "file"))


def drawing_to_json(drw: PlanarizedDrawing) -> dict:
    return drw.to_json()


def drawing_from_json(obj: Mapping, where: str = "drawing") -> PlanarizedDrawing:
    base = graph_from_json(_need(obj, "base", where), f"{where}.base")
    plan = graph_from_json(_need(obj, "plan", where), f"{where}.plan")
    rot = _rotation_from(_need(obj, "rotation", where), f"{where}.rotation")
    crossings = {}
    for x, entry in _need(obj, "crossings", where).items():
        pairs = _need(entry, "pairs", f"{where}.crossings.{x}")
        crossings[x] = tuple(tuple(p) for p in pairs)
    routes = {}
    for name, path in _need(obj, "routes", where).items():
        if not isinstance(path, list) or len(path) < 2:
            raise MalformedInputError(f"{where}.routes.{name}: route must list at least two vertices")
        a, b = path[0], path[-1]
        key = (a, b) if a <= b else (b, a)
        routes[key] = tuple(path) if key == (a, b) else tuple(reversed(path))
    return PlanarizedDrawing(base, plan, rot, crossings, routes)


def bundle_from_json(obj: Mapping, where: str = "bundle") -> dict:
    """Certificate bundle: the width-2 decomposition, the realizer, bound reports."""
    out = {"width2": decomposition_from_json(_need(obj, "width2", where), f"{where}.width2")}
    if "realizer" in obj:
        out["realizer"] = realizer_from_json(obj["realizer"], f"{where}.realizer")
        if "decomposition" in obj["realizer"]:
            out["expanded"] = decomposition_from_json(obj["realizer"]["decomposition"], f"{where}.realizer.decomposition")
    out["bounds"] = list(obj.get("bounds", []))
    return out


def kind_of(obj: Any) -> str:
    if not isinstance(obj, Mapping):
        raise MalformedInputError("top-level JSON value must be an object")
    if "width2" in obj:
        return "bundle"
    if "plan" in obj:
        return "drawing"
    if "model" in obj:
        return "realizer"
    if "bags" in obj:
        return "decomposition"
    if "vertices" in obj:
        return "graph"
    if "rotation" in obj:
        return "rotation"
    raise MalformedInputError("cannot tell what this file contains")


def read_json(path: str | os.PathLike) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load(path: str | os.PathLike) -> tuple[str, Any]:
    """Parse a file into ``(kind, object)``."""
    obj = read_json(path)
    kind = kind_of(obj)
    loaders = {
        "graph": graph_from_json,
        "decomposition": decomposition_from_json,
        "drawing": drawing_from_json,
        "realizer": realizer_from_json,
    }
    if kind == "rotation":
        return kind, _rotation_from(obj, str(path))
    if kind == "bundle":
        return kind, bundle_from_json(obj)
    return kind, loaders[kind](obj)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def write_text(path: str | os.PathLike, text: str) -> None:
    """Write atomically: a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def decomposition_to_dot(d: Decomposition, name: str = "D") -> str:
    labels = {x: f"{x}: {{{', '.join(sorted(d.bags[x], key=d.host.position))}}}" for x in d.graph.vertices}
    return to_dot(d.graph, name, labels)


def drawing_to_dot(drw: PlanarizedDrawing, name: str = "P") -> str:
    lines = [f"graph {name} {{"]
    for x in drw.plan.vertices:
        shape = ' shape=point' if x in drw.crossings else ""
        lines.append(f'  "{x}" [label="{x}"{shape}];')
    for a, b in drw.plan.edges:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
