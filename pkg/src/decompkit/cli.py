"""Command-line entry point: ``decompkit <command> ...``.

Exit status: 0 on success, 1 when the input is structurally invalid or a
bound fails, 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import io
from .bounds import (
    REDUCE_ORDER,
    bound_cr_from_decomp,
    bound_drawing_decomposition,
    bound_mcr_from_decomp,
    bound_mcr_width2_pipeline,
    bound_small_realizer,
    certify_linear_mcr,
)
from .contracts import check_simplify
from .decomposition import Decomposition, metrics, validate_decomposition, verify_minor_model
from .drawing import drawing_to_decomposition, layout_drawing, validate_drawing
from .embedding import test_planarity
from .errors import DecompKitError, MalformedInputError, UnknownVertexError
from .generators import random_planar_decomposition
from .graph import complete_bipartite, grid_graph, max_degree, to_dot
from .realizer import expand_to_realizer, reduce_realizer
from .transforms import compact_degree, simplify_both, simplify_degree, simplify_width

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("DECOMPKIT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DECOMPKIT_SEED must be an integer, got {raw!r}") from None


def _load(path: str, *kinds: str) -> Any:
    kind, obj = io.load(path)
    if kinds and kind not in kinds:
        raise UsageError(f"{path}: expected {' or '.join(kinds)}, found {kind}")
    return obj


def _emit(args: argparse.Namespace, payload: dict, dot: Callable[[], str] | None = None) -> None:
    if args.format == "dot":
        if dot is None:
            raise UsageError(f"{args.command} has no DOT form")
        text = dot()
    else:
        text = io.dumps(payload)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_text(args.output, text)


def _summary(obj: dict) -> None:
    # human-facing one-line result on stderr keeps stdout machine-readable
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)


# --- validate ------------------------------------------------------------


def validate_file(path: str) -> tuple[int, dict]:
    """Exit status and report for one file (top level so worker processes can run it)."""
    try:
        kind, obj = io.load(path)
    except UnknownVertexError as exc:
        return EXIT_FAIL, {"path": path, "valid": False, "problems": [str(exc)]}
    except MalformedInputError as exc:
        return EXIT_USAGE, {"path": path, "error": str(exc)}
    except DecompKitError as exc:
        return EXIT_FAIL, {"path": path, "valid": False, "problems": [str(exc)]}
    report: dict[str, Any] = {"path": path, "kind": kind}
    problems: list[str] = []
    if kind == "graph":
        report["planar"] = test_planarity(obj).planar
    elif kind == "rotation":
        pass
    elif kind == "decomposition":
        rep = validate_decomposition(obj)
        report.update(rep.to_json())
        problems += rep.problems
    elif kind == "drawing":
        rep = validate_drawing(obj)
        problems += [f"{k}: {d}" for k, d in rep.problems]
        report["crossings"] = obj.crossing_count
    elif kind == "realizer":
        problems += verify_minor_model(obj.model).problems
    elif kind == "bundle":
        for name in ("width2", "expanded"):
            if name in obj:
                problems += [f"{name}: {p}" for p in validate_decomposition(obj[name], check_planarity=False).problems]
        if "realizer" in obj:
            problems += [f"realizer: {p}" for p in verify_minor_model(obj["realizer"].model).problems]
    report["valid"] = not problems
    report["problems"] = problems
    return (EXIT_OK if not problems else EXIT_FAIL), report


def cmd_validate(args: argparse.Namespace) -> int:
    if args.jobs > 1 and len(args.paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(validate_file, args.paths))
    else:
        results = [validate_file(p) for p in args.paths]
    for status, report in results:
        if args.json:
            print(json.dumps(report, sort_keys=True))
        elif status == EXIT_USAGE:
            print(f"{report['path']}: parse error: {report['error']}", file=sys.stderr)
        elif report["valid"]:
            note = " (decomposition graph is not planar)" if report.get("planar") is False and report["kind"] == "decomposition" else ""
            print(f"{report['path']}: valid {report['kind']}{note}")
        else:
            print(f"{report['path']}: invalid")
            for p in report["problems"]:
                print(f"  {p}")
    return max(status for status, _ in results)


# --- transforms ------------------------------------------------------------


def cmd_metrics(args: argparse.Namespace) -> int:
    d = _load(args.path, "decomposition")
    m = metrics(d)
    out = m.to_json()
    out["valid"] = validate_decomposition(d, check_planarity=False).valid
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


_VARIANTS: dict[str, Callable[..., Decomposition]] = {
    "a": simplify_degree,
    "b": simplify_width,
    "c": simplify_both,
    "compact": compact_degree,
}


def cmd_simplify(args: argparse.Namespace) -> int:
    d = _load(args.path, "decomposition")
    out = _VARIANTS[args.variant](d, compute_embedding=True)
    check = check_simplify(args.variant, d, out)
    before, after = metrics(d), metrics(out)
    summary = {
        "before": before.to_json(),
        "after": after.to_json(),
        "augmented_order": out.info["augmented_order"],
        **check.to_json(),
    }
    _emit(args, io.decomposition_to_json(out, {"summary": summary}), lambda: io.decomposition_to_dot(out))
    _summary({"variant": args.variant, "order": after.order, "width": after.width, "degree": after.degree, "bound_ok": check.ok})
    return EXIT_OK if check.ok else EXIT_FAIL


def cmd_expand(args: argparse.Namespace) -> int:
    d = _load(args.path, "decomposition")
    r, dd = expand_to_realizer(d)
    _emit(args, io.realizer_to_json(r, dd), lambda: to_dot(r.expanded, "Gprime"))
    g = r.expanded
    limit = (d.degree + 1) * max(d.width, 1) - 1
    _summary({"order": len(g), "edges": g.num_edges, "max_degree": max_degree(g), "degree_limit": limit})
    return EXIT_OK if max_degree(g) <= limit else EXIT_FAIL


def cmd_reduce(args: argparse.Namespace) -> int:
    raw = io.read_json(args.realizer)
    if io.kind_of(raw) != "realizer":
        raise UsageError(f"{args.realizer}: expected realizer")
    r = io.realizer_from_json(raw)
    if args.drawing is not None:
        drw = _load(args.drawing, "drawing")
    elif "drawing" in raw:
        drw = io.drawing_from_json(raw["drawing"])
    elif "decomposition" in raw:
        # no drawing given: lay out the expanded graph along its decomposition
        seed = args.seed if args.seed is not None else default_seed()
        drw = layout_drawing(io.decomposition_from_json(raw["decomposition"]), np.random.default_rng(seed))
    else:
        raise UsageError("reduce needs a drawing of the realizer graph")
    reduced, rdrw = reduce_realizer(r, drw)
    payload = io.realizer_to_json(reduced)
    payload["drawing"] = io.drawing_to_json(rdrw)
    bound = bound_small_realizer(len(r.model.pattern), drw.crossing_count)
    payload["bound"] = bound.to_json()
    _emit(args, payload, lambda: io.drawing_to_dot(rdrw))
    ok = bound.holds_for(len(reduced.expanded))
    _summary({"order_before": len(r.expanded), "order_after": len(reduced.expanded), "crossings": rdrw.crossing_count, "bound_ok": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_draw2decomp(args: argparse.Namespace) -> int:
    drw = _load(args.path, "drawing")
    d = drawing_to_decomposition(drw)
    _emit(args, io.decomposition_to_json(d), lambda: io.decomposition_to_dot(d))
    _summary({"order": d.order, "width": d.width, "crossings": drw.crossing_count})
    return EXIT_OK


# --- bounds and certificates -----------------------------------------------


def _bounds_for(d: Decomposition) -> list[dict]:
    k = d.width
    return [
        bound_cr_from_decomp(k, max_degree(d.host), d.order).to_json(),
        bound_mcr_from_decomp(k, d.degree, d.order).to_json(),
        bound_mcr_width2_pipeline(k, d.order).to_json(),
    ]


def cmd_bounds(args: argparse.Namespace) -> int:
    reports = []
    if args.path is not None:
        reports += _bounds_for(_load(args.path, "decomposition"))
    p = args
    if p.k is not None and p.delta_g is not None and p.order_d is not None:
        reports.append(bound_cr_from_decomp(p.k, p.delta_g, p.order_d).to_json())
    if p.k is not None and p.delta_d is not None and p.order_d is not None:
        reports.append(bound_mcr_from_decomp(p.k, p.delta_d, p.order_d).to_json())
    if p.k is not None and p.order_d is not None:
        reports.append(bound_mcr_width2_pipeline(p.k, p.order_d).to_json())
    if p.order_g is not None and p.crossings is not None:
        reports.append(bound_small_realizer(p.order_g, p.crossings).to_json())
        reports.append(bound_drawing_decomposition(p.order_g, p.crossings).to_json())
    if not reports:
        raise UsageError("give a decomposition file or enough parameters for at least one bound")
    reports.append(REDUCE_ORDER.to_json())
    _emit(args, {"bounds": reports})
    return EXIT_OK


def _graph_and_decomposition(args: argparse.Namespace):
    g = _load(args.graph, "graph")
    d = _load(args.decomposition, "decomposition")
    if d.host != g:
        raise MalformedInputError("the decomposition's host is not the given graph")
    return g, d


def cmd_certify(args: argparse.Namespace) -> int:
    g, d = _graph_and_decomposition(args)
    cert = certify_linear_mcr(g, d)
    payload = cert.to_json()
    payload["width2"] = io.decomposition_to_json(cert.width2)
    _emit(args, payload, lambda: io.decomposition_to_dot(cert.width2))
    return EXIT_OK


def cmd_pipeline(args: argparse.Namespace) -> int:
    g, d = _graph_and_decomposition(args)
    d3 = simplify_both(d, compute_embedding=True)
    check = check_simplify("c", d, d3)
    r, dd = expand_to_realizer(d3)
    reports = _bounds_for(d) + [REDUCE_ORDER.to_json()]
    bundle = {
        "width2": io.decomposition_to_json(d3, {"summary": check.to_json()}),
        "realizer": io.realizer_to_json(r, dd),
        "bounds": reports,
    }
    _emit(args, bundle)
    if args.dot_dir is not None:
        out = Path(args.dot_dir)
        io.write_text(out / "width2.dot", io.decomposition_to_dot(d3))
        io.write_text(out / "realizer.dot", to_dot(r.expanded, "Gprime"))
    _summary({"width2_order": d3.order, "realizer_order": len(r.expanded), "bound_ok": check.ok})
    return EXIT_OK if check.ok else EXIT_FAIL


# --- generators --------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def cmd_generate(args: argparse.Namespace) -> int:
    if args.family == "grid":
        g = grid_graph(args.rows, args.cols)
        _emit(args, g.to_json(), lambda: to_dot(g, "grid"))
    elif args.family == "k3n":
        g = complete_bipartite(3, args.n)
        _emit(args, g.to_json(), lambda: to_dot(g, "K3n"))
    else:
        seed = args.seed if args.seed is not None else default_seed()
        d = random_planar_decomposition(args.order, args.k, seed)
        _emit(args, io.decomposition_to_json(d, {"seed": seed}), lambda: io.decomposition_to_dot(d))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("-o", "--output", help="output file (default: standard output)")

    ap = argparse.ArgumentParser(prog="decompkit", description="Planar decompositions and the certificates built from them.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run the matching validator on each file")
    p.add_argument("paths", nargs="+")
    p.add_argument("--json", action="store_true", help="one JSON report per line")
    p.add_argument("--jobs", type=_positive, default=1, help="validate files in parallel")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="width, order, degree, planarity")
    p.add_argument("path")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("simplify", parents=[common], help="apply one simplification")
    p.add_argument("path")
    p.add_argument("--variant", choices=tuple(_VARIANTS), required=True)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("expand", parents=[common], help="realizer graph from a decomposition")
    p.add_argument("path")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("reduce", parents=[common], help="trim a realizer along a drawing")
    p.add_argument("realizer")
    p.add_argument("drawing", nargs="?")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("draw2decomp", parents=[common], help="decomposition from a planarized drawing")
    p.add_argument("path")
    p.set_defaults(func=cmd_draw2decomp)

    p = sub.add_parser("bounds", parents=[common], help="evaluate bound formulas")
    p.add_argument("path", nargs="?")
    for flag in ("--k", "--delta-g", "--delta-d", "--order-d", "--order-g", "--crossings"):
        p.add_argument(flag, type=_nonneg)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", parents=[common], help="linear minor crossing number certificate")
    p.add_argument("graph")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("pipeline", parents=[common], help="width-2 decomposition, realizer and bounds in one bundle")
    p.add_argument("graph")
    p.add_argument("decomposition")
    p.add_argument("--dot-dir", help="also write DOT exports into this directory")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("generate", help="instance families")
    fam = p.add_subparsers(dest="family", required=True)
    q = fam.add_parser("grid", parents=[common])
    q.add_argument("rows", type=_positive)
    q.add_argument("cols", type=_positive)
    q = fam.add_parser("k3n", parents=[common])
    q.add_argument("n", type=_positive)
    q = fam.add_parser("random-planar-decomp", parents=[common])
    q.add_argument("order", type=_positive)
    q.add_argument("k", type=_positive)
    q.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"decompkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownVertexError as exc:
        print(f"decompkit: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except MalformedInputError as exc:
        print(f"decompkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DecompKitError as exc:
        print(f"decompkit: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
