"""Exact integer bound formulas for crossing and minor crossing numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .decomposition import Decomposition, metrics, require_valid
from .graph import Graph, max_degree
from .transforms import simplify_both


@dataclass(frozen=True)
class BoundReport:
    name: str
    formula: str
    inputs: Mapping[str, int]
    value: int
    strict: bool = False  # True: the bounded quantity is < value
    factors: tuple[int, ...] = ()

    def holds_for(self, actual: int) -> bool:
        return actual < self.value if self.strict else actual <= self.value

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "formula": self.formula,
            "inputs": dict(self.inputs),
            "value": self.value,
            "relation": "<" if self.strict else "<=",
        }
        if self.factors:
            out["factors"] = list(self.factors)
        return out


def _check(**kw: int) -> None:
    for k, v in kw.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ValueError(f"{k} must be a non-negative integer, got {v!r}")


def bound_cr_from_decomp(k: int, delta_g: int, order_d: int) -> BoundReport:
    """Crossing number of a graph with a planar decomposition of width ``k``."""
    _check(k=k, delta_g=delta_g, order_d=order_d)
    return BoundReport(
        "cr-from-decomposition",
        "k(k+1) * Delta(G)^2 * |D|",
        {"k": k, "delta_G": delta_g, "order_D": order_d},
        k * (k + 1) * delta_g**2 * order_d,
    )


def bound_mcr_from_decomp(k: int, delta_d: int, order_d: int) -> BoundReport:
    """Minor crossing number from a planar decomposition of width ``k``."""
    _check(k=k, delta_d=delta_d, order_d=order_d)
    return BoundReport(
        "mcr-from-decomposition",
        "k^3 (k+1) (Delta(D)+1)^2 * |D|",
        {"k": k, "delta_D": delta_d, "order_D": order_d},
        k**3 * (k + 1) * (delta_d + 1) ** 2 * order_d,
        strict=True,
    )


# width 2 and degree 4 after the wedge construction, times its order blow-up 3k(k+1)
PIPELINE_FACTORS = (2**3, 2 + 1, (4 + 1) ** 2, 3)
PIPELINE_CONSTANT = 1800
assert PIPELINE_FACTORS[0] * PIPELINE_FACTORS[1] * PIPELINE_FACTORS[2] * PIPELINE_FACTORS[3] == PIPELINE_CONSTANT


def bound_mcr_width2_pipeline(k: int, order_d: int) -> BoundReport:
    _check(k=k, order_d=order_d)
    value = PIPELINE_CONSTANT * k * (k + 1) * order_d
    assert value == PIPELINE_FACTORS[0] * PIPELINE_FACTORS[1] * PIPELINE_FACTORS[2] * PIPELINE_FACTORS[3] * k * (k + 1) * order_d
    return BoundReport(
        "mcr-width2-pipeline",
        "1800 k(k+1) |D| = 2^3 (2+1) (4+1)^2 * 3k(k+1) |D|",
        {"k": k, "order_D": order_d},
        value,
        strict=True,
        factors=PIPELINE_FACTORS,
    )


def bound_small_realizer(order_g: int, crossings: int) -> BoundReport:
    """Order of a trimmed realizer drawn with ``crossings`` crossings."""
    _check(order_g=order_g, crossings=crossings)
    return BoundReport(
        "small-realizer",
        "|V(G)| + cr",
        {"order_G": order_g, "crossings": crossings},
        order_g + crossings,
    )


def bound_drawing_decomposition(order_g: int, crossings: int) -> BoundReport:
    _check(order_g=order_g, crossings=crossings)
    return BoundReport(
        "drawing-decomposition-order",
        "|V(G)| + 2 cr",
        {"order_G": order_g, "crossings": crossings},
        order_g + 2 * crossings,
    )


@dataclass(frozen=True)
class StatementOnly:
    """A result that is stated without an evaluator (its constant is unknown)."""

    name: str
    statement: str

    def to_json(self) -> dict:
        return {"name": self.name, "statement": self.statement, "evaluable": False}


REDUCE_ORDER = StatementOnly(
    "reduce-order",
    "a planar decomposition of width k can be turned into one of width c'k and order |V(G)|,"
    " for an unspecified absolute constant c'",
)


@dataclass
class LinearMcrCertificate:
    width2: Decomposition
    reports: list[BoundReport]
    constants: dict[str, Fraction]
    summary: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "summary": self.summary,
            "constants": {k: {"num": v.numerator, "den": v.denominator} for k, v in self.constants.items()},
            "bounds": [r.to_json() for r in self.reports],
        }


def certify_linear_mcr(g: Graph, d: Decomposition) -> LinearMcrCertificate:
    """Witness linear minor crossing number from a planar decomposition of ``g``.

    Produces the width-2 degree-3 decomposition, the pipeline bound on the
    minor crossing number, and both linear constants relative to ``|V(g)|``
    as exact fractions.
    """
    if d.host != g:
        raise ValueError("decomposition is not over the given graph")
    require_valid(d)
    k = d.width
    d3 = simplify_both(d, compute_embedding=True)
    mcr = bound_mcr_width2_pipeline(k, d.order)
    cr = bound_cr_from_decomp(k, max_degree(g), d.order)
    n = max(1, len(g))
    constants = {
        "c1": Fraction(mcr.value, n),
        "c3": Fraction(d3.order, n),
    }
    m = metrics(d3)
    summary = {
        "order_G": len(g),
        "width_in": k,
        "order_in": d.order,
        "width_out": m.width,
        "order_out": m.order,
        "degree_out": m.degree,
        "planar_out": m.planar,
    }
    return LinearMcrCertificate(d3, [mcr, cr], constants, summary)
