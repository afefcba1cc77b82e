"""Checkable size guarantees for each simplification variant."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .decomposition import Decomposition, metrics, validate_decomposition
from .transforms import count_by_origin


@dataclass
class ContractCheck:
    variant: str
    checks: dict[str, bool] = field(default_factory=dict)
    limits: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, good in self.checks.items() if not good]

    def to_json(self) -> dict:
        return {"variant": self.variant, "bound_ok": self.ok, "checks": self.checks, "limits": self.limits}


def check_simplify(variant: str, source: Decomposition, out: Decomposition) -> ContractCheck:
    """Compare ``out`` (a transform of ``source``) against its variant's guarantees.

    ``out.info`` must carry the augmented order and edge count recorded by
    the transform.
    """
    info = out.info or {}
    a = info["augmented_order"]
    e = info["augmented_edges"]
    k = max(source.width, 1)
    rep = validate_decomposition(out, check_planarity=False)
    c = ContractCheck(variant)
    c.checks["valid"] = rep.valid
    c.checks["embedding"] = bool(rep.embedding_ok)
    c.checks["same_host"] = out.host == source.host
    if variant == "a":
        c.limits = {"width": k, "degree": 3, "order": 6 * a - 12}
        c.checks["order_exact"] = out.order == 2 * e
    elif variant == "b":
        c.limits = {"width": 2, "degree": 4, "order": 3 * k * (k + 1) * a - 1, "per_node": comb(k + 1, 2)}
    elif variant == "c":
        c.limits = {"width": 2, "degree": 3, "order": 6 * k * k * a - 1, "per_node": k * k}
    elif variant == "compact":
        c.limits = {"width": k, "degree": 3, "order": 4 * a - 12}
        c.checks["order_exact"] = out.order == 2 * e - 2 * a
    else:
        raise ValueError(f"unknown variant {variant!r}")
    m = metrics(out)
    c.checks["width"] = m.width <= c.limits["width"]
    c.checks["degree"] = m.degree <= c.limits["degree"]
    c.checks["order"] = m.order <= c.limits["order"]
    if "per_node" in c.limits:
        counts = count_by_origin(out)
        c.checks["per_node"] = max(counts.values(), default=0) <= c.limits["per_node"]
    return c
