"""Planar graph decompositions and the crossing-number certificates built from them."""

from .bounds import (
    BoundReport,
    bound_cr_from_decomp,
    bound_drawing_decomposition,
    bound_mcr_from_decomp,
    bound_mcr_width2_pipeline,
    bound_small_realizer,
    certify_linear_mcr,
)
from .decomposition import (
    Decomposition,
    MinorModel,
    extract_minor_model,
    make_decomposition,
    make_minor_model,
    metrics,
    minor_to_decomposition,
    singleton_decomposition,
    validate_decomposition,
    verify_minor_model,
)
from .drawing import (
    PlanarizedDrawing,
    drawing_to_decomposition,
    k5_one_crossing,
    mcr_certificate_pipeline,
    validate_drawing,
)
from .embedding import RotationSystem, augment_min_degree_3, embed, euler_characteristic_ok
from .graph import Graph, build_graph
from .realizer import Realizer, expand_to_realizer, minor_search_small, reduce_realizer
from .transforms import compact_degree, compose, simplify_both, simplify_degree, simplify_width, split_degree_four

__all__ = [
    "BoundReport", "Decomposition", "Graph", "MinorModel", "PlanarizedDrawing", "Realizer", "RotationSystem",
    "augment_min_degree_3", "bound_cr_from_decomp", "bound_drawing_decomposition", "bound_mcr_from_decomp",
    "bound_mcr_width2_pipeline", "bound_small_realizer", "build_graph", "certify_linear_mcr", "compact_degree",
    "compose", "drawing_to_decomposition", "embed", "euler_characteristic_ok", "expand_to_realizer",
    "extract_minor_model", "k5_one_crossing", "make_decomposition", "make_minor_model", "mcr_certificate_pipeline",
    "metrics", "minor_search_small", "minor_to_decomposition", "reduce_realizer", "simplify_both", "simplify_degree",
    "simplify_width", "singleton_decomposition", "split_degree_four", "validate_decomposition", "validate_drawing",
    "verify_minor_model",
]
