"""Skew algebroids given by structure functions in a local frame."""

from .calculus import (
    almost_lie_defect,
    anchor_apply,
    anchor_vf,
    bracket,
    complete_lift,
    de_rham,
    frame_derivative,
    hamiltonian_vf,
    interior_product,
    is_almost_lie,
    is_lie,
    jacobiator,
    lie_derivative,
    lie_obstructions,
    linear_bivector,
    linear_function,
    poisson_bracket,
    vertical_lift_oneform,
)
from .core import (
    AlgebroidError,
    EForm,
    EMultivector,
    Section,
    SkewAlgebroid,
    VectorFieldExpr,
    det,
    make_algebroid,
    pair,
    perm_sign,
    wedge,
    wedge_sections,
    zero_field,
)

__all__ = [
    "AlgebroidError",
    "EForm",
    "EMultivector",
    "Section",
    "SkewAlgebroid",
    "VectorFieldExpr",
    "almost_lie_defect",
    "anchor_apply",
    "anchor_vf",
    "bracket",
    "complete_lift",
    "de_rham",
    "det",
    "frame_derivative",
    "hamiltonian_vf",
    "interior_product",
    "is_almost_lie",
    "is_lie",
    "jacobiator",
    "lie_derivative",
    "lie_obstructions",
    "linear_bivector",
    "linear_function",
    "make_algebroid",
    "pair",
    "perm_sign",
    "poisson_bracket",
    "vertical_lift_oneform",
    "wedge",
    "wedge_sections",
    "zero_field",
]
