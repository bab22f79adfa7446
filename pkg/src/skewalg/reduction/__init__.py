"""Subalgebroids, bracket projection, the sleigh, products, morphisms, relations, Poisson data."""

from .linear import (
    change_basis,
    mat_det,
    mat_inverse,
    mat_mul,
    nullspace,
    orthogonal_complement,
    project_along,
    rank,
)
from .morphism import (
    LinearRelation,
    Morphism,
    carrier_bundle,
    compose,
    direct_product,
    graph_relation,
    identity_morphism,
    identity_relation,
    inclusion,
    inclusion_residual,
    make_morphism,
    morphism_check,
    morphism_modular_class,
    pullback_form,
    pullback_function,
    relation_modular_class,
    swap_relation,
)
from .poisson import (
    PoissonBivector,
    cotangent_algebroid,
    is_poisson,
    make_bivector,
    poisson_modular_vector_field,
    schouten_jacobiator,
)
from .sleigh import chaplygin_sleigh, se2, sleigh_basis, sleigh_metric
from .subalgebroid import CheckReport, permute_frame, restrict, subalgebroid_check

__all__ = [
    "CheckReport",
    "LinearRelation",
    "Morphism",
    "PoissonBivector",
    "carrier_bundle",
    "change_basis",
    "chaplygin_sleigh",
    "compose",
    "cotangent_algebroid",
    "direct_product",
    "graph_relation",
    "identity_morphism",
    "identity_relation",
    "inclusion",
    "inclusion_residual",
    "is_poisson",
    "make_bivector",
    "make_morphism",
    "mat_det",
    "mat_inverse",
    "mat_mul",
    "morphism_check",
    "morphism_modular_class",
    "nullspace",
    "orthogonal_complement",
    "permute_frame",
    "poisson_modular_vector_field",
    "project_along",
    "pullback_form",
    "pullback_function",
    "rank",
    "relation_modular_class",
    "restrict",
    "schouten_jacobiator",
    "se2",
    "sleigh_basis",
    "sleigh_metric",
    "subalgebroid_check",
    "swap_relation",
]
