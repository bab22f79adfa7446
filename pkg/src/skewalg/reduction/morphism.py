"""Morphisms, direct products and linear relations between skew algebroids."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..algebroid import AlgebroidError, EForm, SkewAlgebroid, de_rham
from ..algebroid.core import _check_names, _clean, _sum, det
from ..expr import (
    ONE,
    ZERO,
    Expr,
    Sym,
    coerce,
    diff_expr,
    free_symbols,
    simplify,
    subst_expr,
)
from .subalgebroid import CheckReport, on_submanifold, residual_check, restrict


@dataclass(frozen=True, eq=False)
class Morphism:
    """Bundle map E1 -> E2 over phi: e_i |-> sum_j F[j][i] f_j."""

    source: SkewAlgebroid
    target: SkewAlgebroid
    F: tuple  # n2 rows of n1 Exprs in source coordinates
    phi: tuple  # m2 Exprs in source coordinates

    def base_bindings(self) -> dict:
        return dict(zip(self.target.coords, self.phi))


def make_morphism(source: SkewAlgebroid, target: SkewAlgebroid, F, phi=None) -> Morphism:
    allowed = set(source.coords) | set(source.params) | set(target.params)
    if phi is None:
        if source.coords != target.coords:
            raise AlgebroidError("base map required when the base coordinates differ")
        phi = list(source.coords)
    phi = tuple(simplify(coerce(v, allowed)) for v in phi)
    if len(phi) != target.m:
        raise AlgebroidError(f"base map needs {target.m} components")
    F = tuple(tuple(simplify(coerce(v, allowed)) for v in row) for row in F)
    if len(F) != target.n or any(len(r) != source.n for r in F):
        raise AlgebroidError(f"fiber map must be {target.n}x{source.n}")
    if source.m == 0:
        for row in F:
            for v in row:
                if free_symbols(v) - set(source.params) - set(target.params):
                    raise AlgebroidError("point-base source needs a constant fiber map")
    return Morphism(source, target, F, phi)


def identity_morphism(E: SkewAlgebroid) -> Morphism:
    F = [[ONE if i == j else ZERO for j in range(E.n)] for i in range(E.n)]
    return make_morphism(E, E, F)


def inclusion(E: SkewAlgebroid, n0: int, m0: int) -> Morphism:
    """E0 -> E for the adapted subalgebroid (first n0 directions over x^{m0+1..} = 0)."""
    E0 = restrict(E, n0, m0)
    F = [[ONE if i == j else ZERO for j in range(n0)] for i in range(E.n)]
    phi = list(E.coords[:m0]) + [0] * (E.m - m0)
    return make_morphism(E0, E, F, phi)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g o f."""
    if f.target is not g.source:
        raise AlgebroidError("morphisms are not composable")
    at = f.base_bindings()
    Fg = [[subst_expr(v, at) for v in row] for row in g.F]
    F = [
        [_sum(Fg[k][j] * f.F[j][i] for j in range(len(f.F))) for i in range(f.source.n)]
        for k in range(g.target.n)
    ]
    phi = [subst_expr(v, at) for v in g.phi]
    return make_morphism(f.source, g.target, F, phi)


def pullback_form(mor: Morphism, alpha: EForm) -> EForm:
    """(Phi^* alpha)(e_I) = alpha(Phi e_I) at phi(x), any degree."""
    if alpha.algebroid is not mor.target:
        raise AlgebroidError("form does not live on the morphism target")
    E1 = mor.source
    p = alpha.degree
    at = mor.base_bindings()
    coeffs = {}
    for I in combinations(range(1, E1.n + 1), p):
        terms = []
        for K, v in alpha.coeffs.items():
            minor = det([[mor.F[k - 1][i - 1] for i in I] for k in K])
            if minor != ZERO:
                terms.append(subst_expr(v, at) * minor)
        coeffs[I] = _sum(terms)
    return EForm(E1, p, _clean(coeffs))


def pullback_function(mor: Morphism, f) -> Expr:
    return subst_expr(mor.target.expr(f), mor.base_bindings())


def morphism_check(mor: Morphism, samples: int = 32, tol: float = 1e-9, seed: int = 0) -> CheckReport:
    """Phi^* d2 = d1 Phi^* on the generators x'^b and f^j of the target."""
    E1, E2 = mor.source, mor.target
    items = []
    for b, name in enumerate(E2.coords, 1):
        g = E2.function(Sym(name))
        lhs = pullback_form(mor, de_rham(E2, g))
        rhs = de_rham(E1, E1.function(mor.phi[b - 1]))
        for key in sorted(set(lhs.coeffs) | set(rhs.coeffs)):
            items.append((f"d x'^{b} on e^{key}", simplify(lhs.coeffs.get(key, ZERO) - rhs.coeffs.get(key, ZERO))))
    for j in range(1, E2.n + 1):
        lhs = pullback_form(mor, de_rham(E2, E2.dual(j)))
        rhs = de_rham(E1, pullback_form(mor, E2.dual(j)))
        for key in sorted(set(lhs.coeffs) | set(rhs.coeffs)):
            items.append((f"d f^{j} on {key}", simplify(lhs.coeffs.get(key, ZERO) - rhs.coeffs.get(key, ZERO))))
    return residual_check(items, samples, tol, seed)


def morphism_modular_class(mor: Morphism, check: bool = True):
    """mod(E1) - Phi^* mod(E2)."""
    from ..modular import ModularClassRep, modular_form

    if check:
        report = morphism_check(mor)
        if not report:
            raise AlgebroidError("not a morphism: " + "; ".join(report.violations))
    a = modular_form(mor.source).representative
    b = pullback_form(mor, modular_form(mor.target).representative)
    return ModularClassRep(a - b)


# ---------------------------------------------------------------- products


def _fresh(name: str, taken: set) -> str:
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def direct_product(E1: SkewAlgebroid, E2: SkewAlgebroid):
    """E1 x E2 with block-diagonal structure; returns (product, p1, p2).

    Clashing coordinate or frame names of E2 get a numeric suffix; parameters
    with the same name are shared.
    """
    params = E1.params + tuple(p for p in E2.params if p not in E1.params)
    taken = set(E1.coords) | set(params)
    ren = {}
    coords2 = []
    for x in E2.coords:
        new = _fresh(x, taken) if x in taken else x
        taken.add(new)
        coords2.append(new)
        if new != x:
            ren[x] = Sym(new)
    frame_taken = set(E1.frame)
    frame2 = []
    for f in E2.frame:
        new = _fresh(f, frame_taken) if f in frame_taken else f
        frame_taken.add(new)
        frame2.append(new)
    coords = E1.coords + tuple(coords2)
    n1, m1 = E1.n, E1.m
    n = n1 + E2.n
    dual = tuple(f"xi{i}" for i in range(1, n + 1))
    fiber = tuple(f"y{i}" for i in range(1, n + 1))
    if set(dual + fiber) & set(coords + params):
        dual = tuple(f"xi_{i}" for i in range(1, n + 1))
        fiber = tuple(f"y_{i}" for i in range(1, n + 1))
    _check_names({"coordinate": coords, "parameter": params, "dual": dual, "fiber": fiber})
    c = dict(E1.c)
    for (i, j, k), v in E2.c.items():
        c[(i + n1, j + n1, k + n1)] = subst_expr(v, ren) if ren else v
    rho = dict(E1.rho)
    for (i, a), v in E2.rho.items():
        rho[(i + n1, a + m1)] = subst_expr(v, ren) if ren else v
    P = SkewAlgebroid(coords, E1.frame + tuple(frame2), params, _clean(c), _clean(rho), dual, fiber)
    F1 = [[ONE if j == i else ZERO for j in range(n)] for i in range(n1)]
    F2 = [[ONE if j == i + n1 else ZERO for j in range(n)] for i in range(E2.n)]
    p1 = make_morphism(P, E1, F1, list(coords[:m1]))
    p2 = make_morphism(P, E2, F2, list(coords2))
    return P, p1, p2


# --------------------------------------------------------------- relations


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """A rank-r carrier with legs into E1 and E2 (need not be a subalgebroid)."""

    carrier: SkewAlgebroid
    leg1: Morphism
    leg2: Morphism

    def __post_init__(self):
        if self.leg1.source is not self.carrier or self.leg2.source is not self.carrier:
            raise AlgebroidError("both legs must start at the carrier")


def carrier_bundle(rank: int, coords=(), params=()) -> SkewAlgebroid:
    """A bare vector bundle used as the carrier of a relation."""
    from ..algebroid import make_algebroid

    return make_algebroid(len(coords), rank, coords=coords, frame=[f"r{i}" for i in range(1, rank + 1)], params=params)


def graph_relation(mor: Morphism) -> LinearRelation:
    """Graph of Phi inside E1 x E2, legs obtained through the product projections."""
    E1, E2 = mor.source, mor.target
    P, p1, p2 = direct_product(E1, E2)
    R = carrier_bundle(E1.n, E1.coords, P.params)
    # iota: R -> P, r_i |-> (e_i, Phi e_i) over x |-> (x, phi(x))
    F = [[ONE if j == i else ZERO for j in range(E1.n)] for i in range(E1.n)]
    F += [list(row) for row in mor.F]
    phi = list(E1.coords) + list(mor.phi)
    iota = make_morphism(R, P, F, phi)
    return LinearRelation(R, compose(p1, iota), compose(p2, iota))


def identity_relation(E: SkewAlgebroid) -> LinearRelation:
    R = carrier_bundle(E.n, E.coords, E.params)
    F = [[ONE if i == j else ZERO for j in range(E.n)] for i in range(E.n)]
    leg = make_morphism(R, E, F, list(E.coords))
    return LinearRelation(R, leg, leg)


def swap_relation(rel: LinearRelation) -> LinearRelation:
    return LinearRelation(rel.carrier, rel.leg2, rel.leg1)


def relation_modular_class(rel: LinearRelation) -> EForm:
    """j1^* mod(E1) - j2^* mod(E2) on the carrier."""
    from ..modular import modular_form

    a = pullback_form(rel.leg1, modular_form(rel.leg1.target).representative)
    b = pullback_form(rel.leg2, modular_form(rel.leg2.target).representative)
    return a - b


def inclusion_residual(E: SkewAlgebroid, n0: int, m0: int) -> EForm:
    """sum_A d rho^A_i / dx^A at M0 on E0, the normal part of the anchor divergence.

    mod(E0) - j^* mod(E) equals the relative class minus this form; it
    vanishes when M0 = M or the anchor of E0 has no normal derivative.
    """
    E0 = restrict(E, n0, m0)
    at = on_submanifold(E, m0)
    coeffs = {}
    for i in range(1, n0 + 1):
        coeffs[(i,)] = _sum(subst_expr(diff_expr(E.anchor(i, A), E.coords[A - 1]), at) for A in range(m0 + 1, E.m + 1))
    return EForm(E0, 1, _clean(coeffs))
