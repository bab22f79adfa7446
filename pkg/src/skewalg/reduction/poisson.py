"""Poisson bivectors on a chart and their cotangent algebroids."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebroid import AlgebroidError, SkewAlgebroid, VectorFieldExpr, make_algebroid
from ..algebroid.core import _check_names, _clean, _sum
from ..expr import ZERO, Expr, coerce, diff_expr, free_symbols, simplify


@dataclass(frozen=True, eq=False)
class PoissonBivector:
    """Lambda = sum_{i<j} Lambda^{ij} d_i ^ d_j."""

    coords: tuple[str, ...]
    lam: dict  # (i, j), i < j, 1-based
    params: tuple[str, ...] = ()

    @property
    def m(self) -> int:
        return len(self.coords)

    def __call__(self, i: int, j: int) -> Expr:
        if i == j:
            return ZERO
        if i < j:
            return self.lam.get((i, j), ZERO)
        return simplify(-self.lam.get((j, i), ZERO))


def make_bivector(coords, entries, params=()) -> PoissonBivector:
    coords = tuple(coords)
    params = tuple(params)
    _check_names({"coordinate": coords, "parameter": params})
    allowed = set(coords) | set(params)
    lam = {}
    for (i, j), val in dict(entries).items():
        if not (1 <= i <= len(coords) and 1 <= j <= len(coords)):
            raise AlgebroidError(f"index out of range in Lambda^{i}{j}")
        if i == j:
            raise AlgebroidError("diagonal entries violate antisymmetry")
        e = simplify(coerce(val, allowed))
        if free_symbols(e) - allowed:
            raise AlgebroidError(f"unknown symbols in Lambda^{i}{j}")
        key = (min(i, j), max(i, j))
        if key in lam:
            raise AlgebroidError(f"duplicate entry for Lambda^{key[0]}{key[1]}")
        lam[key] = e if i < j else simplify(-e)
    return PoissonBivector(coords, _clean(lam), params)


def cotangent_algebroid(L: PoissonBivector) -> SkewAlgebroid:
    """T*M with frame dx^i: rho(dx^i) = Lambda^{ij} d_j, [dx^i, dx^j] = d_k Lambda^{ij} dx^k."""
    m = L.m
    if m < 1:
        raise AlgebroidError("cotangent algebroid needs m >= 1")
    c = {}
    rho = {}
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if L(i, j) != ZERO:
                rho[(i, j)] = L(i, j)
            if i < j:
                for k in range(1, m + 1):
                    d = diff_expr(L(i, j), L.coords[k - 1])
                    if d != ZERO:
                        c[(i, j, k)] = d
    return make_algebroid(
        m, m, c=c, rho=rho, coords=L.coords, frame=[f"dx{i}" for i in range(1, m + 1)], params=L.params
    )


def poisson_modular_vector_field(L: PoissonBivector) -> VectorFieldExpr:
    """Z^i = sum_k d_k Lambda^{ik} (coordinate volume)."""
    comps = tuple(
        simplify(_sum(diff_expr(L(i, k), L.coords[k - 1]) for k in range(1, L.m + 1))) for i in range(1, L.m + 1)
    )
    return VectorFieldExpr(L.coords, comps)


def schouten_jacobiator(L: PoissonBivector) -> dict:
    """Nonzero components of the cyclic sum Lambda^{il} d_l Lambda^{jk} + cyclic, i < j < k."""
    out = {}
    m = L.m
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            for k in range(j + 1, m + 1):
                terms = []
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for l in range(1, m + 1):
                        terms.append(L(a, l) * diff_expr(L(b, c), L.coords[l - 1]))
                out[(i, j, k)] = _sum(terms)
    return _clean(out)


def is_poisson(L: PoissonBivector) -> bool:
    return not schouten_jacobiator(L)
