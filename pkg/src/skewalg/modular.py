"""Modular forms, characteristic forms of line-bundle E-connections, relative classes.

Classes are represented by their representative with respect to the
coordinate trivialization ``e_1 ^ ... ^ e_n (x) dx^1 ^ ... ^ dx^m`` of
``L^E = top(E) (x) top(T*M)``; representatives of one class differ by
``d f`` for a basic function ``f``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .algebroid import (
    AlgebroidError,
    EForm,
    EMultivector,
    SkewAlgebroid,
    VectorFieldExpr,
    anchor_vf,
    de_rham,
    frame_derivative,
    hamiltonian_vf,
    lie_derivative,
    vertical_lift_oneform,
)
from .algebroid.core import _clean, _sum
from .expr import (
    ONE,
    ZERO,
    Expr,
    SingularEvaluationError,
    compile_expr,
    diff_expr,
    exprs_equal,
    free_symbols,
    simplify,
    subst_expr,
)
from .reduction.subalgebroid import on_submanifold, restrict, subalgebroid_check

GAUGE_NOTE = "representatives differ by d f for basic f"


@dataclass(frozen=True, eq=False)
class ModularClassRep:
    representative: EForm
    note: str = GAUGE_NOTE

    def is_zero(self, **kwargs) -> bool:
        return self.representative.is_zero(**kwargs)

    def equals(self, other, **kwargs) -> bool:
        rep = other.representative if isinstance(other, ModularClassRep) else other
        return self.representative.equals(rep, **kwargs)

    def __str__(self) -> str:
        return str(self.representative)


@dataclass(frozen=True, eq=False)
class EConnection:
    """E-connection on a rank-s bundle with frame f_1..f_s.

    ``gamma[(i, k, j)]`` is Gamma^j_ik: nabla_{e_i} f_k = sum_j Gamma^j_ik f_j.
    """

    algebroid: SkewAlgebroid
    rank: int
    gamma: dict = field(default_factory=dict)

    def coefficient(self, i: int, k: int, j: int) -> Expr:
        return self.gamma.get((i, k, j), ZERO)

    def trace(self, i: int) -> Expr:
        """sum_j Gamma^j_ij."""
        return simplify(_sum(self.coefficient(i, j, j) for j in range(1, self.rank + 1)))


def make_connection(E: SkewAlgebroid, rank: int, gamma) -> EConnection:
    if rank < 1:
        raise AlgebroidError("connection rank must be >= 1")
    out = {}
    for key, val in dict(gamma).items():
        i, k, j = key
        if not 1 <= i <= E.n:
            raise AlgebroidError(f"frame index {i} out of range 1..{E.n}")
        if not (1 <= k <= rank and 1 <= j <= rank):
            raise AlgebroidError(f"bundle index out of range 1..{rank} in {key}")
        out[(i, k, j)] = E.expr(val)
    return EConnection(E, rank, _clean(out))


@dataclass(frozen=True, eq=False)
class BundleMetric:
    algebroid: SkewAlgebroid
    matrix: tuple  # rows of Exprs, g_ij

    def __getitem__(self, ij) -> Expr:
        i, j = ij
        return self.matrix[i - 1][j - 1]

    def inner(self, v, w) -> Expr:
        n = len(self.matrix)
        return simplify(_sum(v[i] * self.matrix[i][j] * w[j] for i in range(n) for j in range(n)))


def make_metric(E: SkewAlgebroid, rows, samples: int = 16, seed: int = 0) -> BundleMetric:
    from .reduction.linear import mat_det

    rows = [[E.expr(v) for v in row] for row in rows]
    n = E.n
    if len(rows) != n or any(len(r) != n for r in rows):
        raise AlgebroidError(f"metric must be {n}x{n}")
    for i in range(n):
        for j in range(i + 1, n):
            if not exprs_equal(rows[i][j], rows[j][i]):
                raise AlgebroidError(f"metric is not symmetric at ({i + 1},{j + 1})")
    d = mat_det(rows)
    if d == ZERO:
        raise AlgebroidError("degenerate metric (determinant is identically zero)")
    names = sorted(free_symbols(d))
    if names:
        f = compile_expr(d, names)
        rng = random.Random(seed)
        for _ in range(samples):
            vals = [rng.uniform(0.5, 2.0) for _ in names]
            try:
                v = f(*vals)
            except SingularEvaluationError:
                continue
            if abs(v) <= 1e-12:
                raise AlgebroidError("metric degenerate at a sample point")
    return BundleMetric(E, tuple(tuple(r) for r in rows))


def identity_metric(E: SkewAlgebroid) -> BundleMetric:
    return BundleMetric(E, tuple(tuple(ONE if i == j else ZERO for j in range(E.n)) for i in range(E.n)))


# ------------------------------------------------------------------ forms


def modular_form(E: SkewAlgebroid) -> ModularClassRep:
    """phi_i = sum_k c^k_ik + sum_a d rho^a_i / dx^a."""
    coeffs = {}
    for i in range(1, E.n + 1):
        terms = [E.struct(i, k, k) for k in range(1, E.n + 1)]
        terms += [diff_expr(E.anchor(i, a), x) for a, x in enumerate(E.coords, 1)]
        coeffs[(i,)] = _sum(terms)
    return ModularClassRep(EForm(E, 1, _clean(coeffs)))


def char_form(E: SkewAlgebroid, conn: EConnection, sigma=ONE) -> EForm:
    """Characteristic form of the section sigma * f_1 of a line bundle.

    nabla_{e_i}(sigma f_1) = (rho(e_i)(sigma)/sigma + Gamma^1_i1) sigma f_1.
    """
    if conn.rank != 1:
        raise AlgebroidError("characteristic forms need a line bundle connection (rank 1)")
    if conn.algebroid is not E:
        raise AlgebroidError("connection belongs to a different algebroid")
    sigma = E.expr(sigma)
    if sigma == ZERO:
        raise AlgebroidError("sigma is identically zero")
    coeffs = {}
    for i in range(1, E.n + 1):
        coeffs[(i,)] = frame_derivative(E, i, sigma) / sigma + conn.coefficient(i, 1, 1)
    return EForm(E, 1, _clean(coeffs))


def canonical_connection(E: SkewAlgebroid) -> EConnection:
    """The canonical connection on L^E in the coordinate frame.

    nabla_X (Y (x) mu) = L_X Y (x) mu + Y (x) L_{rho(X)} mu, evaluated on
    Y = e_1 ^ ... ^ e_n (Lie derivative of multisections) and
    mu = dx^1 ^ ... ^ dx^m (divergence of the anchor field).
    """
    top = EMultivector(E, E.n, {tuple(range(1, E.n + 1)): ONE})
    gamma = {}
    for i in range(1, E.n + 1):
        lt = lie_derivative(E, E.e(i), top)
        on_top = lt.coeffs.get(tuple(range(1, E.n + 1)), ZERO)
        div = anchor_vf(E, E.e(i)).divergence() if E.m else ZERO
        gamma[(i, 1, 1)] = on_top + div
    return EConnection(E, 1, _clean(gamma))


def top_power_connection(conn: EConnection) -> EConnection:
    """Induced connection on the top exterior power: Gamma = trace."""
    E = conn.algebroid
    return EConnection(E, 1, _clean({(i, 1, 1): conn.trace(i) for i in range(1, E.n + 1)}))


# ---------------------------------------------------------- Hamiltonians


def mechanical_hamiltonian(E: SkewAlgebroid, g: BundleMetric, V=ZERO) -> Expr:
    """H = 1/2 xi^T g^{-1} xi + V(x)."""
    from .reduction.linear import mat_inverse

    try:
        ginv = mat_inverse([list(r) for r in g.matrix])
    except ZeroDivisionError:
        raise AlgebroidError("singular metric") from None
    xi = [E.expr(x, extra=E.dual_coords) for x in E.dual_coords]
    kin = _sum(xi[i] * ginv[i][j] * xi[j] for i in range(E.n) for j in range(E.n) if ginv[i][j] != ZERO)
    return simplify(kin / 2 + E.expr(V))


def divergence_xh(E: SkewAlgebroid, H) -> Expr:
    """div of X_H with respect to dxi ^ dx."""
    return hamiltonian_vf(E, H).divergence()


def modular_pairing(E: SkewAlgebroid, H, phi: EForm | None = None) -> Expr:
    """(phi)^v (H) = sum_i phi_i dH/dxi_i."""
    phi = modular_form(E).representative if phi is None else phi
    return vertical_lift_oneform(E, phi)(E.expr(H, extra=E.dual_coords))


@dataclass
class ResidualReport:
    value: float
    used: int
    skipped: list = field(default_factory=list)

    def __float__(self) -> float:
        return self.value


def mt0_residual(E: SkewAlgebroid, H, points) -> ResidualReport:
    """max over points of |div X_H - (phi)^v(H)|, both sides built symbolically."""
    H = E.expr(H, extra=E.dual_coords)
    lhs = divergence_xh(E, H)
    rhs = modular_pairing(E, H)
    names = sorted(set(E.coords) | set(E.dual_coords) | set(E.params) | free_symbols(H))
    fl = compile_expr(lhs, names)
    fr = compile_expr(rhs, names)
    worst = 0.0
    used = 0
    skipped = []
    for env in points:
        try:
            vals = [float(env[n]) for n in names]
        except KeyError as exc:
            raise AlgebroidError(f"sample point does not bind {exc.args[0]!r}") from None
        try:
            v = abs(fl(*vals) - fr(*vals))
        except SingularEvaluationError:
            skipped.append(env)
            continue
        if not math.isfinite(v):
            skipped.append(env)
            continue
        worst = max(worst, v)
        used += 1
    return ResidualReport(worst, used, skipped)


def random_points(names, count: int, seed: int = 0, low=-2.0, high=2.0, ranges=None) -> list[dict]:
    """Random sample environments; ``ranges`` overrides the interval per name."""
    rng = random.Random(seed)
    ranges = ranges or {}
    return [{n: rng.uniform(*ranges.get(n, (low, high))) for n in names} for _ in range(count)]


# ------------------------------------------------------- relative classes


def normal_connection(E: SkewAlgebroid, n0: int, m0: int) -> EConnection:
    """Linear holonomy connection on nu(E0) = E|M0 / E0 over E0.

    nabla_{e_i}[e_J] = sum_K c^K_iJ(x^alpha, 0) [e_K]; normal frame index
    J - n0 runs over 1..n - n0.
    """
    report = subalgebroid_check(E, n0, m0)
    if not report:
        raise AlgebroidError("not a subalgebroid: " + "; ".join(report.violations))
    E0 = restrict(E, n0, m0)
    s = E.n - n0
    if s == 0:
        raise AlgebroidError("E0 = E has a zero normal bundle")
    at = on_submanifold(E, m0)
    gamma = {}
    for i in range(1, n0 + 1):
        for J in range(n0 + 1, E.n + 1):
            for K in range(n0 + 1, E.n + 1):
                gamma[(i, J - n0, K - n0)] = subst_expr(E.struct(i, J, K), at)
    return EConnection(E0, s, _clean(gamma))


def relative_modular_class(E: SkewAlgebroid, n0: int, m0: int) -> ModularClassRep:
    """Representative -sum_K c^K_iK(x^alpha, 0) e^i over E0."""
    report = subalgebroid_check(E, n0, m0)
    if not report:
        raise AlgebroidError("not a subalgebroid: " + "; ".join(report.violations))
    E0 = restrict(E, n0, m0)
    at = on_submanifold(E, m0)
    coeffs = {}
    for i in range(1, n0 + 1):
        coeffs[(i,)] = -_sum(subst_expr(E.struct(i, K, K), at) for K in range(n0 + 1, E.n + 1))
    return ModularClassRep(EForm(E0, 1, _clean(coeffs)))


def exactness_check(E: SkewAlgebroid, alpha: EForm, witness) -> bool:
    """True iff alpha = d(witness)."""
    f = E.function(witness)
    return de_rham(E, f).equals(alpha)


def is_unimodular_with_witness(E: SkewAlgebroid, witness) -> bool:
    """Modular class vanishes, certified by a basic function f with phi = d f."""
    return exactness_check(E, modular_form(E).representative, witness)


def hamiltonian_vertical_identity(E: SkewAlgebroid, f) -> VectorFieldExpr:
    """(d f)^v + X_f for basic f; identically zero."""
    f = E.expr(f)
    return vertical_lift_oneform(E, de_rham(E, E.function(f))) + hamiltonian_vf(E, f)
