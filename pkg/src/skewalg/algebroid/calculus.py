"""Bracket, anchor, de Rham derivative and the other local calculus of a skew algebroid."""

from __future__ import annotations

from itertools import combinations

from ..expr import ZERO, Expr, diff_expr, free_symbols, simplify
from .core import (
    AlgebroidError,
    EForm,
    EMultivector,
    SkewAlgebroid,
    VectorFieldExpr,
    _clean,
    _Graded,
    _sum,
    pair,
    wedge_sections,
)


def _host(E: SkewAlgebroid, *items: _Graded) -> None:
    for it in items:
        if it.algebroid is not E:
            raise AlgebroidError("argument belongs to a different algebroid")


def _section(E: SkewAlgebroid, X) -> EMultivector:
    if not isinstance(X, EMultivector) or X.degree != 1:
        raise AlgebroidError("expected a section (degree-1 multivector)")
    _host(E, X)
    return X


def anchor_apply(E: SkewAlgebroid, X: EMultivector, f: Expr) -> Expr:
    """rho(X)(f) = sum_i X^i rho^a_i df/dx^a."""
    terms = []
    for (i,), xi in X.coeffs.items():
        for a, name in enumerate(E.coords, start=1):
            r = E.anchor(i, a)
            if r != ZERO:
                terms.append(xi * r * diff_expr(f, name))
    return simplify(_sum(terms))


def frame_derivative(E: SkewAlgebroid, i: int, f: Expr) -> Expr:
    """rho(e_i)(f)."""
    return simplify(_sum(E.anchor(i, a) * diff_expr(f, x) for a, x in enumerate(E.coords, 1) if E.anchor(i, a) != ZERO))


def anchor_vf(E: SkewAlgebroid, X) -> VectorFieldExpr:
    X = _section(E, X)
    comps = []
    for a in range(1, E.m + 1):
        comps.append(simplify(_sum(v * E.anchor(i, a) for (i,), v in X.coeffs.items())))
    return VectorFieldExpr(E.coords, tuple(comps))


def bracket(E: SkewAlgebroid, X, Y) -> EMultivector:
    """[X,Y]^k = X^i Y^j c^k_ij + rho(X)(Y^k) - rho(Y)(X^k)."""
    X, Y = _section(E, X), _section(E, Y)
    xs, ys = X.components(), Y.components()
    coeffs = {}
    for k in range(1, E.n + 1):
        terms = []
        for i in range(1, E.n + 1):
            if xs[i - 1] == ZERO:
                continue
            for j in range(1, E.n + 1):
                if ys[j - 1] == ZERO:
                    continue
                c = E.struct(i, j, k)
                if c != ZERO:
                    terms.append(xs[i - 1] * ys[j - 1] * c)
        terms.append(anchor_apply(E, X, ys[k - 1]))
        terms.append(-anchor_apply(E, Y, xs[k - 1]))
        coeffs[(k,)] = _sum(terms)
    return EMultivector(E, 1, _clean(coeffs))


def jacobiator(E: SkewAlgebroid, X, Y, Z) -> EMultivector:
    """[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]."""
    return (
        bracket(E, bracket(E, X, Y), Z)
        + bracket(E, bracket(E, Y, Z), X)
        + bracket(E, bracket(E, Z, X), Y)
    )


def almost_lie_defect(E: SkewAlgebroid, X, Y) -> VectorFieldExpr:
    """rho([X,Y]) - [rho(X), rho(Y)]."""
    return anchor_vf(E, bracket(E, X, Y)) - anchor_vf(E, X).bracket(anchor_vf(E, Y))


def is_lie(E: SkewAlgebroid, trials: int = 32) -> bool:
    """True iff the bivector is Poisson.

    The Jacobiator is not tensorial unless the anchor preserves brackets, so
    the test is: Jacobiator zero on frame triples and almost-Lie defect zero
    on frame pairs.
    """
    return not lie_obstructions(E, trials=trials)


def lie_obstructions(E: SkewAlgebroid, trials: int = 32) -> list[str]:
    """Human-readable list of the frame triples/pairs where the Lie conditions fail."""
    frame = E.frame_sections()
    out = []
    for i, j, k in combinations(range(E.n), 3):
        if not jacobiator(E, frame[i], frame[j], frame[k]).is_zero(trials=trials):
            out.append(f"jacobiator({E.frame[i]},{E.frame[j]},{E.frame[k]}) != 0")
    for i, j in combinations(range(E.n), 2):
        if not almost_lie_defect(E, frame[i], frame[j]).is_zero(trials=trials):
            out.append(f"anchor defect({E.frame[i]},{E.frame[j]}) != 0")
    return out


def is_almost_lie(E: SkewAlgebroid, trials: int = 32) -> bool:
    frame = E.frame_sections()
    return all(
        almost_lie_defect(E, frame[i], frame[j]).is_zero(trials=trials)
        for i, j in combinations(range(E.n), 2)
    )


def de_rham(E: SkewAlgebroid, omega: EForm) -> EForm:
    """Exterior derivative by the Koszul formula evaluated on frame elements.

    (d w)(e_J) = sum_i (-1)^i rho(e_{j_i}) w(e_{J - j_i})
               + sum_{i<l} (-1)^{i+l} w([e_{j_i}, e_{j_l}], e_{J - j_i - j_l})
    """
    if not isinstance(omega, EForm):
        raise AlgebroidError("de_rham expects an EForm")
    _host(E, omega)
    p = omega.degree
    coeffs = {}
    if p + 1 <= E.n:
        for J in combinations(range(1, E.n + 1), p + 1):
            terms = []
            for i, j in enumerate(J):
                rest = J[:i] + J[i + 1:]
                w = omega.coeffs.get(rest)
                if w is not None:
                    t = frame_derivative(E, j, w)
                    terms.append(t if i % 2 == 0 else -t)
            for i in range(len(J)):
                for l in range(i + 1, len(J)):
                    rest = J[:i] + J[i + 1:l] + J[l + 1:]
                    for k in range(1, E.n + 1):
                        c = E.struct(J[i], J[l], k)
                        if c == ZERO:
                            continue
                        w = omega[(k,) + rest]
                        if w == ZERO:
                            continue
                        t = c * w
                        terms.append(t if (i + l) % 2 == 0 else -t)
            coeffs[J] = _sum(terms)
    return EForm(E, p + 1, _clean(coeffs))


def interior_product(X: EMultivector, omega: EForm) -> EForm:
    """(i_X w)(Y_1..Y_{p-1}) = w(X, Y_1, ..., Y_{p-1})."""
    E = omega.algebroid
    X = _section(E, X)
    if omega.degree == 0:
        raise AlgebroidError("interior product of a degree-0 form")
    coeffs = {}
    xs = X.components()
    for K in combinations(range(1, E.n + 1), omega.degree - 1):
        terms = []
        for k in range(1, E.n + 1):
            if xs[k - 1] == ZERO:
                continue
            w = omega[(k,) + K]
            if w != ZERO:
                terms.append(xs[k - 1] * w)
        coeffs[K] = _sum(terms)
    return EForm(E, omega.degree - 1, _clean(coeffs))


def lie_derivative(E: SkewAlgebroid, X, T: _Graded) -> _Graded:
    """Lie derivative of a function, multisection or form along a section."""
    X = _section(E, X)
    _host(E, T)
    if T.degree == 0:
        return type(T)(E, 0, _clean({(): anchor_apply(E, X, T.value)}))
    brackets = {j: bracket(E, X, E.e(j)) for j in range(1, E.n + 1)}
    if isinstance(T, EMultivector):
        out = EMultivector(E, T.degree, {})
        for J, tj in T.coeffs.items():
            out = out + EMultivector(E, T.degree, _clean({J: anchor_apply(E, X, tj)}))
            for i, j in enumerate(J):
                args = [E.e(q) for q in J]
                args[i] = brackets[j]
                out = out + wedge_sections(E, args) * tj
        return out
    coeffs = {}
    for J in combinations(range(1, E.n + 1), T.degree):
        terms = [anchor_apply(E, X, T.coeffs.get(J, ZERO))]
        for i, j in enumerate(J):
            args = [E.e(q) for q in J]
            args[i] = brackets[j]
            terms.append(-pair(T, args))
        coeffs[J] = _sum(terms)
    return EForm(E, T.degree, _clean(coeffs))


# --------------------------------------------------------- structures on E*, E


def _check_symbols(E: SkewAlgebroid, H: Expr, extra) -> None:
    allowed = set(E.scalar_symbols) | set(extra)
    stray = free_symbols(H) - allowed
    if stray:
        raise AlgebroidError(f"stray symbols {sorted(stray)} in Hamiltonian")


def hamiltonian_vf(E: SkewAlgebroid, H) -> VectorFieldExpr:
    """X_H on E* in coordinates (x^a, xi_i).

    xi_j' = c^k_ij xi_k dH/dxi_i - rho^a_j dH/dx^a,   x^b' = rho^b_i dH/dxi_i
    """
    H = E.expr(H, extra=E.dual_coords)
    _check_symbols(E, H, E.dual_coords)
    xi = E.dual_coords
    dH_dxi = [diff_expr(H, name) for name in xi]
    dH_dx = [diff_expr(H, name) for name in E.coords]
    comps = []
    for b in range(1, E.m + 1):
        comps.append(_sum(E.anchor(i, b) * dH_dxi[i - 1] for i in range(1, E.n + 1)))
    for j in range(1, E.n + 1):
        terms = []
        for i in range(1, E.n + 1):
            if dH_dxi[i - 1] == ZERO:
                continue
            for k in range(1, E.n + 1):
                c = E.struct(i, j, k)
                if c != ZERO:
                    terms.append(c * E.expr(xi[k - 1], extra=xi) * dH_dxi[i - 1])
        for a in range(1, E.m + 1):
            r = E.anchor(j, a)
            if r != ZERO:
                terms.append(-r * dH_dx[a - 1])
        comps.append(_sum(terms))
    return VectorFieldExpr(E.coords + xi, tuple(simplify(c) for c in comps))


def vertical_lift_oneform(E: SkewAlgebroid, alpha: EForm) -> VectorFieldExpr:
    """sum_i alpha_i(x) d/dxi_i."""
    if not isinstance(alpha, EForm) or alpha.degree != 1:
        raise AlgebroidError("vertical lift needs a 1-form")
    _host(E, alpha)
    comps = tuple([ZERO] * E.m + alpha.components())
    return VectorFieldExpr(E.coords + E.dual_coords, comps)


def complete_lift(E: SkewAlgebroid, X) -> VectorFieldExpr:
    """Complete lift d_T(X) on E in coordinates (x^a, y^k).

    f^i rho^a_i d/dx^a + (y^i rho^a_i df^k/dx^a + c^k_ij y^i f^j) d/dy^k
    """
    X = _section(E, X)
    f = X.components()
    ys = [E.expr(y, extra=E.fiber_coords) for y in E.fiber_coords]
    comps = []
    for a in range(1, E.m + 1):
        comps.append(_sum(f[i - 1] * E.anchor(i, a) for i in range(1, E.n + 1)))
    for k in range(1, E.n + 1):
        terms = []
        for i in range(1, E.n + 1):
            for a, name in enumerate(E.coords, 1):
                r = E.anchor(i, a)
                if r != ZERO:
                    d = diff_expr(f[k - 1], name)
                    if d != ZERO:
                        terms.append(ys[i - 1] * r * d)
            for j in range(1, E.n + 1):
                c = E.struct(i, j, k)
                if c != ZERO and f[j - 1] != ZERO:
                    terms.append(c * ys[i - 1] * f[j - 1])
        comps.append(_sum(terms))
    return VectorFieldExpr(E.coords + E.fiber_coords, tuple(simplify(c) for c in comps))


def linear_bivector(E: SkewAlgebroid) -> dict[tuple[str, str], Expr]:
    """Components of the linear bivector on E*.

    Keys are ordered coordinate-name pairs over (xi_1..xi_n, x^1..x^m):
    {xi_i, xi_j} = c^k_ij xi_k, {xi_i, x^b} = rho^b_i, {x^a, x^b} = 0.
    """
    xi = E.dual_coords
    table = {}
    for i, j in combinations(range(1, E.n + 1), 2):
        table[(xi[i - 1], xi[j - 1])] = simplify(
            _sum(E.struct(i, j, k) * E.expr(xi[k - 1], extra=xi) for k in range(1, E.n + 1))
        )
    for i in range(1, E.n + 1):
        for b, x in enumerate(E.coords, 1):
            table[(xi[i - 1], x)] = E.anchor(i, b)
    for a, b in combinations(range(E.m), 2):
        table[(E.coords[a], E.coords[b])] = ZERO
    return table


def poisson_bracket(E: SkewAlgebroid, F, G) -> Expr:
    """{F, G} of functions on E* from the linear bivector."""
    xi = E.dual_coords
    F = E.expr(F, extra=xi)
    G = E.expr(G, extra=xi)
    dF = {n: diff_expr(F, n) for n in xi + E.coords}
    dG = {n: diff_expr(G, n) for n in xi + E.coords}
    terms = []
    for (u, v), val in linear_bivector(E).items():
        if val == ZERO:
            continue
        terms.append(val * (dF[u] * dG[v] - dF[v] * dG[u]))
    return simplify(_sum(terms))


def linear_function(E: SkewAlgebroid, X: EMultivector) -> Expr:
    """The fiberwise-linear function on E* attached to a section."""
    X = _section(E, X)
    return simplify(_sum(v * E.expr(E.dual_coords[i - 1], extra=E.dual_coords) for (i,), v in X.coeffs.items()))
