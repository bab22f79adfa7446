"""Admissible paths, line integrals, parallel transport and linear holonomy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebroid import AlgebroidError, EForm, SkewAlgebroid, complete_lift
from .expr import ExprError, coerce, compile_expr, diff_expr, free_symbols, simplify
from .modular import EConnection, normal_connection, relative_modular_class

T = "t"
BLOWUP = 1e12


@dataclass(frozen=True, eq=False)
class PathSpec:
    """t |-> (x(t), gamma(t)) for t in [0, 1]."""

    algebroid: SkewAlgebroid
    base: tuple
    fiber: tuple

    def _compiled(self):
        fb = [compile_expr(e, (T,)) for e in self.base]
        ff = [compile_expr(e, (T,)) for e in self.fiber]
        return fb, ff

    def at(self, t: float):
        fb, ff = self._compiled()
        return [f(t) for f in fb], [f(t) for f in ff]


def make_path(E: SkewAlgebroid, base, fiber) -> PathSpec:
    base = tuple(simplify(coerce(v, {T})) for v in base)
    fiber = tuple(simplify(coerce(v, {T})) for v in fiber)
    if len(base) != E.m or len(fiber) != E.n:
        raise AlgebroidError(f"path needs {E.m} base and {E.n} fiber components")
    return PathSpec(E, base, fiber)


def _rehost(p: PathSpec, E: SkewAlgebroid) -> PathSpec:
    """The same path viewed on E (algebroids with equal coordinates and rank)."""
    if p.algebroid is E:
        return p
    if p.algebroid.coords != E.coords or p.algebroid.n != E.n:
        raise AlgebroidError("path does not match the algebroid shape")
    return PathSpec(E, p.base, p.fiber)


def _numeric(E: SkewAlgebroid):
    if E.params:
        raise AlgebroidError(f"bind parameters {list(E.params)} before numeric work")


@dataclass
class AdmissibleReport:
    ok: bool
    max_defect: float

    def __bool__(self) -> bool:
        return self.ok


def check_admissible(E: SkewAlgebroid, p: PathSpec, samples: int = 101, tol: float = 1e-8) -> AdmissibleReport:
    """max over sample times of |sum_i gamma^i rho^a_i(x) - dx^a/dt|."""
    if samples < 2:
        raise AlgebroidError("need at least 2 samples")
    _numeric(E)
    if E.m == 0:
        return AdmissibleReport(True, 0.0)
    fb, ff = p._compiled()
    dx = [compile_expr(diff_expr(e, T), (T,)) for e in p.base]
    rho = [[compile_expr(E.anchor(i, a), E.coords) for i in range(1, E.n + 1)] for a in range(1, E.m + 1)]
    worst = 0.0
    for s in range(samples):
        t = s / (samples - 1)
        x = [f(t) for f in fb]
        g = [f(t) for f in ff]
        for a in range(E.m):
            v = sum(g[i] * rho[a][i](*x) for i in range(E.n)) - dx[a](t)
            worst = max(worst, abs(v))
    return AdmissibleReport(worst <= tol, worst)


def _require_admissible(E, p, tol=1e-8):
    rep = check_admissible(E, p, tol=tol)
    if not rep:
        raise AlgebroidError(f"path is not admissible (defect {rep.max_defect:.3g})")


def line_integral(E: SkewAlgebroid, alpha: EForm, p: PathSpec, steps: int = 1000) -> float:
    """int_0^1 <alpha(x(t)), gamma(t)> dt by composite Simpson on `steps` panels."""
    if alpha.degree != 1:
        raise AlgebroidError("line integrals need a 1-form")
    if steps < 1:
        raise AlgebroidError("steps must be >= 1")
    _numeric(E)
    p = _rehost(p, E)
    fb, ff = p._compiled()
    comps = [(i - 1, compile_expr(v, E.coords)) for (i,), v in sorted(alpha.coeffs.items())]

    def integrand(t):
        x = [f(t) for f in fb]
        return sum(ff[i](t) * a(*x) for i, a in comps)

    h = 1.0 / steps
    total = 0.0
    left = integrand(0.0)
    for k in range(steps):
        t0 = k * h
        mid = integrand(t0 + h / 2)
        right = integrand(t0 + h)
        total += h / 6 * (left + 4 * mid + right)
        left = right
    return total


def _generator(conn: EConnection, p: PathSpec):
    """t |-> A(t) with A^j_k = sum_i Gamma^j_ik(x(t)) gamma^i(t)."""
    E = conn.algebroid
    _numeric(E)
    fb, ff = p._compiled()
    entries = [((i, k, j), compile_expr(v, E.coords)) for (i, k, j), v in sorted(conn.gamma.items())]
    s = conn.rank

    def A(t):
        x = [f(t) for f in fb]
        g = [f(t) for f in ff]
        M = np.zeros((s, s))
        for (i, k, j), f in entries:
            M[j - 1, k - 1] += f(*x) * g[i - 1]
        return M

    return A


def _rk4(f, y0, steps: int, t_end: float = 1.0):
    y = np.array(y0, dtype=float)
    h = t_end / steps
    for k in range(steps):
        t = k * h
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y), initial=0.0) > BLOWUP:
            raise AlgebroidError(f"integration blew up at t={t + h:.6g}")
    return y


def parallel_transport(conn: EConnection, p: PathSpec, v0, steps: int = 1000, check: bool = True) -> np.ndarray:
    """Solve dY/dt = -A(t) Y from Y(0) = v0; returns Y(1)."""
    p = _rehost(p, conn.algebroid)
    if check:
        _require_admissible(conn.algebroid, p)
    v0 = np.asarray(v0, dtype=float)
    if v0.shape[0] != conn.rank:
        raise AlgebroidError(f"initial vector needs {conn.rank} components")
    A = _generator(conn, p)
    return _rk4(lambda t, y: -A(t) @ y, v0, steps)


def transport_matrix(conn: EConnection, p: PathSpec, steps: int = 1000, check: bool = True) -> np.ndarray:
    cols = [parallel_transport(conn, p, np.eye(conn.rank)[k], steps, check) for k in range(conn.rank)]
    return np.column_stack(cols)


def transport_determinant(conn: EConnection, p: PathSpec, steps: int = 1000, check: bool = True) -> float:
    """h(1) for dh/dt = -tr A(t) h, h(0) = 1."""
    p = _rehost(p, conn.algebroid)
    if check:
        _require_admissible(conn.algebroid, p)
    A = _generator(conn, p)
    return float(_rk4(lambda t, y: -np.trace(A(t)) * y, [1.0], steps)[0])


@dataclass
class HolonomyResult:
    ode_value: float
    formula_value: float

    @property
    def relative_error(self) -> float:
        return abs(self.ode_value - self.formula_value) / abs(self.formula_value)


def relative_holonomy(E: SkewAlgebroid, n0: int, m0: int, p: PathSpec, steps: int = 1000) -> HolonomyResult:
    """Determinant of transport on E|M0 / E0 along a loop, and exp of the relative class integral."""
    conn = normal_connection(E, n0, m0)
    E0 = conn.algebroid
    p = _rehost(p, E0)
    start, end = p.at(0.0)[0], p.at(1.0)[0]
    if any(abs(a - b) > 1e-12 for a, b in zip(start, end)):
        raise AlgebroidError("base path is not a loop")
    ode = transport_determinant(conn, p, steps)
    rel = relative_modular_class(E, n0, m0).representative
    integral = line_integral(E0, rel, p, steps)
    return HolonomyResult(ode, math.exp(integral))


def flow_complete_lift(E: SkewAlgebroid, X, t_end: float, v0, steps: int = 1000) -> np.ndarray:
    """Integrate the complete lift of X on E from the point v0 = (x, y)."""
    _numeric(E)
    field = complete_lift(E, X)
    names = field.coords
    v0 = np.asarray(v0, dtype=float)
    if v0.shape[0] != len(names):
        raise AlgebroidError(f"initial point needs {len(names)} components")
    if t_end == 0:
        return v0.copy()
    stray = set().union(*(free_symbols(c) for c in field.components)) - set(names)
    if stray:
        raise ExprError(f"unbound symbols {sorted(stray)}")
    fs = [compile_expr(c, names) for c in field.components]

    def rhs(t, y):
        return np.array([f(*y) for f in fs])

    return _rk4(rhs, v0, steps, t_end)
