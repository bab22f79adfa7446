"""se(2) and the Chaplygin sleigh constraint D = {v2 = 0}."""

from __future__ import annotations

from ..algebroid import AlgebroidError, SkewAlgebroid, make_algebroid
from ..expr import ZERO, Sym, as_expr, coerce, simplify, to_ratfunc
from .linear import orthogonal_complement, project_along

SLEIGH_PARAMS = ("m", "J", "a", "b")


def se2(params=()) -> SkewAlgebroid:
    """se(2) in the basis (E1, E2, E3): [E3, E1] = E2, [E2, E3] = E1."""
    return make_algebroid(0, 3, c={(3, 1, 2): 1, (2, 3, 1): 1}, frame=("E1", "E2", "E3"), params=params)


def _symbols(m, J, a, b):
    vals = {"m": m, "J": J, "a": a, "b": b}
    params = tuple(k for k in SLEIGH_PARAMS if vals[k] is None)
    out = {k: (Sym(k) if v is None else simplify(coerce(v, set()))) for k, v in vals.items()}
    return out, params


def sleigh_metric(m=None, J=None, a=None, b=None):
    """Kinetic-energy metric on se(2) in the basis (E1, E2, E3)."""
    s, _ = _symbols(m, J, a, b)
    m, J, a, b = s["m"], s["J"], s["a"], s["b"]
    rows = [
        [m, ZERO, -b * m],
        [ZERO, m, -a * m],
        [-b * m, -a * m, J + m * (a**2 + b**2)],
    ]
    return [[simplify(v) for v in r] for r in rows]


def sleigh_basis(m=None, J=None, a=None, b=None, complement: str = "paper"):
    """Columns e1 = E3, e2 = E1, e3 (the complement of D), in E-coordinates."""
    s, _ = _symbols(m, J, a, b)
    m, J, a, b = s["m"], s["J"], s["a"], s["b"]
    if complement == "paper":
        e3 = [-m * a * b, J + m * a**2, -m * a]
    elif complement == "metric":
        D = [[ZERO, 1], [ZERO, ZERO], [1, ZERO]]  # columns E3, E1
        w = orthogonal_complement(sleigh_metric(*[s[k] for k in SLEIGH_PARAMS]), D)
        if len(w) != 1:
            raise AlgebroidError("degenerate sleigh metric")
        # scale so the E2 component is J + m a^2, as in the printed vector
        w = w[0]
        if to_ratfunc(w[1]).is_zero():
            raise AlgebroidError("degenerate sleigh metric")
        f = (J + m * a**2) / w[1]
        e3 = [f * v for v in w]
    else:
        raise AlgebroidError(f"unknown complement {complement!r} (use 'paper' or 'metric')")
    cols = [[ZERO, ZERO, as_expr(1)], [as_expr(1), ZERO, ZERO], e3]
    return [[simplify(cols[j][i]) for j in range(3)] for i in range(3)]


def chaplygin_sleigh(m=None, J=None, a=None, b=None, complement: str = "paper"):
    """Projected rank-2 skew algebra on D and its modular class representative.

    Parameters left as None stay symbolic.
    """
    from ..modular import modular_form

    s, params = _symbols(m, J, a, b)
    den = simplify(s["J"] + s["m"] * s["a"] ** 2)
    if to_ratfunc(den).is_zero():
        raise AlgebroidError("degenerate parameters: J + m a^2 = 0")
    B = sleigh_basis(m, J, a, b, complement)
    D = project_along(se2(params), B, 2)
    D = SkewAlgebroid((), ("e1", "e2"), D.params, D.c, D.rho, D.dual_coords, D.fiber_coords)
    return D, modular_form(D)
