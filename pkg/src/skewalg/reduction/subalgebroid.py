"""Subalgebroids in adapted coordinates.

E0 is spanned by the first ``n0`` frame directions over the submanifold
M0 = {x^{m0+1} = ... = x^m = 0}.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from ..algebroid import AlgebroidError, SkewAlgebroid
from ..algebroid.core import _clean
from ..expr import (
    ZERO,
    SingularEvaluationError,
    eval_expr,
    free_symbols,
    subst_expr,
    to_ratfunc,
    to_text,
)


@dataclass
class CheckReport:
    ok: bool
    max_violation: float = 0.0
    violations: list[str] = field(default_factory=list)
    method: str = "symbolic"

    def __bool__(self) -> bool:
        return self.ok


def _check_dims(E: SkewAlgebroid, n0: int, m0: int) -> None:
    if not 1 <= n0 <= E.n:
        raise AlgebroidError(f"n0={n0} outside 1..{E.n}")
    if not 0 <= m0 <= E.m:
        raise AlgebroidError(f"m0={m0} outside 0..{E.m}")


def on_submanifold(E: SkewAlgebroid, m0: int) -> dict:
    return {x: ZERO for x in E.coords[m0:]}


def sampled_max_abs(e, samples: int, seed: int, low=-2.0, high=2.0) -> float:
    """max |e| over random points; singular points are resampled."""
    names = sorted(free_symbols(e))
    rng = random.Random(seed)
    worst = 0.0
    got = 0
    tries = 0
    while got < samples and tries < 50 * samples:
        tries += 1
        env = {n: rng.uniform(low, high) for n in names}
        try:
            v = abs(float(eval_expr(e, env)))
        except SingularEvaluationError:
            continue
        if math.isfinite(v):
            worst = max(worst, v)
            got += 1
    return worst


def residual_check(items, samples: int, tol: float, seed: int) -> CheckReport:
    """Zero test for labelled expressions: symbolic first, sampled when undecidable."""
    report = CheckReport(True)
    for label, e in items:
        r = to_ratfunc(e)
        if r.is_zero():
            continue
        if r.has_function_atoms():
            v = sampled_max_abs(e, samples, seed)
            report.method = "sampled"
            report.max_violation = max(report.max_violation, v)
            if v > tol:
                report.ok = False
                report.violations.append(f"{label} = {to_text(e)}")
            continue
        v = sampled_max_abs(e, samples, seed)
        report.ok = False
        report.max_violation = max(report.max_violation, v)
        report.violations.append(f"{label} = {to_text(e)}")
    return report


def subalgebroid_check(
    E: SkewAlgebroid, n0: int, m0: int, samples: int = 32, tol: float = 1e-9, seed: int = 0
) -> CheckReport:
    """rho^A_i(x^a, 0) = 0 for A > m0, i <= n0 and c^K_ii'(x^a, 0) = 0 for K > n0."""
    _check_dims(E, n0, m0)
    at = on_submanifold(E, m0)
    items = []
    for i in range(1, n0 + 1):
        for A in range(m0 + 1, E.m + 1):
            items.append((f"rho^{A}_{i}|M0", subst_expr(E.anchor(i, A), at)))
    for i in range(1, n0 + 1):
        for j in range(i + 1, n0 + 1):
            for K in range(n0 + 1, E.n + 1):
                items.append((f"c^{K}_{i}{j}|M0", subst_expr(E.struct(i, j, K), at)))
    return residual_check(items, samples, tol, seed)


@lru_cache(maxsize=256)
def restrict(E: SkewAlgebroid, n0: int, m0: int) -> SkewAlgebroid:
    """The induced skew algebroid on E0 over M0.

    Cached per host object, so forms built on E0 by different operations share it.
    """
    report = subalgebroid_check(E, n0, m0)
    if not report:
        raise AlgebroidError("not a subalgebroid: " + "; ".join(report.violations))
    at = on_submanifold(E, m0)
    c = {}
    for (i, j, k), v in E.c.items():
        if j <= n0 and k <= n0:
            c[(i, j, k)] = subst_expr(v, at)
    rho = {}
    for (i, a), v in E.rho.items():
        if i <= n0 and a <= m0:
            rho[(i, a)] = subst_expr(v, at)
    return SkewAlgebroid(
        E.coords[:m0],
        E.frame[:n0],
        E.params,
        _clean(c),
        _clean(rho),
        E.dual_coords[:n0],
        E.fiber_coords[:n0],
    )


def permute_frame(E: SkewAlgebroid, order) -> SkewAlgebroid:
    """Relabel the frame: new e_p is old e_{order[p-1]} (1-based labels)."""
    order = list(order)
    if sorted(order) != list(range(1, E.n + 1)):
        raise AlgebroidError("order must be a permutation of 1..n")
    new_of_old = {old: new for new, old in enumerate(order, start=1)}
    c = {}
    for (i, j, k), v in E.c.items():
        ni, nj, nk = new_of_old[i], new_of_old[j], new_of_old[k]
        key = (min(ni, nj), max(ni, nj), nk)
        c[key] = v if ni < nj else -v
    rho = {(new_of_old[i], a): v for (i, a), v in E.rho.items()}
    frame = tuple(E.frame[o - 1] for o in order)
    return SkewAlgebroid(E.coords, frame, E.params, _clean(c), _clean(rho), E.dual_coords, E.fiber_coords)
