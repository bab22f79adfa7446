from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .nodes import (
    Const,
    Expr,
    ExprError,
    SingularEvaluationError,
    _raw_diff,
    as_expr,
    eval_expr,
    free_symbols,
    substitute_raw,
)
from .normal import simplify, to_ratfunc
from .parser import parse_expr

DEFAULT_TRIALS = 32
DEFAULT_TOL = 1e-9


def diff_expr(e: Expr, var: str) -> Expr:
    """Exact derivative of ``e`` with respect to ``var``, in canonical form."""
    return simplify(_raw_diff(as_expr(e), var))


def subst_expr(e: Expr, bindings) -> Expr:
    """Simultaneous substitution followed by simplification."""
    bound = {k: as_expr(v) for k, v in bindings.items()}
    return simplify(substitute_raw(as_expr(e), bound))


@dataclass(frozen=True)
class EqualityResult:
    equal: bool
    method: str  # "canonical", "numeric" or "no-valid-samples"
    trials: int = 0
    max_error: float = 0.0

    def __bool__(self) -> bool:
        return self.equal


def sample_env(names, rng: random.Random, low=-2.0, high=2.0) -> dict:
    return {n: rng.uniform(low, high) for n in names}


def exprs_equal(
    a,
    b,
    vars=None,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> EqualityResult:
    """Decide ``a == b``.

    Exact when the difference has a rational normal form free of function
    atoms; otherwise compares values at ``trials`` random points of
    [-2, 2]^vars, resampling points where either side is singular.  The
    numeric agreement is reported with ``method="numeric"``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    a, b = as_expr(a), as_expr(b)
    diff = None
    try:
        diff = to_ratfunc(a) - to_ratfunc(b)
    except ExprError:
        pass
    if diff is not None:
        if diff.is_zero():
            return EqualityResult(True, "canonical")
        if not diff.has_function_atoms():
            return EqualityResult(False, "canonical")
    names = sorted(free_symbols(a) | free_symbols(b)) if vars is None else list(vars)
    rng = random.Random(seed)
    worst = 0.0
    done = 0
    attempts = 0
    while done < trials and attempts < 50 * trials:
        attempts += 1
        env = sample_env(names, rng)
        try:
            va = float(eval_expr(a, env))
            vb = float(eval_expr(b, env))
        except SingularEvaluationError:
            continue
        if not (math.isfinite(va) and math.isfinite(vb)):
            continue
        err = abs(va - vb)
        worst = max(worst, err)
        if err > tol * max(1.0, abs(va), abs(vb)):
            return EqualityResult(False, "numeric", done + 1, worst)
        done += 1
    if done == 0:
        return EqualityResult(False, "no-valid-samples")
    return EqualityResult(True, "numeric", done, worst)


def is_zero(e, **kwargs) -> bool:
    return bool(exprs_equal(e, Const(0), **kwargs))


def coerce(value, allowed=None) -> Expr:
    """Accept an Expr, a number, or text in the expression grammar."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return parse_expr(value, allowed)
    return as_expr(value)
