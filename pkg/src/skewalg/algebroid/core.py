"""Data model: skew algebroids in a local frame, graded (multi)sections, vector fields.

Index labels are 1-based throughout, matching the usual notation
``c^k_ij``, ``rho^a_i``, ``e^1 ^ e^2``.  Graded elements store coefficients on
strictly increasing index tuples; the pairing of ``e^I`` with ``e_J`` is the
Kronecker delta on increasing tuples, so that
``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``.
"""

from __future__ import annotations

import keyword
import re
from dataclasses import dataclass, field
from itertools import combinations

from ..expr import (
    FUNCTIONS,
    ONE,
    ZERO,
    Const,
    Expr,
    ExprError,
    coerce,
    compile_expr,
    diff_expr,
    eval_expr,
    exprs_equal,
    free_symbols,
    simplify,
    subst_expr,
    to_text,
)


class AlgebroidError(ValueError):
    pass


_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _check_names(groups: dict[str, tuple]) -> None:
    seen: dict[str, str] = {}
    for role, names in groups.items():
        for name in names:
            if not _NAME.match(name) or name in FUNCTIONS or keyword.iskeyword(name):
                raise AlgebroidError(f"invalid {role} name {name!r}")
            if name in seen:
                raise AlgebroidError(f"name {name!r} used both as {seen[name]} and {role}")
            seen[name] = role


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _sum(terms) -> Expr:
    out = None
    for t in terms:
        out = t if out is None else out + t
    return ZERO if out is None else out


@dataclass(frozen=True, eq=False)
class SkewAlgebroid:
    """Structure functions of a skew algebroid over a chart.

    ``c`` holds ``c^k_ij`` for ``i < j`` only (nonzero entries), ``rho`` holds
    ``rho^a_i`` (nonzero entries).  All expressions are in canonical form and
    depend on base coordinates and parameters only.
    """

    coords: tuple[str, ...]
    frame: tuple[str, ...]
    params: tuple[str, ...]
    c: dict
    rho: dict
    dual_coords: tuple[str, ...]
    fiber_coords: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def n(self) -> int:
        return len(self.frame)

    @property
    def scalar_symbols(self) -> tuple[str, ...]:
        return self.coords + self.params

    def struct(self, i: int, j: int, k: int) -> Expr:
        if i == j:
            return ZERO
        if i < j:
            return self.c.get((i, j, k), ZERO)
        e = self.c.get((j, i, k))
        return ZERO if e is None else simplify(-e)

    def anchor(self, i: int, a: int) -> Expr:
        return self.rho.get((i, a), ZERO)

    def expr(self, value, extra=()) -> Expr:
        allowed = set(self.scalar_symbols) | set(extra)
        try:
            e = coerce(value, allowed)
        except ExprError as exc:
            raise AlgebroidError(str(exc)) from None
        stray = free_symbols(e) - allowed
        if stray:
            raise AlgebroidError(f"unexpected symbols {sorted(stray)} in {to_text(e)}")
        return simplify(e)

    # constructors of graded elements
    def function(self, value) -> EForm:
        return EForm(self, 0, _clean({(): self.expr(value)}))

    def section(self, coeffs) -> EMultivector:
        return EMultivector.build(self, 1, coeffs)

    def multivector(self, degree: int, coeffs) -> EMultivector:
        return EMultivector.build(self, degree, coeffs)

    def form(self, degree: int, coeffs) -> EForm:
        return EForm.build(self, degree, coeffs)

    def e(self, i: int) -> EMultivector:
        """Frame section e_i."""
        return EMultivector(self, 1, {(i,): ONE})

    def dual(self, i: int) -> EForm:
        """Dual frame form e^i."""
        return EForm(self, 1, {(i,): ONE})

    def frame_sections(self) -> list[EMultivector]:
        return [self.e(i) for i in range(1, self.n + 1)]

    def same_structure(self, other: SkewAlgebroid) -> bool:
        if (self.coords, self.frame, self.params) != (other.coords, other.frame, other.params):
            return False
        for k in set(self.c) | set(other.c):
            if not exprs_equal(self.c.get(k, ZERO), other.c.get(k, ZERO)):
                return False
        for k in set(self.rho) | set(other.rho):
            if not exprs_equal(self.rho.get(k, ZERO), other.rho.get(k, ZERO)):
                return False
        return True

    def substitute(self, bindings) -> SkewAlgebroid:
        """Substitute parameter values (or expressions) into all structure functions."""
        params = tuple(p for p in self.params if p not in bindings)
        c = {k: subst_expr(v, bindings) for k, v in self.c.items()}
        rho = {k: subst_expr(v, bindings) for k, v in self.rho.items()}
        return SkewAlgebroid(
            self.coords, self.frame, params, _clean(c), _clean(rho), self.dual_coords, self.fiber_coords
        )

    def __repr__(self) -> str:
        return f"SkewAlgebroid(m={self.m}, n={self.n}, coords={self.coords}, frame={self.frame})"


def _clean(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        v = simplify(v)
        if v != ZERO:
            out[k] = v
    return out


def _entries(spec, width: int):
    """Normalize a dict {(idx...): expr} or a list of (idx..., expr) rows."""
    if spec is None:
        return []
    if isinstance(spec, dict):
        items = []
        for key, val in spec.items():
            key = tuple(key) if isinstance(key, (tuple, list)) else (key,)
            items.append((key, val))
    else:
        items = []
        for row in spec:
            row = tuple(row)
            items.append((row[:-1], row[-1]))
    for key, _ in items:
        if len(key) != width:
            raise AlgebroidError(f"expected {width} indices, got {key}")
    return items


def make_algebroid(
    m: int,
    n: int,
    c=None,
    rho=None,
    coords=None,
    frame=None,
    params=(),
    dual_coords=None,
    fiber_coords=None,
) -> SkewAlgebroid:
    """Validated skew algebroid.

    ``c`` maps ``(i, j, k)`` to ``c^k_ij`` (any order of i, j; the
    antisymmetric partner is implied), ``rho`` maps ``(i, a)`` to ``rho^a_i``.
    Values may be expressions, numbers or text.
    """
    if m < 0 or n < 1:
        raise AlgebroidError("need base dimension m >= 0 and rank n >= 1")
    coords = tuple(coords) if coords is not None else tuple(f"x{a}" for a in range(1, m + 1))
    frame = tuple(frame) if frame is not None else tuple(f"e{i}" for i in range(1, n + 1))
    params = tuple(params)
    dual_coords = tuple(dual_coords) if dual_coords is not None else tuple(f"xi{i}" for i in range(1, n + 1))
    fiber_coords = tuple(fiber_coords) if fiber_coords is not None else tuple(f"y{i}" for i in range(1, n + 1))
    if len(coords) != m or len(frame) != n or len(dual_coords) != n or len(fiber_coords) != n:
        raise AlgebroidError("name lists do not match the dimensions")
    _check_names(
        {
            "coordinate": coords,
            "parameter": params,
            "dual fiber coordinate": dual_coords,
            "fiber coordinate": fiber_coords,
        }
    )
    _check_names({"frame": frame})
    allowed = set(coords) | set(params)
    fiber = set(dual_coords) | set(fiber_coords)

    def conv(val, where):
        try:
            e = coerce(val, allowed | fiber)
        except ExprError as exc:
            raise AlgebroidError(f"{where}: {exc}") from None
        syms = free_symbols(e)
        if syms & fiber:
            raise AlgebroidError(f"fiber symbol {sorted(syms & fiber)[0]!r} inside structure function {where}")
        if syms - allowed:
            raise AlgebroidError(f"unknown symbol {sorted(syms - allowed)[0]!r} in {where}")
        return simplify(e)

    cs: dict = {}
    for (i, j, k), val in _entries(c, 3):
        for idx in (i, j, k):
            if not 1 <= idx <= n:
                raise AlgebroidError(f"frame index {idx} out of range 1..{n}")
        if i == j:
            raise AlgebroidError(f"c^{k}_{i}{j}: diagonal entries violate antisymmetry")
        e = conv(val, f"c^{k}_{i}{j}")
        key = (min(i, j), max(i, j), k)
        if key in cs:
            raise AlgebroidError(f"duplicate entry for c^{k}_{key[0]}{key[1]}")
        cs[key] = e if i < j else simplify(-e)
    rs: dict = {}
    for (i, a), val in _entries(rho, 2):
        if not 1 <= i <= n:
            raise AlgebroidError(f"frame index {i} out of range 1..{n}")
        if not 1 <= a <= m:
            raise AlgebroidError(f"coordinate index {a} out of range 1..{m}")
        if (i, a) in rs:
            raise AlgebroidError(f"duplicate entry for rho^{a}_{i}")
        rs[(i, a)] = conv(val, f"rho^{a}_{i}")
    return SkewAlgebroid(coords, frame, params, _clean(cs), _clean(rs), dual_coords, fiber_coords)


# ----------------------------------------------------------------- graded


def _normalize_key(key, degree):
    if isinstance(key, int):
        key = (key,)
    key = tuple(key)
    if len(key) != degree:
        raise AlgebroidError(f"index tuple {key} does not have length {degree}")
    return key


@dataclass(frozen=True, eq=False)
class _Graded:
    algebroid: SkewAlgebroid
    degree: int
    coeffs: dict = field(default_factory=dict)

    @classmethod
    def build(cls, E: SkewAlgebroid, degree: int, coeffs):
        if not 0 <= degree:
            raise AlgebroidError("degree must be nonnegative")
        if degree == 0 and not isinstance(coeffs, dict):
            coeffs = {(): coeffs}
        if isinstance(coeffs, (list, tuple)):
            if degree != 1 or len(coeffs) != E.n:
                raise AlgebroidError("component lists are only accepted for degree 1 with n entries")
            coeffs = {(i + 1,): v for i, v in enumerate(coeffs)}
        acc: dict = {}
        for key, val in coeffs.items():
            key = _normalize_key(key, degree)
            for idx in key:
                if not 1 <= idx <= E.n:
                    raise AlgebroidError(f"frame index {idx} out of range 1..{E.n}")
            s = perm_sign(key)
            if s == 0:
                continue
            skey = tuple(sorted(key))
            e = E.expr(val)
            acc[skey] = acc.get(skey, ZERO) + (e if s > 0 else -e)
        return cls(E, degree, _clean(acc))

    def __getitem__(self, key) -> Expr:
        key = _normalize_key(key, self.degree)
        s = perm_sign(key)
        if s == 0:
            return ZERO
        v = self.coeffs.get(tuple(sorted(key)), ZERO)
        return v if s > 0 else simplify(-v)

    def _like(self, coeffs):
        return type(self)(self.algebroid, self.degree, _clean(coeffs))

    def _check(self, other):
        if not isinstance(other, _Graded) or other.algebroid is not self.algebroid:
            raise AlgebroidError("operands live on different algebroids")
        if other.degree != self.degree:
            raise AlgebroidError(f"degree mismatch: {self.degree} vs {other.degree}")
        if self.degree > 0 and type(other) is not type(self):
            raise AlgebroidError("cannot combine forms with multivectors")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return self._like(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, scalar):
        f = self.algebroid.expr(scalar)
        return self._like({k: f * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    @property
    def value(self) -> Expr:
        """The function of a degree-0 element."""
        if self.degree != 0:
            raise AlgebroidError("only degree-0 elements have a scalar value")
        return self.coeffs.get((), ZERO)

    def is_zero(self, **kwargs) -> bool:
        return all(exprs_equal(v, ZERO, **kwargs) for v in self.coeffs.values())

    def equals(self, other, **kwargs) -> bool:
        if self.degree != other.degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(exprs_equal(self.coeffs.get(k, ZERO), other.coeffs.get(k, ZERO), **kwargs) for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Graded):
            return NotImplemented
        if self.degree > 0 and type(other) is not type(self):
            return False
        return self.algebroid is other.algebroid and self.equals(other)

    __hash__ = None

    def subs(self, bindings):
        return self._like({k: subst_expr(v, bindings) for k, v in self.coeffs.items()})

    def evaluate(self, env) -> dict:
        return {k: eval_expr(v, env) for k, v in sorted(self.coeffs.items())}

    def components(self) -> list[Expr]:
        """Degree-1 coefficients as a list ordered by frame index."""
        if self.degree != 1:
            raise AlgebroidError("components() needs degree 1")
        return [self.coeffs.get((i,), ZERO) for i in range(1, self.algebroid.n + 1)]

    def __str__(self) -> str:
        if self.degree == 0:
            return to_text(self.value)
        return format_terms((self._basis_text(k), v) for k, v in sorted(self.coeffs.items()))


def format_terms(pairs) -> str:
    """Render sum of coefficient*basis, e.g. ``2*e^1 - (x + 1)*e^2``."""
    out = ""
    for basis, v in pairs:
        if v == ZERO:
            continue
        neg = isinstance(v, Const) and v.value < 0
        if isinstance(v, Const):
            mag = abs(v.value)
            body = basis if mag == 1 else f"{to_text(Const(mag))}*{basis}"
        else:
            text = to_text(v)
            if text.startswith("-"):
                flipped = to_text(simplify(-v))
                if not flipped.startswith("-"):
                    neg, text = True, flipped
            body = f"{text}*{basis}" if _is_atomic_text(text) else f"({text})*{basis}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def _is_atomic_text(text: str) -> bool:
    return re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", text) is not None


class EMultivector(_Graded):
    """Element of the Grassmann algebra of multisections; degree 1 is a section."""

    def _basis_text(self, key) -> str:
        return "^".join(self.algebroid.frame[i - 1] for i in key)

    def __repr__(self) -> str:
        return f"EMultivector(degree={self.degree}, {self})"


class EForm(_Graded):
    """Element of the Grassmann algebra of E*."""

    def _basis_text(self, key) -> str:
        return "^".join(f"e^{i}" for i in key)

    def __repr__(self) -> str:
        return f"EForm(degree={self.degree}, {self})"


Section = EMultivector


def wedge(a: _Graded, b: _Graded) -> _Graded:
    if a.algebroid is not b.algebroid:
        raise AlgebroidError("operands live on different algebroids")
    if a.degree > 0 and b.degree > 0 and type(a) is not type(b):
        raise AlgebroidError("cannot wedge a form with a multivector")
    cls = type(a) if a.degree > 0 else type(b)
    out: dict = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            s = perm_sign(ka + kb)
            if s == 0:
                continue
            key = tuple(sorted(ka + kb))
            term = va * vb
            out[key] = out.get(key, ZERO) + (term if s > 0 else -term)
    return cls(a.algebroid, a.degree + b.degree, _clean(out))


def det(rows: list[list[Expr]]) -> Expr:
    """Determinant by cofactor expansion (matrices here are tiny)."""
    k = len(rows)
    if k == 0:
        return ONE
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    terms = []
    for j in range(k):
        if rows[0][j] == ZERO:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        t = rows[0][j] * det(minor)
        terms.append(t if j % 2 == 0 else -t)
    return _sum(terms)


def wedge_sections(E: SkewAlgebroid, sections) -> EMultivector:
    """X_1 ^ ... ^ X_p with coefficients det(X_i^{k_j})."""
    p = len(sections)
    comps = [s.components() for s in sections]
    coeffs = {}
    for K in combinations(range(1, E.n + 1), p):
        coeffs[K] = det([[comps[i][k - 1] for k in K] for i in range(p)])
    return EMultivector(E, p, _clean(coeffs))


def pair(form: EForm, sections) -> Expr:
    """Evaluate a p-form on p sections: sum over K of form_K * det(X_i^{k_j})."""
    if form.degree != len(sections):
        raise AlgebroidError("number of arguments does not match the form degree")
    if form.degree == 0:
        return form.value
    comps = [s.components() for s in sections]
    terms = []
    for K, v in form.coeffs.items():
        terms.append(v * det([[comps[i][k - 1] for k in K] for i in range(len(sections))]))
    return simplify(_sum(terms))


# ----------------------------------------------------------- vector fields


@dataclass(frozen=True, eq=False)
class VectorFieldExpr:
    """Vector field with one component per named coordinate."""

    coords: tuple[str, ...]
    components: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.components):
            raise AlgebroidError("component count differs from coordinate count")

    def __getitem__(self, name: str) -> Expr:
        return self.components[self.coords.index(name)]

    def __call__(self, f: Expr) -> Expr:
        """Derivative of a function along the field."""
        return simplify(_sum(c * diff_expr(f, x) for x, c in zip(self.coords, self.components) if c != ZERO))

    def divergence(self) -> Expr:
        """Divergence with respect to the coordinate volume."""
        return simplify(_sum(diff_expr(c, x) for x, c in zip(self.coords, self.components)))

    def bracket(self, other: VectorFieldExpr) -> VectorFieldExpr:
        if self.coords != other.coords:
            raise AlgebroidError("vector fields on different coordinate lists")
        comps = tuple(simplify(self(w) - other(v)) for v, w in zip(self.components, other.components))
        return VectorFieldExpr(self.coords, comps)

    def __sub__(self, other):
        if self.coords != other.coords:
            raise AlgebroidError("vector fields on different coordinate lists")
        return VectorFieldExpr(self.coords, tuple(simplify(a - b) for a, b in zip(self.components, other.components)))

    def __add__(self, other):
        if self.coords != other.coords:
            raise AlgebroidError("vector fields on different coordinate lists")
        return VectorFieldExpr(self.coords, tuple(simplify(a + b) for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorFieldExpr(self.coords, tuple(simplify(-a) for a in self.components))

    def scale(self, f) -> VectorFieldExpr:
        f = coerce(f)
        return VectorFieldExpr(self.coords, tuple(simplify(f * a) for a in self.components))

    def is_zero(self, **kwargs) -> bool:
        return all(exprs_equal(c, ZERO, **kwargs) for c in self.components)

    def equals(self, other, **kwargs) -> bool:
        return self.coords == other.coords and all(
            exprs_equal(a, b, **kwargs) for a, b in zip(self.components, other.components)
        )

    def evaluate(self, env) -> tuple:
        return tuple(eval_expr(c, env) for c in self.components)

    def compile(self, names):
        fs = [compile_expr(c, names) for c in self.components]
        return lambda *vals: [f(*vals) for f in fs]

    def __str__(self) -> str:
        parts = [f"({to_text(c)})*d/d{x}" for x, c in zip(self.coords, self.components) if c != ZERO]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VectorFieldExpr({self})"


def zero_field(coords) -> VectorFieldExpr:
    return VectorFieldExpr(tuple(coords), tuple(ZERO for _ in coords))
