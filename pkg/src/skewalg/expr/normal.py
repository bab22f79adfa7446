"""Canonical rational-function normal form over exact rationals.

A normal form is a pair ``(num, den)`` of sparse multivariate polynomials with
``gcd(num, den) = 1`` and the lex-leading coefficient of ``den`` equal to 1.
Since Q[x1..xk] is a UFD this pair is unique, so structural equality of normal
forms decides equality on the rational fragment.

Variables ("atoms") are symbol names, or the canonical text of a function
application such as ``sin(x + 1)``; a function of an expression is an opaque
atom keyed by the normal form of its argument.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key, lru_cache

from .nodes import (
    Add,
    Const,
    Div,
    Expr,
    ExprError,
    Func,
    Mul,
    Pow,
    Sub,
    Sym,
    to_text,
)

# A monomial is a tuple of (atom, exponent) pairs sorted by atom.
# A polynomial is a dict monomial -> nonzero Fraction.

_ONE_MONO: tuple = ()


def _mono_cmp(m1, m2) -> int:
    for (v1, e1), (v2, e2) in zip(m1, m2):
        if v1 == v2:
            if e1 != e2:
                return 1 if e1 > e2 else -1
            continue
        return 1 if v1 < v2 else -1
    if len(m1) == len(m2):
        return 0
    return 1 if len(m1) > len(m2) else -1


_mono_key = cmp_to_key(_mono_cmp)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(m1, m2):
    """m1 / m2 or None when m2 does not divide m1."""
    d = dict(m1)
    for v, e in m2:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def p_const(c) -> dict:
    c = Fraction(c)
    return {_ONE_MONO: c} if c else {}


def p_var(name: str) -> dict:
    return {((name, 1),): Fraction(1)}


def p_add(a, b, sign=1):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def p_scale(a, c):
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def p_mul(a, b):
    if not a or not b:
        return {}
    if len(a) == 1 and _ONE_MONO in a:
        return p_scale(b, a[_ONE_MONO])
    if len(b) == 1 and _ONE_MONO in b:
        return p_scale(a, b[_ONE_MONO])
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def p_pow(a, k: int):
    result = p_const(1)
    base = a
    while k:
        if k & 1:
            result = p_mul(result, base)
        k >>= 1
        if k:
            base = p_mul(base, base)
    return result


def p_is_const(a) -> bool:
    return not a or (len(a) == 1 and _ONE_MONO in a)


def p_vars(a) -> set:
    return {v for m in a for v, _ in m}


def p_lead(a):
    m = max(a, key=_mono_key)
    return m, a[m]


def p_normalize(a):
    """Scale so that the lex-leading coefficient is 1."""
    if not a:
        return a
    _, c = p_lead(a)
    return a if c == 1 else p_scale(a, 1 / c)


def p_div_exact(a, b):
    """a / b if b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if p_is_const(b):
        return p_scale(a, 1 / b[_ONE_MONO])
    lm_b, lc_b = p_lead(b)
    q: dict = {}
    r = dict(a)
    while r:
        lm_r, lc_r = p_lead(r)
        t = _mono_div(lm_r, lm_b)
        if t is None:
            return None
        coef = lc_r / lc_b
        q[t] = q.get(t, 0) + coef
        r = p_add(r, p_mul({t: coef}, b), sign=-1)
    return {m: c for m, c in q.items() if c}


def _split(a, v):
    """View a as a polynomial in v: {exponent: coefficient polynomial}."""
    out: dict = {}
    for m, c in a.items():
        e = 0
        rest = []
        for var, k in m:
            if var == v:
                e = k
            else:
                rest.append((var, k))
        coeff = out.setdefault(e, {})
        coeff[tuple(rest)] = c
    return out


def _deg(a, v) -> int:
    return max((k for m in a for var, k in m if var == v), default=0)


def _lc(a, v):
    d = _deg(a, v)
    out = {}
    for m, c in a.items():
        e = 0
        rest = []
        for var, k in m:
            if var == v:
                e = k
            else:
                rest.append((var, k))
        if e == d:
            out[tuple(rest)] = c
    return out


def _content(a, v):
    g = None
    for coeff in _split(a, v).values():
        g = coeff if g is None else p_gcd(g, coeff)
        if p_is_const(g):
            return p_const(1)
    return g


def _prem(a, b, v):
    db = _deg(b, v)
    lcb = _lc(b, v)
    r = a
    while r and _deg(r, v) >= db:
        d = _deg(r, v) - db
        lcr = _lc(r, v)
        shift = {((v, d),): Fraction(1)} if d else p_const(1)
        r = p_add(p_mul(lcb, r), p_mul(p_mul(lcr, shift), b), sign=-1)
    return r


def _prim(a, v):
    c = _content(a, v)
    if p_is_const(c):
        return a
    return p_div_exact(a, c)


def p_gcd(a, b):
    """Greatest common divisor, normalized to lex-leading coefficient 1."""
    if not a:
        return p_normalize(b)
    if not b:
        return p_normalize(a)
    if p_is_const(a) or p_is_const(b):
        return p_const(1)
    if a == b:
        return p_normalize(a)
    common = p_vars(a) & p_vars(b)
    if not common:
        return p_const(1)
    v = min(common)
    ca, cb = _content(a, v), _content(b, v)
    pa, pb = p_div_exact(a, ca), p_div_exact(b, cb)
    c = p_gcd(ca, cb)
    if _deg(pa, v) < _deg(pb, v):
        pa, pb = pb, pa
    while pb and _deg(pb, v) > 0:
        r = _prem(pa, pb, v)
        pa, pb = pb, (_prim(r, v) if r else r)
    g = _prim(pa, v) if not pb else p_const(1)
    return p_normalize(p_mul(c, g))


# ---------------------------------------------------------------- fractions


class RatFunc:
    """Reduced fraction num/den with monic (lex-leading coefficient 1) den."""

    __slots__ = ("_frozen", "den", "num")

    def __init__(self, num, den, reduce=True):
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = {}, p_const(1)
        elif reduce:
            g = p_gcd(num, den)
            if not p_is_const(g):
                num = p_div_exact(num, g)
                den = p_div_exact(den, g)
        _, lc = p_lead(den)
        if lc != 1:
            num = p_scale(num, 1 / lc)
            den = p_scale(den, 1 / lc)
        self.num = num
        self.den = den
        self._frozen = None

    def key(self):
        if self._frozen is None:
            self._frozen = (
                tuple(sorted(self.num.items())),
                tuple(sorted(self.den.items())),
            )
        return self._frozen

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_zero(self) -> bool:
        return not self.num

    def is_const(self) -> bool:
        return p_is_const(self.num) and p_is_const(self.den)

    def const_value(self) -> Fraction:
        return self.num.get(_ONE_MONO, Fraction(0)) / self.den[_ONE_MONO]

    def atoms(self) -> set:
        return p_vars(self.num) | p_vars(self.den)

    def has_function_atoms(self) -> bool:
        return any("(" in a for a in self.atoms())

    def __add__(self, other):
        return _rf_add(self, other, 1)

    def __sub__(self, other):
        return _rf_add(self, other, -1)

    def __mul__(self, other):
        a, b = self, other
        g1 = p_gcd(a.num, b.den)
        g2 = p_gcd(b.num, a.den)
        n1 = a.num if p_is_const(g1) else p_div_exact(a.num, g1)
        d2 = b.den if p_is_const(g1) else p_div_exact(b.den, g1)
        n2 = b.num if p_is_const(g2) else p_div_exact(b.num, g2)
        d1 = a.den if p_is_const(g2) else p_div_exact(a.den, g2)
        return RatFunc(p_mul(n1, n2), p_mul(d1, d2), reduce=False)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("division by zero")
        return RatFunc(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        if k >= 0:
            return RatFunc(p_pow(self.num, k), p_pow(self.den, k), reduce=False)
        return self.inverse() ** (-k)


def _rf_add(a: RatFunc, b: RatFunc, sign: int) -> RatFunc:
    if not b.num:
        return a
    if not a.num:
        return RatFunc(p_scale(b.num, sign), b.den, reduce=False)
    if a.den == b.den:
        num = p_add(a.num, b.num, sign)
        return RatFunc(num, a.den, reduce=not p_is_const(a.den))
    g = p_gcd(a.den, b.den)
    da = p_div_exact(a.den, g)
    db = p_div_exact(b.den, g)
    num = p_add(p_mul(a.num, db), p_mul(b.num, da), sign)
    return RatFunc(num, p_mul(a.den, db))


def rf_const(c) -> RatFunc:
    return RatFunc(p_const(c), p_const(1), reduce=False)


def rf_atom(key: str) -> RatFunc:
    return RatFunc(p_var(key), p_const(1), reduce=False)


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _fold_function(name: str, arg: RatFunc):
    """Exact value of name(arg) for constant arg when it is rational."""
    if not arg.is_const():
        return None
    q = arg.const_value()
    if name in ("sin",) and q == 0:
        return Fraction(0)
    if name in ("cos", "exp") and q == 0:
        return Fraction(1)
    if name == "ln" and q == 1:
        return Fraction(0)
    if name == "sqrt":
        return _rational_sqrt(q)
    return None


@lru_cache(maxsize=200_000)
def to_ratfunc(e: Expr) -> RatFunc:
    """Normal form of ``e``; raises ExprError on a structurally zero denominator."""
    if isinstance(e, Const):
        return rf_const(e.value)
    if isinstance(e, Sym):
        return rf_atom(e.name)
    if isinstance(e, Add):
        return to_ratfunc(e.left) + to_ratfunc(e.right)
    if isinstance(e, Sub):
        return to_ratfunc(e.left) - to_ratfunc(e.right)
    if isinstance(e, Mul):
        return to_ratfunc(e.left) * to_ratfunc(e.right)
    if isinstance(e, Div):
        den = to_ratfunc(e.right)
        if den.is_zero():
            raise ExprError(f"division by an expression that is identically zero: {to_text(e)}")
        return to_ratfunc(e.left) / den
    if isinstance(e, Pow):
        base = to_ratfunc(e.base)
        if e.exp < 0 and base.is_zero():
            raise ExprError(f"zero raised to a negative power: {to_text(e)}")
        return base ** e.exp
    if isinstance(e, Func):
        arg = to_ratfunc(e.arg)
        folded = _fold_function(e.name, arg)
        if folded is not None:
            return rf_const(folded)
        return rf_atom(f"{e.name}({to_text(from_ratfunc(arg))})")
    raise TypeError(f"not an expression node: {e!r}")


# ------------------------------------------------------------ back to trees


def _atom_expr(key: str) -> Expr:
    if "(" not in key:
        return Sym(key)
    from .parser import parse_expr

    name, _, rest = key.partition("(")
    arg = parse_expr(rest[:-1])
    return Func(name, from_ratfunc(to_ratfunc(arg)))


def _monomial_expr(m) -> Expr | None:
    out = None
    for v, k in m:
        f = _atom_expr(v)
        if k != 1:
            f = Pow(f, k)
        out = f if out is None else Mul(out, f)
    return out


def _poly_expr(p) -> Expr:
    if not p:
        return Const(0)
    out = None
    for m in sorted(p, key=_mono_key, reverse=True):
        c = p[m]
        mono = _monomial_expr(m)
        mag = abs(c)
        if mono is None:
            term = Const(mag)
        elif mag == 1:
            term = mono
        else:
            term = Mul(Const(mag), mono)
        if out is None:
            if c < 0:
                if mono is None:
                    term = Const(c)
                elif mag == 1:
                    term = Mul(Const(-1), mono)
                else:
                    term = Mul(Const(c), mono)
            out = term
        else:
            out = Add(out, term) if c > 0 else Sub(out, term)
    return out


@lru_cache(maxsize=200_000)
def from_ratfunc(r: RatFunc) -> Expr:
    num = _poly_expr(r.num)
    if p_is_const(r.den):
        return num
    return Div(num, _poly_expr(r.den))


def simplify(e: Expr) -> Expr:
    """Canonical form; idempotent."""
    return from_ratfunc(to_ratfunc(e))
