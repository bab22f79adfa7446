"""Expression tree for the scalar language used by every structure function.

Nodes are immutable and hash-consed only by value: two trees compare equal
when they are structurally identical.  Arithmetic operators build raw nodes
without any simplification; use :func:`skewalg.expr.simplify` for the
canonical form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational, Real

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")


class ExprError(Exception):
    """Base class for expression errors."""


class UnboundSymbolError(ExprError):
    def __init__(self, name: str):
        super().__init__(f"unbound symbol {name!r}")
        self.name = name


class SingularEvaluationError(ExprError):
    """Division by zero, ln of a non-positive value, sqrt of a negative value."""


class Expr:
    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Expr) else False
        return hash(self) == hash(other) and self._key() == other._key()

    def __setattr__(self, name, value):
        raise AttributeError("Expr nodes are immutable")

    # arithmetic builds raw nodes
    def __add__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Add(self, o)

    def __radd__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Add(o, self)

    def __sub__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Sub(self, o)

    def __rsub__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Sub(o, self)

    def __mul__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Mul(self, o)

    def __rmul__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Mul(o, self)

    def __truediv__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Div(self, o)

    def __rtruediv__(self, other):
        o = _operand(other)
        return NotImplemented if o is None else Div(o, self)

    def __pow__(self, k):
        return Pow(self, k)

    def __neg__(self):
        return Mul(Const(-1), self)

    def __repr__(self) -> str:
        return f"Expr({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def free_symbols(self) -> frozenset[str]:
        return free_symbols(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, bool) or not isinstance(value, (Rational, float)):
            raise TypeError(f"constant must be rational, got {value!r}")
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError("non-finite constant")
            value = Fraction(value)
        object.__setattr__(self, "value", Fraction(value))

    def _key(self):
        return (self.value,)


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self):
        return (self.name,)


class _Binary(Expr):
    __slots__ = ("left", "right")

    def __init__(self, left: Expr, right: Expr):
        object.__setattr__(self, "left", as_expr(left))
        object.__setattr__(self, "right", as_expr(right))

    def _key(self):
        return (self.left, self.right)


class Add(_Binary):
    __slots__ = ()


class Sub(_Binary):
    __slots__ = ()


class Mul(_Binary):
    __slots__ = ()


class Div(_Binary):
    __slots__ = ()


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: int):
        if isinstance(exp, bool) or not isinstance(exp, int):
            raise TypeError("only integer exponents are supported")
        object.__setattr__(self, "base", as_expr(base))
        object.__setattr__(self, "exp", exp)

    def _key(self):
        return (self.base, self.exp)


class Func(Expr):
    __slots__ = ("arg", "name")

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "arg", as_expr(arg))

    def _key(self):
        return (self.name, self.arg)


ZERO = Const(0)
ONE = Const(1)


def _operand(value):
    if isinstance(value, (Expr, str, Rational, float)) and not isinstance(value, bool):
        return as_expr(value)
    return None


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return Sym(value)
    return Const(value)


def sin(e):
    return Func("sin", as_expr(e))


def cos(e):
    return Func("cos", as_expr(e))


def exp(e):
    return Func("exp", as_expr(e))


def ln(e):
    return Func("ln", as_expr(e))


def sqrt(e):
    return Func("sqrt", as_expr(e))


def free_symbols(e: Expr) -> frozenset[str]:
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Sym):
            out.add(node.name)
        elif isinstance(node, _Binary):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, Pow):
            stack.append(node.base)
        elif isinstance(node, Func):
            stack.append(node.arg)
    return frozenset(out)


def has_function(e: Expr) -> bool:
    if isinstance(e, Func):
        return True
    if isinstance(e, _Binary):
        return has_function(e.left) or has_function(e.right)
    if isinstance(e, Pow):
        return has_function(e.base)
    return False


# ---------------------------------------------------------------- printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_const(q: Fraction) -> tuple[str, int]:
    if q.denominator == 1:
        text = str(q.numerator)
        return text, (_PREC_NEG if q < 0 else _PREC_ATOM)
    text = f"{abs(q.numerator)}/{q.denominator}"
    if q < 0:
        return "-" + text, _PREC_NEG
    return text, _PREC_MUL


def _is_neg_one(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == -1


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Sym):
        return e.name, _PREC_ATOM
    if isinstance(e, Func):
        return f"{e.name}({_render(e.arg)[0]})", _PREC_ATOM
    if isinstance(e, Pow):
        base, p = _render(e.base)
        if p <= _PREC_POW:
            base = f"({base})"
        k = str(e.exp) if e.exp >= 0 else f"({e.exp})"
        return f"{base}^{k}", _PREC_POW
    if isinstance(e, Mul) and _is_neg_one(e.left):
        inner, p = _render(e.right)
        if p < _PREC_NEG or (p == _PREC_NEG):
            inner = f"({inner})"
        return "-" + inner, _PREC_NEG
    if isinstance(e, (Add, Sub)):
        left, pl = _render(e.left)
        right, pr = _render(e.right)
        if pl < _PREC_ADD:
            left = f"({left})"
        # right operand of a minus needs parentheses at equal precedence
        if pr < _PREC_ADD or (isinstance(e, Sub) and pr == _PREC_ADD) or right.startswith("-"):
            right = f"({right})"
        op = " + " if isinstance(e, Add) else " - "
        return left + op + right, _PREC_ADD
    if isinstance(e, (Mul, Div)):
        left, pl = _render(e.left)
        right, pr = _render(e.right)
        if pl < _PREC_MUL:
            left = f"({left})"
        if pr <= _PREC_MUL or right.startswith("-"):
            right = f"({right})"
        op = "*" if isinstance(e, Mul) else "/"
        return left + op + right, _PREC_MUL
    raise TypeError(f"not an expression node: {e!r}")


def to_text(e: Expr) -> str:
    """Render in the textual grammar accepted by :func:`parse_expr`."""
    return _render(e)[0]


# -------------------------------------------------------------- evaluation

def _apply_func(name: str, v):
    if name == "ln":
        if v <= 0:
            raise SingularEvaluationError(f"ln of non-positive value {v}")
        return math.log(v)
    if name == "sqrt":
        if v < 0:
            raise SingularEvaluationError(f"sqrt of negative value {v}")
        return math.sqrt(v)
    try:
        return getattr(math, name)(v)
    except OverflowError as exc:
        raise SingularEvaluationError(f"{name} overflow at {v}") from exc


def eval_expr(e: Expr, env):
    """Evaluate ``e`` with symbol values from ``env``.

    Rational inputs stay exact (``Fraction``) until a transcendental node or a
    float input is met.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Sym):
        try:
            v = env[e.name]
        except KeyError:
            raise UnboundSymbolError(e.name) from None
        if isinstance(v, Rational):
            return Fraction(v)
        if isinstance(v, Real):
            if not math.isfinite(v):
                raise SingularEvaluationError(f"non-finite value for {e.name}")
            return float(v)
        raise TypeError(f"value for {e.name!r} is not a real scalar: {v!r}")
    if isinstance(e, Func):
        return _apply_func(e.name, eval_expr(e.arg, env))
    if isinstance(e, Pow):
        b = eval_expr(e.base, env)
        if e.exp < 0 and b == 0:
            raise SingularEvaluationError("zero raised to a negative power")
        try:
            return b ** e.exp
        except OverflowError as exc:
            raise SingularEvaluationError("power overflow") from exc
    a = eval_expr(e.left, env)
    b = eval_expr(e.right, env)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    if isinstance(e, Div):
        if b == 0:
            raise SingularEvaluationError("division by zero")
        return a / b
    raise TypeError(f"not an expression node: {e!r}")


def _pysrc(e: Expr) -> str:
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Sym):
        return f"_v[{e.name!r}]"
    if isinstance(e, Func):
        return f"_{e.name}({_pysrc(e.arg)})"
    if isinstance(e, Pow):
        if e.exp < 0:
            return f"(1.0/(({_pysrc(e.base)})**{-e.exp}))"
        return f"(({_pysrc(e.base)})**{e.exp})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    return f"({_pysrc(e.left)}{op}{_pysrc(e.right)})"


def _safe_ln(v):
    if v <= 0:
        raise SingularEvaluationError(f"ln of non-positive value {v}")
    return math.log(v)


def _safe_sqrt(v):
    if v < 0:
        raise SingularEvaluationError(f"sqrt of negative value {v}")
    return math.sqrt(v)


_COMPILE_NS = {
    "_sin": math.sin,
    "_cos": math.cos,
    "_exp": math.exp,
    "_ln": _safe_ln,
    "_sqrt": _safe_sqrt,
}


def compile_expr(e: Expr, names):
    """Float-valued fast evaluator ``f(*values)`` with arguments in ``names`` order."""
    names = tuple(names)
    missing = free_symbols(e) - set(names)
    if missing:
        raise UnboundSymbolError(sorted(missing)[0])
    src = _pysrc(e)
    code = compile(src, "<expr>", "eval")

    def f(*values):
        _v = dict(zip(names, values))
        try:
            return eval(code, _COMPILE_NS, {"_v": _v})
        except ZeroDivisionError as exc:
            raise SingularEvaluationError("division by zero") from exc
        except OverflowError as exc:
            raise SingularEvaluationError("overflow") from exc

    return f


# ----------------------------------------------------------- differentiation

def _raw_diff(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == var else ZERO
    if var not in free_symbols(e):
        return ZERO
    if isinstance(e, Add):
        return Add(_raw_diff(e.left, var), _raw_diff(e.right, var))
    if isinstance(e, Sub):
        return Sub(_raw_diff(e.left, var), _raw_diff(e.right, var))
    if isinstance(e, Mul):
        return Add(Mul(_raw_diff(e.left, var), e.right), Mul(e.left, _raw_diff(e.right, var)))
    if isinstance(e, Div):
        num = Sub(Mul(_raw_diff(e.left, var), e.right), Mul(e.left, _raw_diff(e.right, var)))
        return Div(num, Pow(e.right, 2))
    if isinstance(e, Pow):
        if e.exp == 0:
            return ZERO
        return Mul(Mul(Const(e.exp), Pow(e.base, e.exp - 1)), _raw_diff(e.base, var))
    if isinstance(e, Func):
        u = e.arg
        du = _raw_diff(u, var)
        if e.name == "sin":
            outer = Func("cos", u)
        elif e.name == "cos":
            outer = Mul(Const(-1), Func("sin", u))
        elif e.name == "exp":
            outer = e
        elif e.name == "ln":
            outer = Div(ONE, u)
        else:
            outer = Div(ONE, Mul(Const(2), e))
        return Mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


def substitute_raw(e: Expr, bindings) -> Expr:
    """Simultaneous substitution without simplification."""
    if not bindings:
        return e
    if isinstance(e, Sym):
        return bindings.get(e.name, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, _Binary):
        return type(e)(substitute_raw(e.left, bindings), substitute_raw(e.right, bindings))
    if isinstance(e, Pow):
        return Pow(substitute_raw(e.base, bindings), e.exp)
    if isinstance(e, Func):
        return Func(e.name, substitute_raw(e.arg, bindings))
    raise TypeError(f"not an expression node: {e!r}")
