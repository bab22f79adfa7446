"""Symbolic scalar expressions: parse, evaluate, differentiate, simplify, compare."""

from .nodes import (
    FUNCTIONS,
    ONE,
    ZERO,
    Add,
    Const,
    Div,
    Expr,
    ExprError,
    Func,
    Mul,
    Pow,
    SingularEvaluationError,
    Sub,
    Sym,
    UnboundSymbolError,
    as_expr,
    compile_expr,
    cos,
    eval_expr,
    exp,
    free_symbols,
    has_function,
    ln,
    sin,
    sqrt,
    to_text,
)
from .normal import simplify, to_ratfunc
from .ops import (
    DEFAULT_TOL,
    DEFAULT_TRIALS,
    EqualityResult,
    coerce,
    diff_expr,
    exprs_equal,
    is_zero,
    subst_expr,
)
from .parser import ParseError, UnknownSymbolError, parse_expr

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_TRIALS",
    "FUNCTIONS",
    "ONE",
    "ZERO",
    "Add",
    "Const",
    "Div",
    "EqualityResult",
    "Expr",
    "ExprError",
    "Func",
    "Mul",
    "ParseError",
    "Pow",
    "SingularEvaluationError",
    "Sub",
    "Sym",
    "UnboundSymbolError",
    "UnknownSymbolError",
    "as_expr",
    "coerce",
    "compile_expr",
    "cos",
    "diff_expr",
    "eval_expr",
    "exp",
    "exprs_equal",
    "free_symbols",
    "has_function",
    "is_zero",
    "ln",
    "parse_expr",
    "simplify",
    "sin",
    "sqrt",
    "subst_expr",
    "to_ratfunc",
    "to_text",
]
