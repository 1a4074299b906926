"""Symbolic scalar expressions: construction, parsing, calculus, sampling."""

from .core import (
    FUNCTIONS,
    ONE,
    ZERO,
    DivisionByZeroExpr,
    Expr,
    add_all,
    apply_fn,
    as_expr,
    const,
    cos,
    differentiate,
    exp,
    normalize,
    sin,
    substitute,
    symbol,
    symbols,
)
from .numeric import (
    Point,
    PoleError,
    ResamplingExhausted,
    eval_exact,
    eval_numeric,
    eval_with_scale,
    is_negligible,
    is_zero,
    sample_point,
)
from .parser import ParseError, parse
from .printer import to_text

__all__ = [
    "FUNCTIONS", "ONE", "ZERO", "DivisionByZeroExpr", "Expr", "add_all", "apply_fn",
    "as_expr", "const", "cos", "differentiate", "exp", "normalize", "sin", "substitute",
    "symbol", "symbols", "Point", "PoleError", "ResamplingExhausted", "eval_exact",
    "eval_numeric", "eval_with_scale", "is_negligible", "is_zero", "sample_point",
    "ParseError", "parse", "to_text",
]
