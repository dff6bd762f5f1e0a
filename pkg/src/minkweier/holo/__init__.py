"""Holomorphic expressions: parsing, printing and jet evaluation."""

from .expr import (
    Add, Apply, Div, Expr, I, Lit, Mul, Neg, Opaque, Pow, Sub, Subst, Var,
    as_expr, compose_affine, cut_arguments, eval_jet, format_expr, is_textual,
)
from .jet import Jet, compose
from .parser import parse_expr

__all__ = [
    "Add", "Apply", "Div", "Expr", "I", "Jet", "Lit", "Mul", "Neg", "Opaque", "Pow", "Sub",
    "Subst", "Var", "as_expr", "compose", "compose_affine", "cut_arguments", "eval_jet", "format_expr",
    "is_textual", "parse_expr",
]
