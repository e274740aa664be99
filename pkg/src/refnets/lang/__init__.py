"""The declarative model language: syntax, parser, type checker, evaluator."""

from .parser import parse_model, parse_expression
from .check import typecheck, TypedModel
from .interp import Store, eval_expr, eval_guard, apply_operator

__all__ = [
    "parse_model",
    "parse_expression",
    "typecheck",
    "TypedModel",
    "Store",
    "eval_expr",
    "eval_guard",
    "apply_operator",
]
