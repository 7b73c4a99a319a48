"""Formula engine: closed-grammar parsing and deterministic evaluation."""

from .backend import BACKEND_NAME, COMPILED
from .errors import (
    ArityError,
    DivisionByZero,
    DomainError,
    EvaluationError,
    FormulaError,
    FormulaSyntaxError,
    NonFiniteResult,
    UnboundVariable,
    UnknownFunctionError,
)
from .nodes import BinOp, Call, Compare, Expr, Neg, Num, Var, free_variables
from .parser import parse, render
from .program import Program, compile_expr, evaluate
from .rounding import round_to

__all__ = [
    "ArityError",
    "BACKEND_NAME",
    "BinOp",
    "COMPILED",
    "Call",
    "Compare",
    "DivisionByZero",
    "DomainError",
    "EvaluationError",
    "Expr",
    "FormulaError",
    "FormulaSyntaxError",
    "Neg",
    "NonFiniteResult",
    "Num",
    "Program",
    "UnboundVariable",
    "UnknownFunctionError",
    "Var",
    "compile_expr",
    "evaluate",
    "free_variables",
    "parse",
    "render",
    "round_to",
]
