"""Error types raised by the formula engine.

Parse-time and evaluation-time failures are distinct exception families so
callers (catalog validation, case generation) can react differently: the case
generator re-samples on DivisionByZero / DomainError / NonFiniteResult and
treats everything else as a hard fault.
"""

from __future__ import annotations


class FormulaError(Exception):
    """Base class; carries the character span of the offending source text."""

    def __init__(self, message: str, span: tuple[int, int] = (0, 0)):
        super().__init__(message)
        self.message = message
        self.span = span

    @property
    def position(self) -> int:
        return self.span[0]

    def __str__(self) -> str:
        return f"{self.message} (at offset {self.span[0]})"


class FormulaSyntaxError(FormulaError):
    """Malformed formula text: bad token, unbalanced parens, trailing input."""


class UnknownFunctionError(FormulaSyntaxError):
    """Call to a function outside the fixed set."""


class ArityError(FormulaSyntaxError):
    """Function called with the wrong number of arguments."""


class EvaluationError(FormulaError):
    """Base class for runtime failures during evaluation."""


class DivisionByZero(EvaluationError):
    pass


class DomainError(EvaluationError):
    """Argument outside a function's domain (sqrt of negative, ln of <= 0, ...)."""


class NonFiniteResult(EvaluationError):
    """An operation produced an infinity or NaN."""


class UnboundVariable(EvaluationError):
    """A free variable of the expression has no binding."""
