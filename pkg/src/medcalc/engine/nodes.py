"""Expression tree nodes.

Nodes are immutable and carry the source span they were parsed from, so
evaluation errors can point at the failing sub-expression. `canonical()`
strips spans for structural comparison (parse/render round-trip tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field

Span = tuple[int, int]

# Fixed function set with arity; None upper bound = variadic.
FUNCTIONS: dict[str, tuple[int, int | None]] = {
    "sqrt": (1, 1),
    "exp": (1, 1),
    "ln": (1, 1),
    "log10": (1, 1),
    "log2": (1, 1),
    "abs": (1, 1),
    "floor": (1, 1),
    "ceil": (1, 1),
    "min": (2, None),
    "max": (2, None),
    "pow": (2, 2),
    "round": (2, 2),
    "if": (3, 3),
}

COMPARISON_OPS = ("<", "<=", ">", ">=", "=", "!=")


@dataclass(frozen=True)
class Expr:
    span: Span = field(default=(0, 0), kw_only=True, compare=False)

    def canonical(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def canonical(self):
        return ("num", self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def canonical(self):
        return ("var", self.name)


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def canonical(self):
        return ("neg", self.operand.canonical())


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / % ^
    left: Expr
    right: Expr

    def canonical(self):
        return (self.op, self.left.canonical(), self.right.canonical())


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # one of < <= > >= = !=
    left: Expr
    right: Expr

    def canonical(self):
        return ("cmp" + self.op, self.left.canonical(), self.right.canonical())


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple[Expr, ...]

    def canonical(self):
        return ("call", self.func, tuple(a.canonical() for a in self.args))


def free_variables(expr: Expr) -> set[str]:
    """Names of all variables appearing in the tree."""
    out: set[str] = set()
    _collect_vars(expr, out)
    return out


def _collect_vars(expr: Expr, out: set[str]) -> None:
    if isinstance(expr, Var):
        out.add(expr.name)
    elif isinstance(expr, Neg):
        _collect_vars(expr.operand, out)
    elif isinstance(expr, (BinOp, Compare)):
        _collect_vars(expr.left, out)
        _collect_vars(expr.right, out)
    elif isinstance(expr, Call):
        for a in expr.args:
            _collect_vars(a, out)
