"""Compiles expression trees to a flat stack-machine program.

Compiling once per task and replaying the program over fresh bindings is the
hot path of case generation and reward serving; the instruction loop itself
lives in the backend module (compiled Cython core when available, pure-Python
fallback otherwise).
"""

from __future__ import annotations

import math
from array import array
from collections.abc import Mapping, Sequence

from . import backend
from .errors import DivisionByZero, DomainError, NonFiniteResult, UnboundVariable
from .nodes import BinOp, Call, Compare, Expr, Neg, Num, Var

# Opcode table. The numeric values are mirrored in _stackvm.pyx and
# _stackvm_py.py; keep all three in sync.
OP_CONST = 0
OP_VAR = 1
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_MOD = 7
OP_POW = 8
OP_SQRT = 9
OP_EXP = 10
OP_LN = 11
OP_LOG10 = 12
OP_LOG2 = 13
OP_ABS = 14
OP_FLOOR = 15
OP_CEIL = 16
OP_MIN = 17
OP_MAX = 18
OP_ROUND = 19
OP_LT = 20
OP_LE = 21
OP_GT = 22
OP_GE = 23
OP_EQ = 24
OP_NE = 25
OP_JZ = 26
OP_JMP = 27

_UNARY_CALLS = {
    "sqrt": OP_SQRT,
    "exp": OP_EXP,
    "ln": OP_LN,
    "log10": OP_LOG10,
    "log2": OP_LOG2,
    "abs": OP_ABS,
    "floor": OP_FLOOR,
    "ceil": OP_CEIL,
}
_CMP_OPS = {"<": OP_LT, "<=": OP_LE, ">": OP_GT, ">=": OP_GE, "=": OP_EQ, "!=": OP_NE}
_BIN_OPS = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV, "%": OP_MOD, "^": OP_POW}

STATUS_OK = 0
STATUS_DIV0 = 1
STATUS_DOMAIN = 2
STATUS_NONFINITE = 3


class _Compiler:
    def __init__(self):
        self.ops: list[int] = []
        self.args: list[int] = []
        self.spans: list[tuple[int, int]] = []
        self.consts: list[float] = []
        self.const_index: dict[float, int] = {}
        self.var_names: list[str] = []
        self.var_index: dict[str, int] = {}
        self.var_spans: dict[str, tuple[int, int]] = {}
        self.depth = 0
        self.max_depth = 0

    def emit(self, op: int, arg: int, span: tuple[int, int], pushes: int) -> int:
        self.ops.append(op)
        self.args.append(arg)
        self.spans.append(span)
        self.depth += pushes
        self.max_depth = max(self.max_depth, self.depth)
        return len(self.ops) - 1

    def const(self, value: float) -> int:
        if value not in self.const_index:
            self.const_index[value] = len(self.consts)
            self.consts.append(value)
        return self.const_index[value]

    def var(self, name: str, span: tuple[int, int]) -> int:
        if name not in self.var_index:
            self.var_index[name] = len(self.var_names)
            self.var_names.append(name)
            self.var_spans[name] = span
        return self.var_index[name]

    def compile(self, expr: Expr) -> None:
        if isinstance(expr, Num):
            self.emit(OP_CONST, self.const(expr.value), expr.span, +1)
        elif isinstance(expr, Var):
            self.emit(OP_VAR, self.var(expr.name, expr.span), expr.span, +1)
        elif isinstance(expr, Neg):
            self.compile(expr.operand)
            self.emit(OP_NEG, 0, expr.span, 0)
        elif isinstance(expr, (BinOp, Compare)):
            self.compile(expr.left)
            self.compile(expr.right)
            table = _CMP_OPS if isinstance(expr, Compare) else _BIN_OPS
            self.emit(table[expr.op], 0, expr.span, -1)
        elif isinstance(expr, Call):
            self.compile_call(expr)
        else:
            raise TypeError(f"not an Expr: {expr!r}")

    def compile_call(self, call: Call) -> None:
        if call.func == "if":
            cond, then, other = call.args
            self.compile(cond)
            jz = self.emit(OP_JZ, 0, call.span, -1)
            self.compile(then)
            jmp = self.emit(OP_JMP, 0, call.span, 0)
            self.args[jz] = len(self.ops)
            # both branches leave exactly one value; track only one push
            self.depth -= 1
            self.compile(other)
            self.args[jmp] = len(self.ops)
        elif call.func in _UNARY_CALLS:
            self.compile(call.args[0])
            self.emit(_UNARY_CALLS[call.func], 0, call.span, 0)
        elif call.func in ("min", "max"):
            op = OP_MIN if call.func == "min" else OP_MAX
            self.compile(call.args[0])
            for arg in call.args[1:]:
                self.compile(arg)
                self.emit(op, 0, call.span, -1)
        elif call.func == "pow":
            self.compile(call.args[0])
            self.compile(call.args[1])
            self.emit(OP_POW, 0, call.span, -1)
        elif call.func == "round":
            self.compile(call.args[0])
            self.compile(call.args[1])
            self.emit(OP_ROUND, 0, call.span, -1)
        else:
            raise TypeError(f"unknown function {call.func!r}")


class Program:
    """A compiled formula, replayable over many bindings."""

    __slots__ = ("ops", "args", "consts", "var_names", "spans", "source", "max_stack")

    def __init__(self, compiler: _Compiler, source: str):
        self.ops = array("q", compiler.ops)
        self.args = array("q", compiler.args)
        self.consts = array("d", compiler.consts or [0.0])
        self.var_names: tuple[str, ...] = tuple(compiler.var_names)
        self.spans = tuple(compiler.spans)
        self.source = source
        self.max_stack = max(compiler.max_depth, 1)

    def run_values(self, values: Sequence[float]) -> float:
        """Evaluate with `values` ordered as `var_names`."""
        variables = array("d", values) if not isinstance(values, array) else values
        stack = array("d", bytes(8 * self.max_stack))
        status, value, ip = backend.run_program(self.ops, self.args, self.consts, variables, stack)
        if status != STATUS_OK:
            self._raise(status, ip)
        return value

    def run(self, bindings: Mapping[str, float]) -> float:
        values = array("d", bytes(8 * len(self.var_names)))
        for i, name in enumerate(self.var_names):
            try:
                v = float(bindings[name])
            except KeyError:
                raise UnboundVariable(
                    f"variable {name!r} is not bound", self._var_span(name)
                ) from None
            if not math.isfinite(v):
                raise ValueError(f"binding {name!r} must be finite, got {v!r}")
            values[i] = v
        return self.run_values(values)

    def _var_span(self, name: str) -> tuple[int, int]:
        for op, arg, span in zip(self.ops, self.args, self.spans):
            if op == OP_VAR and self.var_names[arg] == name:
                return span
        return (0, 0)

    def _raise(self, status: int, ip: int) -> None:
        span = self.spans[ip] if 0 <= ip < len(self.spans) else (0, 0)
        snippet = f" in {self.source[span[0]:span[1]]!r}" if self.source else ""
        if status == STATUS_DIV0:
            raise DivisionByZero(f"division by zero{snippet}", span)
        if status == STATUS_DOMAIN:
            raise DomainError(f"argument outside function domain{snippet}", span)
        raise NonFiniteResult(f"non-finite result{snippet}", span)


def compile_expr(expr: Expr, source: str = "") -> Program:
    compiler = _Compiler()
    compiler.compile(expr)
    return Program(compiler, source)


def evaluate(expr: Expr, bindings: Mapping[str, float], source: str = "") -> float:
    """Evaluate a tree over numeric bindings.

    Raises DivisionByZero / DomainError / NonFiniteResult / UnboundVariable,
    each pointing at the failing sub-expression span.
    """
    return compile_expr(expr, source).run(bindings)
