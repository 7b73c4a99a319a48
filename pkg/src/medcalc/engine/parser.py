"""Formula parser: closed grammar over a fixed function set.

Precedence (tightest first): unary minus, ^ (right-associative), * / %,
+ -, comparisons. Comparisons are only legal as the condition of if();
a validation pass rejects them anywhere else. See docs/formula-grammar.md
for the published EBNF.
"""

from __future__ import annotations

import re

from .errors import ArityError, FormulaSyntaxError, UnknownFunctionError
from .nodes import FUNCTIONS, BinOp, Call, Compare, Expr, Neg, Num, Var

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# Unicode operator aliases accepted in source text.
_ALIASES = {"×": "*", "÷": "/", "−": "-", "≤": "<=", "≥": ">=", "≠": "!="}

_TWO_CHAR_OPS = ("<=", ">=", "!=")
_ONE_CHAR_OPS = "+-*/%^(),<>="


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind  # "num" | "ident" | "op" | "end"
        self.text = text
        self.pos = pos

    @property
    def end(self) -> int:
        return self.pos + len(self.text)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _ALIASES:
            tokens.append(_Token("op", _ALIASES[ch], i))
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(_Token("op", two, i))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", (i, i + 1))
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == op:
            return self.advance()
        raise FormulaSyntaxError(
            f"expected {op!r} but found {tok.text or 'end of input'!r}",
            (tok.pos, tok.end),
        )

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    # comparison := additive (cmpop additive)?
    def comparison(self) -> Expr:
        left = self.additive()
        if self.at_op("<", "<=", ">", ">=", "=", "!="):
            op = self.advance()
            right = self.additive()
            if self.at_op("<", "<=", ">", ">=", "=", "!="):
                tok = self.peek()
                raise FormulaSyntaxError("chained comparison", (tok.pos, tok.end))
            return Compare(op.text, left, right, span=(left.span[0], right.span[1]))
        return left

    def additive(self) -> Expr:
        node = self.multiplicative()
        while self.at_op("+", "-"):
            op = self.advance()
            right = self.multiplicative()
            node = BinOp(op.text, node, right, span=(node.span[0], right.span[1]))
        return node

    def multiplicative(self) -> Expr:
        node = self.power()
        while self.at_op("*", "/", "%"):
            op = self.advance()
            right = self.power()
            node = BinOp(op.text, node, right, span=(node.span[0], right.span[1]))
        return node

    # power := negbase ('^' power)?   -- unary minus binds tighter than ^
    def power(self) -> Expr:
        base = self.negbase()
        if self.at_op("^"):
            self.advance()
            exponent = self.power()
            return BinOp("^", base, exponent, span=(base.span[0], exponent.span[1]))
        return base

    def negbase(self) -> Expr:
        if self.at_op("-"):
            tok = self.advance()
            operand = self.negbase()
            return Neg(operand, span=(tok.pos, operand.span[1]))
        return self.primary()

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), span=(tok.pos, tok.end))
        if tok.kind == "ident":
            self.advance()
            if self.at_op("("):
                return self.call(tok)
            return Var(tok.text, span=(tok.pos, tok.end))
        if self.at_op("("):
            self.advance()
            inner = self.comparison()
            close = self.expect_op(")")
            return _respan(inner, (tok.pos, close.end))
        raise FormulaSyntaxError(
            f"unexpected {tok.text or 'end of input'!r}", (tok.pos, max(tok.end, tok.pos + 1))
        )

    def call(self, name: _Token) -> Expr:
        if name.text not in FUNCTIONS:
            raise UnknownFunctionError(f"unknown function {name.text!r}", (name.pos, name.end))
        self.expect_op("(")
        args = [self.comparison()]
        while self.at_op(","):
            self.advance()
            args.append(self.comparison())
        close = self.expect_op(")")
        lo, hi = FUNCTIONS[name.text]
        if len(args) < lo or (hi is not None and len(args) > hi):
            expected = str(lo) if hi == lo else (f"{lo}+" if hi is None else f"{lo}..{hi}")
            raise ArityError(
                f"{name.text}() takes {expected} argument(s), got {len(args)}",
                (name.pos, close.end),
            )
        return Call(name.text, tuple(args), span=(name.pos, close.end))


def _respan(expr: Expr, span: tuple[int, int]) -> Expr:
    # dataclass is frozen; spans are compare=False metadata
    object.__setattr__(expr, "span", span)
    return expr


def _check_comparison_placement(expr: Expr, *, condition_slot: bool = False) -> None:
    if isinstance(expr, Compare):
        if not condition_slot:
            raise FormulaSyntaxError("comparison only allowed as an if() condition", expr.span)
        _check_comparison_placement(expr.left)
        _check_comparison_placement(expr.right)
        return
    if condition_slot:
        raise FormulaSyntaxError("if() condition must be a comparison", expr.span)
    if isinstance(expr, Neg):
        _check_comparison_placement(expr.operand)
    elif isinstance(expr, BinOp):
        _check_comparison_placement(expr.left)
        _check_comparison_placement(expr.right)
    elif isinstance(expr, Call):
        for i, arg in enumerate(expr.args):
            _check_comparison_placement(arg, condition_slot=(expr.func == "if" and i == 0))


def parse(text: str) -> Expr:
    """Parse formula source into an expression tree.

    Raises FormulaSyntaxError / UnknownFunctionError / ArityError with the
    offending character span.
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", (0, max(len(text), 1)))
    parser = _Parser(text)
    expr = parser.comparison()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise FormulaSyntaxError(
            f"unexpected {trailing.text!r} after expression", (trailing.pos, trailing.end)
        )
    _check_comparison_placement(expr)
    return expr


# Rendering ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2, "^": 4}


def _prec(expr: Expr) -> int:
    if isinstance(expr, Compare):
        return 0
    if isinstance(expr, BinOp):
        return _PREC[expr.op]
    if isinstance(expr, Neg):
        return 3
    return 5


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def render(expr: Expr) -> str:
    """Unparse a tree back to source text; parse(render(e)) is structurally e."""
    if isinstance(expr, Num):
        return _format_number(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        inner = render(expr.operand)
        # unary minus binds tighter than ^, so -(x^2) needs the parens to survive
        if _prec(expr.operand) < 3 or _prec(expr.operand) == 4:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, (BinOp, Compare)):
        me = _prec(expr)
        left, right = render(expr.left), render(expr.right)
        # parenthesize against associativity so the tree survives a re-parse
        if _prec(expr.left) < me or (_prec(expr.left) == me and expr.op == "^"):
            left = f"({left})"
        if _prec(expr.right) < me or (_prec(expr.right) == me and expr.op != "^"):
            right = f"({right})"
        return f"{left} {expr.op} {right}"
    if isinstance(expr, Call):
        return f"{expr.func}({', '.join(render(a) for a in expr.args)})"
    raise TypeError(f"not an Expr: {expr!r}")
