"""Tiny arithmetic language for potentials ``U(x)``.

Grammar (one variable ``x``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := abs | exp | cosh

``^`` binds tighter than unary minus and is right-associative, so
``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCTIONS = {
    "abs": np.abs,
    "exp": np.exp,
    "cosh": np.cosh,
}


class PotentialSyntaxError(ValueError):
    """Malformed expression; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PotentialSyntaxError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad), text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return PotentialSyntaxError(message, _byte_offset(self.text, tok[2]), self.text)

    def expect(self, value: str):
        tok = self.peek()
        if tok[1] != value or tok[0] != "op":
            if value == ")":
                raise self.error("unbalanced parentheses: expected ')'")
            raise self.error(f"expected {value!r}")
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[1] == ")":
                raise self.error("unbalanced parentheses: unexpected ')'")
            raise self.error(f"unexpected token {tok[1]!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value == "x":
                return Var()
            if value not in FUNCTIONS:
                raise self.error(f"unknown function or identifier {value!r}", tok)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(value, arg)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error("unexpected end of expression", tok)
        if value == ")":
            raise self.error("unbalanced parentheses: unexpected ')'", tok)
        raise self.error(f"unexpected token {value!r}", tok)


def parse(text: str) -> Node:
    if not text or not text.strip():
        raise PotentialSyntaxError("empty expression", 0, text)
    return _Parser(text).parse()


def evaluate(node: Node, x):
    """Evaluate ``node`` at a scalar or array ``x`` (numpy semantics)."""
    if isinstance(node, Num):
        return np.full_like(np.asarray(x, dtype=float), node.value) if np.ndim(x) else node.value
    if isinstance(node, Var):
        return np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, x))
    left = evaluate(node.left, x)
    right = evaluate(node.right, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return np.divide(left, right)
    return np.power(left, right)


def to_text(node: Node) -> str:
    """Fully parenthesized rendering that re-parses to the same tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"


def is_even(node: Node) -> bool:
    """Conservative syntactic parity check: True only if ``U(-x) == U(x)`` is provable."""
    return _parity(node) == "even"


def _parity(node: Node) -> str:
    # returns "even", "odd", "const" or "none"
    if isinstance(node, Num):
        return "const"
    if isinstance(node, Var):
        return "odd"
    if isinstance(node, Neg):
        return _parity(node.operand)
    if isinstance(node, Call):
        inner = _parity(node.arg)
        if node.func in ("abs", "cosh") and inner in ("odd", "even", "const"):
            return "even" if inner != "const" else "const"
        return "const" if inner == "const" else ("even" if inner == "even" else "none")
    left, right = _parity(node.left), _parity(node.right)
    if node.op in "+-":
        if left == right:
            return left
        if {left, right} == {"even", "const"}:
            return "even"
        return "none"
    if node.op in "*/":
        if "none" in (left, right):
            return "none"
        if left == "const":
            return right
        if right == "const":
            return left
        return "even" if left == right else "odd"
    # power
    if left == "const" and right == "const":
        return "const"
    if right == "const" and isinstance(node.right, Num):
        exponent = node.right.value
        if left == "even":
            return "even"
        if left == "odd" and float(exponent).is_integer():
            return "even" if int(exponent) % 2 == 0 else "odd"
    if left == "even" and right in ("even", "const"):
        return "even"
    return "none"
