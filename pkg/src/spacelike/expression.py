"""Arithmetic expressions in ``x1 .. xm`` for user-defined surfaces.

Grammar (``^`` is right-associative and binds tighter than unary minus)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names are the coordinates ``x1 .. xm`` and the constants ``pi`` and ``e``;
functions are ``sqrt exp log sin cos tan sinh cosh tanh abs``.
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import ConfigError
from .geometry import Signature, SurfaceDef

FUNCTIONS = {
    "sqrt": math.sqrt,
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "abs": abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int  # 0-based offset into the source


def tokenize(text: str, line: int = 1, col0: int = 1) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise ConfigError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = mt.lastgroup
        start = mt.start(kind)
        tokens.append(Token(kind, mt.group(kind), start))
        pos = mt.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes are tuples: ("num", v) ("var", k) ("neg", a) ("bin", op, a, b) ("call", name, a)
Node = Tuple


class Parser:
    def __init__(self, text: str, m: int, line: int = 1, col0: int = 1):
        self.text = text
        self.m = m
        self.line = line
        self.col0 = col0
        self.tokens = tokenize(text, line, col0)
        self.i = 0

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ConfigError(msg, self.line, self.col0 + tok.pos)

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, *ops):
        tok = self.peek()
        if tok.kind == "op" and tok.text in ops:
            self.i += 1
            return tok
        return None

    def expect(self, op):
        if self.accept(op) is None:
            tok = self.peek()
            found = tok.text or "end of expression"
            raise self.error(f"expected {op!r}, found {found!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return node

    def expr(self):
        node = self.term()
        while True:
            tok = self.accept("+", "-")
            if tok is None:
                return node
            node = ("bin", tok.text, node, self.term())

    def term(self):
        node = self.unary()
        while True:
            tok = self.accept("*", "/")
            if tok is None:
                return node
            node = ("bin", tok.text, node, self.unary())

    def unary(self):
        if self.accept("-"):
            return ("neg", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return ("bin", "^", base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return ("num", float(tok.text))
        if tok.kind == "name":
            if self.accept("("):
                if tok.text not in FUNCTIONS:
                    raise self.error(f"unknown function {tok.text!r}", tok)
                arg = self.expr()
                self.expect(")")
                return ("call", tok.text, arg)
            if tok.text in CONSTANTS:
                return ("num", CONSTANTS[tok.text])
            mt = re.fullmatch(r"x(\d+)", tok.text)
            if mt is None:
                raise self.error(f"unknown name {tok.text!r}", tok)
            k = int(mt.group(1))
            if not 1 <= k <= self.m:
                raise self.error(f"coordinate {tok.text} out of range x1..x{self.m}", tok)
            return ("var", k - 1)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of expression"
        raise self.error(f"expected a number, name or '(', found {found!r}", tok)


def parse_expression(text: str, m: int, line: int = 1, col0: int = 1) -> Node:
    return Parser(text, m, line, col0).parse()


_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": lambda a, b: a**b,
}


def compile_node(node: Node) -> Callable:
    """Turn an AST into a closure of the coordinate vector."""
    kind = node[0]
    if kind == "num":
        v = node[1]
        return lambda x: v
    if kind == "var":
        k = node[1]
        return lambda x: x[k]
    if kind == "neg":
        a = compile_node(node[1])
        return lambda x: -a(x)
    if kind == "bin":
        op = _BINOPS[node[1]]
        a, b = compile_node(node[2]), compile_node(node[3])
        return lambda x: op(a(x), b(x))
    if kind == "call":
        fn = FUNCTIONS[node[1]]
        a = compile_node(node[2])
        return lambda x: fn(a(x))
    raise ValueError(f"bad node {node!r}")


def _safe(fn):
    def wrapped(x):
        try:
            return float(fn(x))
        except (ValueError, ZeroDivisionError, OverflowError, TypeError):
            # domain errors become non-finite values and are reported by the evaluator
            return math.nan

    return wrapped


def expression_surface(exprs, m: int, name: str = "expression") -> SurfaceDef:
    """Surface whose outputs are the given expression strings (or parsed nodes).

    Derivatives are left to finite differences.
    """
    nodes = [parse_expression(e, m) if isinstance(e, str) else e for e in exprs]
    funcs = [_safe(compile_node(nd)) for nd in nodes]

    def f(x):
        xs = [float(v) for v in x]
        return np.array([fn(xs) for fn in funcs])

    return SurfaceDef(Signature(m, len(funcs)), f, name=name)
