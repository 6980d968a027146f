"""A tiny total expression language for chart maps.

Grammar (one expression per output coordinate, separated by ';'):

    map    := expr (';' expr)*
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | atom
    atom   := NUMBER | 'pi' | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

NUMBER is an integer or decimal literal, parsed exactly as a rational.
VAR is one of x, y, z, w or x1..x4 (chart coordinates, in order).
FUNC is one of sin, cos, exp (one argument) and atan2 (two arguments).

There are no user-defined functions and no undefined behavior: every closed
term over the declared variables evaluates.  ASTs support exact affine
analysis (used to recognize integer-affine torus maps) and compile to
numpy-vectorized evaluators.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np


class ParseError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class ArityMismatch(Exception):
    pass


VAR_NAMES = ("x", "y", "z", "w")
FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "atan2": 2}


# -- AST nodes ---------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '/'
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple[object, ...]


Expr = object


# -- tokenizer / parser ------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/();,]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None or mo.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        if mo.group("num"):
            tokens.append(("num", mo.group("num"), mo.start("num")))
        elif mo.group("name"):
            tokens.append(("name", mo.group("name"), mo.start("name")))
        else:
            tokens.append(("op", mo.group("op"), mo.start("op")))
        pos = mo.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, val, pos = self.peek()
        if kind == "op" and val == symbol:
            return self.advance()
        raise ParseError("expected %r" % symbol, pos)

    def parse_map(self):
        exprs = [self.parse_expr()]
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == ";":
                self.advance()
                exprs.append(self.parse_expr())
            elif kind == "end":
                return exprs
            else:
                raise ParseError("unexpected token %r" % val, pos)

    def parse_expr(self):
        node = self.parse_term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                node = BinOp(val, node, self.parse_term())
            else:
                return node

    def parse_term(self):
        node = self.parse_unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                node = BinOp(val, node, self.parse_unary())
            else:
                return node

    def parse_unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            inner = self.parse_unary()
            return inner if val == "+" else BinOp("-", Const(Fraction(0)), inner)
        return self.parse_atom()

    def parse_atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(Fraction(val))
        if kind == "name":
            if val == "pi":
                return Pi()
            if val in FUNCTIONS:
                self.expect_op("(")
                args = [self.parse_expr()]
                while True:
                    k2, v2, p2 = self.peek()
                    if k2 == "op" and v2 == ",":
                        self.advance()
                        args.append(self.parse_expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != FUNCTIONS[val]:
                    raise ParseError(
                        "%s takes %d argument(s), got %d" % (val, FUNCTIONS[val], len(args)),
                        pos,
                    )
                return Call(val, tuple(args))
            idx = _var_index(val)
            if idx is None:
                raise ParseError("unknown name %r" % val, pos)
            if idx >= self.nvars:
                raise ParseError(
                    "variable %r outside the %d declared coordinates" % (val, self.nvars),
                    pos,
                )
            return Var(idx)
        if kind == "op" and val == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError("unexpected token %r" % (val or "end of input"), pos)


def _var_index(name: str) -> Optional[int]:
    if name in VAR_NAMES:
        return VAR_NAMES.index(name)
    mo = re.fullmatch(r"x([1-4])", name)
    if mo:
        return int(mo.group(1)) - 1
    return None


def parse_expressions(text: str, nvars: int) -> tuple:
    """Parse a ';'-separated list of expressions over nvars chart coordinates."""
    return tuple(_Parser(text, nvars).parse_map())


# -- evaluation --------------------------------------------------------------


def compile_expr(node: Expr):
    """Compile an AST to a function of a (npoints, nvars) coordinate array."""
    if isinstance(node, Const):
        c = float(node.value)
        return lambda pts: np.full(pts.shape[0], c)
    if isinstance(node, Pi):
        return lambda pts: np.full(pts.shape[0], math.pi)
    if isinstance(node, Var):
        i = node.index
        return lambda pts: pts[:, i]
    if isinstance(node, BinOp):
        lf = compile_expr(node.left)
        rf = compile_expr(node.right)
        op = node.op
        if op == "+":
            return lambda pts: lf(pts) + rf(pts)
        if op == "-":
            return lambda pts: lf(pts) - rf(pts)
        if op == "*":
            return lambda pts: lf(pts) * rf(pts)
        return lambda pts: lf(pts) / rf(pts)
    if isinstance(node, Call):
        fns = [compile_expr(a) for a in node.args]
        if node.func == "sin":
            return lambda pts: np.sin(fns[0](pts))
        if node.func == "cos":
            return lambda pts: np.cos(fns[0](pts))
        if node.func == "exp":
            return lambda pts: np.exp(fns[0](pts))
        return lambda pts: np.arctan2(fns[0](pts), fns[1](pts))
    raise TypeError("not an expression node: %r" % (node,))


def compile_map(exprs, nvars: int):
    """Vectorized evaluator (npoints, nvars) -> (npoints, len(exprs))."""
    fns = [compile_expr(e) for e in exprs]

    def evaluate(points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != nvars:
            raise ValueError("expected %d coordinates, got %d" % (nvars, pts.shape[1]))
        return np.stack([f(pts) for f in fns], axis=-1)

    return evaluate


# -- exact affine analysis ---------------------------------------------------


def affine_parts(node: Expr, nvars: int):
    """Exact (coefficients, constant) if the expression is affine, else None."""
    if isinstance(node, Const):
        return [Fraction(0)] * nvars, node.value
    if isinstance(node, Pi):
        return None  # irrational constant: not exactly representable
    if isinstance(node, Var):
        coeffs = [Fraction(0)] * nvars
        coeffs[node.index] = Fraction(1)
        return coeffs, Fraction(0)
    if isinstance(node, BinOp):
        left = affine_parts(node.left, nvars)
        right = affine_parts(node.right, nvars)
        if left is None or right is None:
            return None
        lc, lk = left
        rc, rk = right
        if node.op == "+":
            return [a + b for a, b in zip(lc, rc)], lk + rk
        if node.op == "-":
            return [a - b for a, b in zip(lc, rc)], lk - rk
        if node.op == "*":
            if all(a == 0 for a in lc):
                return [lk * b for b in rc], lk * rk
            if all(b == 0 for b in rc):
                return [a * rk for a in lc], lk * rk
            return None
        if node.op == "/":
            if all(b == 0 for b in rc) and rk != 0:
                return [a / rk for a in lc], lk / rk
            return None
    return None
