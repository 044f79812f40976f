"""Module expressions: parsing and evaluation.

Grammar::

    expr   := term ("*" term)*
    term   := "(" expr ")" | "unit" | "L(" int ["^" int] ")" | "<" ints ">"
            | "detmod(" word ";" word ";" weight ")" | "gendetmod(" word ";" weight ")"
            | ("hd" | "soc" | "dual" | "psi") "(" expr ")"
            | ("Ei" | "EstarMax") "(" expr "," int ")"
    word   := "s[" ints "]"
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .cartan import CartanError, WeylElement, is_w_dominant, parse_weight
from .conv import convolve, head, mark_simple, simple_Ln, socle
from .detmod import detmod_pair, e_star_max, gen_detmod_word
from .modules import E, ModuleError, dual, one_dim_module, psi_star, unit_module


class ExprError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


# -- syntax tree ---------------------------------------------------------------------

@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Simple:
    i: int
    n: int = 1


@dataclass(frozen=True)
class OneDim:
    word: tuple


@dataclass(frozen=True)
class DetMod:
    w: tuple
    v: tuple
    lam: str


@dataclass(frozen=True)
class GenDetMod:
    w: tuple
    lam: str


@dataclass(frozen=True)
class Conv:
    left: object
    right: object


@dataclass(frozen=True)
class Apply:
    op: str
    arg: object
    index: int | None = None


ModuleExpr = Unit | Simple | OneDim | DetMod | GenDetMod | Conv | Apply

_UNARY = ("hd", "soc", "dual", "psi")
_INDEXED = ("Ei", "EstarMax")
_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[()<>\[\],;*^]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self._skip()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise ExprError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        return m.group(m.lastgroup)

    def take(self, expected: str | None = None) -> str:
        self._skip()
        start = self.pos
        tok = self.peek()
        if tok is None:
            raise ExprError(f"unexpected end of input, expected {expected or 'a token'}", start)
        if expected is not None and tok != expected:
            raise ExprError(f"expected {expected!r}, found {tok!r}", start)
        self.pos = _TOKEN.match(self.text, self.pos).end()
        return tok

    def integer(self) -> int:
        self._skip()
        start = self.pos
        tok = self.take()
        try:
            return int(tok)
        except ValueError:
            raise ExprError(f"expected an integer, found {tok!r}", start) from None

    def ints(self, close: str) -> tuple:
        out = []
        if self.peek() == close:
            return ()
        out.append(self.integer())
        while self.peek() == ",":
            self.take(",")
            out.append(self.integer())
        return tuple(out)

    def word(self) -> tuple:
        self.take("s")
        self.take("[")
        w = self.ints("]")
        self.take("]")
        return w

    def raw_until(self, stops: str) -> str:
        self._skip()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch in stops and depth == 0:
                break
            self.pos += 1
        out = self.text[start:self.pos].strip()
        if not out:
            raise ExprError("expected a weight", start)
        return out

    def expr(self):
        node = self.term()
        while self.peek() == "*":
            self.take("*")
            node = Conv(node, self.term())
        return node

    def term(self):
        self._skip()
        start = self.pos
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of input", start)
        if tok == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if tok == "<":
            self.take("<")
            w = self.ints(">")
            self.take(">")
            return OneDim(w)
        if tok == "unit":
            self.take()
            return Unit()
        if tok == "L":
            self.take()
            self.take("(")
            i = self.integer()
            n = 1
            if self.peek() == "^":
                self.take("^")
                n = self.integer()
            self.take(")")
            return Simple(i, n)
        if tok == "detmod":
            self.take()
            self.take("(")
            w = self.word()
            self.take(";")
            v = self.word()
            self.take(";")
            lam = self.raw_until(")")
            self.take(")")
            return DetMod(w, v, lam)
        if tok == "gendetmod":
            self.take()
            self.take("(")
            w = self.word()
            self.take(";")
            lam = self.raw_until(")")
            self.take(")")
            return GenDetMod(w, lam)
        if tok in _UNARY:
            self.take()
            self.take("(")
            node = self.expr()
            self.take(")")
            return Apply(tok, node)
        if tok in _INDEXED:
            self.take()
            self.take("(")
            node = self.expr()
            self.take(",")
            i = self.integer()
            self.take(")")
            return Apply(tok, node, i)
        raise ExprError(f"unexpected token {tok!r}", start)


def parse(text: str):
    p = _Parser(text)
    node = p.expr()
    p._skip()
    if p.pos != len(text):
        raise ExprError(f"trailing input {text[p.pos:]!r}", p.pos)
    return node


# -- evaluation -----------------------------------------------------------------------

def _weyl(cartan, word) -> WeylElement:
    try:
        w = WeylElement.from_word(cartan, word)
    except CartanError as exc:
        raise ModuleError(str(exc)) from None
    if len(w) != len(word):
        raise ModuleError(f"s[{','.join(map(str, word))}] is not reduced")
    return w


def _index(cartan, i: int) -> int:
    if i not in cartan.pos:
        raise ModuleError(f"index {i} not in the index set")
    return i


def evaluate(node, qtable):
    cartan = qtable.cartan
    if isinstance(node, str):
        node = parse(node)
    if isinstance(node, Unit):
        return mark_simple(unit_module(qtable), real=True)
    if isinstance(node, Simple):
        return simple_Ln(qtable, _index(cartan, node.i), node.n)
    if isinstance(node, OneDim):
        for i in node.word:
            _index(cartan, i)
        return mark_simple(one_dim_module(qtable, node.word, strict=False))
    if isinstance(node, GenDetMod):
        w = _weyl(cartan, node.w)
        lam = parse_weight(cartan, node.lam)
        if not is_w_dominant(lam, w):
            raise ModuleError(f"{node.lam} is not {w}-dominant")
        return gen_detmod_word(qtable, node.w, lam)
    if isinstance(node, DetMod):
        return detmod_pair(qtable, _weyl(cartan, node.w), _weyl(cartan, node.v), parse_weight(cartan, node.lam))
    if isinstance(node, Conv):
        return convolve(evaluate(node.left, qtable), evaluate(node.right, qtable))
    if isinstance(node, Apply):
        M = evaluate(node.arg, qtable)
        if node.op == "hd":
            return head(M)
        if node.op == "soc":
            return socle(M)
        if node.op == "dual":
            return dual(M)
        if node.op == "psi":
            return psi_star(M)
        i = _index(cartan, node.index)
        if node.op == "Ei":
            out = E(M, i)
            if out is None:
                raise ModuleError(f"E_{i} of the module is zero")
            return out
        if node.op == "EstarMax":
            return e_star_max(M, i)[0]
    raise ExprError(f"cannot evaluate {node!r}")


def to_text(node) -> str:
    """Render a tree back in the input syntax."""
    def word(w):
        return "s[" + ",".join(map(str, w)) + "]"

    if isinstance(node, Unit):
        return "unit"
    if isinstance(node, Simple):
        return f"L({node.i})" if node.n == 1 else f"L({node.i}^{node.n})"
    if isinstance(node, OneDim):
        return "<" + ",".join(map(str, node.word)) + ">"
    if isinstance(node, DetMod):
        return f"detmod({word(node.w)}; {word(node.v)}; {node.lam})"
    if isinstance(node, GenDetMod):
        return f"gendetmod({word(node.w)}; {node.lam})"
    if isinstance(node, Conv):
        right = to_text(node.right)
        if isinstance(node.right, Conv):
            right = f"({right})"
        return f"{to_text(node.left)} * {right}"
    if isinstance(node, Apply):
        inner = to_text(node.arg)
        return f"{node.op}({inner})" if node.index is None else f"{node.op}({inner}, {node.index})"
    raise ExprError(f"not an expression: {node!r}")


__all__ = ["ExprError", "parse", "evaluate", "to_text", "Unit", "Simple", "OneDim", "DetMod",
           "GenDetMod", "Conv", "Apply", "ModuleExpr"]
