"""Expression parser for algebra elements and scalar literals.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' int)?
    atom   := integer | symbol | '(' expr ')'
    int    := ('+' | '-')? digits | '(' ('+' | '-')? digits ')'

Symbols resolve to generators, named elements, ``q`` or declared parameters
of the target algebra.  Division is allowed only by scalars and units.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .pbw import AlgebraSpec, Element, PBWError
from .scalar import ScalarFraction


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Tok:
    kind: str  # num, sym, op, end
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(Tok("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Tok("sym", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            toks.append(Tok("op", ch, line, col))
            i, col = i + 1, col + 1
            continue
        if ch in "·⋅":
            toks.append(Tok("op", "*", line, col))
            i, col = i + 1, col + 1
            continue
        if ch == "−":
            toks.append(Tok("op", "-", line, col))
            i, col = i + 1, col + 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Tok("end", "", line, col))
    return toks


# AST -----------------------------------------------------------------------

@dataclass
class Num:
    value: int
    line: int = 1
    col: int = 1


@dataclass
class Sym:
    name: str
    line: int = 1
    col: int = 1


@dataclass
class Pow:
    base: "Node"
    exp: int
    line: int = 1
    col: int = 1


@dataclass
class Neg:
    arg: "Node"


@dataclass
class Sum:
    items: list  # list of (sign, Node)


@dataclass
class Product:
    factors: list  # list of (op, Node) with op in {'*', '/'}


Node = Union[Num, Sym, Pow, Neg, Sum, Product]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self) -> Tok:
        return self.toks[self.pos]

    def take(self) -> Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.peek()
        if t.kind != "op" or t.text != text:
            if text == ")":
                raise ParseError("unbalanced parentheses: expected ')'", t.line, t.col)
            raise ParseError(f"expected {text!r}", t.line, t.col)
        return self.take()

    def parse(self) -> Node:
        if self.peek().kind == "end":
            raise ParseError("empty expression", 1, 1)
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            if t.text == ")":
                raise ParseError("unbalanced parentheses: unexpected ')'", t.line, t.col)
            raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)
        return node

    def expr(self) -> Node:
        items = [("+", self.term())]
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            items.append((op, self.term()))
        return items[0][1] if len(items) == 1 else Sum(items)

    def term(self) -> Node:
        factors = [("*", self.unary())]
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            factors.append((op, self.unary()))
        return factors[0][1] if len(factors) == 1 else Product(factors)

    def unary(self) -> Node:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            return Neg(self.unary())
        if t.kind == "op" and t.text == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self) -> Node:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            exp = self.integer()
            return Pow(base, exp, t.line, t.col)
        return base

    def integer(self) -> int:
        t = self.peek()
        paren = t.kind == "op" and t.text == "("
        if paren:
            self.take()
            t = self.peek()
        sign = 1
        if t.kind == "op" and t.text in "+-":
            sign = -1 if t.text == "-" else 1
            self.take()
            t = self.peek()
        if t.kind != "num":
            raise ParseError("exponent must be an integer literal", t.line, t.col)
        self.take()
        if paren:
            self.expect(")")
        return sign * int(t.text)

    def atom(self) -> Node:
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Num(int(t.text), t.line, t.col)
        if t.kind == "sym":
            self.take()
            return Sym(t.text, t.line, t.col)
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.line, t.col)
        if t.text == ")":
            raise ParseError("unbalanced parentheses: unexpected ')'", t.line, t.col)
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)


def _symbols(node: Node):
    if isinstance(node, Sym):
        yield node
    elif isinstance(node, Pow):
        yield from _symbols(node.base)
    elif isinstance(node, Neg):
        yield from _symbols(node.arg)
    elif isinstance(node, Sum):
        for _, n in node.items:
            yield from _symbols(n)
    elif isinstance(node, Product):
        for _, n in node.factors:
            yield from _symbols(n)


def parse(text: str, spec: AlgebraSpec | None = None) -> Node:
    """Parse text; with an algebra, every symbol must resolve in it."""
    node = _Parser(text).parse()
    if spec is not None:
        for s in _symbols(node):
            if not (s.name in spec.index or s.name in spec.named or s.name in spec.param_ring):
                raise ParseError(f"unknown symbol {s.name!r} for algebra {spec.name}", s.line, s.col)
    return node


Value = Union[ScalarFraction, Element]


def _as_element(v: Value, spec: AlgebraSpec) -> Element:
    return v if isinstance(v, Element) else Element.scalar(spec, v)


def evaluate(node: Node, spec: AlgebraSpec | None = None) -> Value:
    """Evaluate an AST to a scalar (no algebra) or an Element of ``spec``."""
    if isinstance(node, Num):
        return ScalarFraction.from_int(node.value)
    if isinstance(node, Sym):
        if spec is not None:
            if node.name in spec.index:
                return Element.gen(spec, node.name)
            if node.name in spec.named:
                return spec.named[node.name]
            if node.name in spec.param_ring:
                return ScalarFraction.var(node.name)
            raise ParseError(f"unknown symbol {node.name!r} for algebra {spec.name}", node.line, node.col)
        return ScalarFraction.var(node.name)
    if isinstance(node, Pow):
        base = evaluate(node.base, spec)
        try:
            return base ** node.exp
        except (ZeroDivisionError, PBWError) as exc:
            raise ParseError(f"cannot raise to power {node.exp}: {exc}", node.line, node.col) from exc
    if isinstance(node, Neg):
        return -evaluate(node.arg, spec)
    if isinstance(node, Sum):
        acc = None
        for sign, n in node.items:
            v = evaluate(n, spec)
            if sign == "-":
                v = -v
            acc = v if acc is None else _add(acc, v, spec)
        return acc
    if isinstance(node, Product):
        acc = evaluate(node.factors[0][1], spec)
        for op, n in node.factors[1:]:
            v = evaluate(n, spec)
            if op == "*":
                acc = _mul(acc, v, spec)
            else:
                acc = _div(acc, v, spec)
        return acc
    raise TypeError(f"unknown node {node!r}")


def _add(x: Value, y: Value, spec) -> Value:
    if isinstance(x, ScalarFraction) and isinstance(y, ScalarFraction):
        return x + y
    return _as_element(x, spec) + _as_element(y, spec)


def _mul(x: Value, y: Value, spec) -> Value:
    if isinstance(x, ScalarFraction) and isinstance(y, ScalarFraction):
        return x * y
    if isinstance(x, ScalarFraction):
        return y * x
    if isinstance(y, ScalarFraction):
        return x * y
    return x * y


def _div(x: Value, y: Value, spec) -> Value:
    if isinstance(y, Element):
        if y.is_scalar():
            y = y.scalar_value()
        else:
            try:
                return _as_element(x, spec) * y.inverse()
            except PBWError as exc:
                raise ParseError(f"cannot divide by {y.render()}") from exc
    try:
        inv = y.inverse()
    except ZeroDivisionError as exc:
        raise ParseError("division by zero") from exc
    return x * inv


def parse_element(text: str, spec: AlgebraSpec) -> Element:
    return _as_element(evaluate(parse(text, spec), spec), spec)


def parse_scalar(text: str) -> ScalarFraction:
    v = evaluate(parse(text))
    return v
