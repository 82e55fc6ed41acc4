"""Reading polynomial systems from text.

File format::

    # comment
    vars: x, y, z
    order: degrevlex
    x*y - 1/2*z^2
    (x + y)^2 - z

or on one line: ``ring: x, y; order: deglex; polys: x*y - x, x^2 - y``.
A ``homogenize: h`` line appends ``h`` as the smallest variable and
homogenizes every polynomial.  ``# meta: key=value ...`` comments carry
expected values for the benchmark runner.
Variables are listed greatest first.  Blank lines and ``#`` comments are
ignored; ``order`` defaults to degrevlex.  Polynomials are separated by
newlines, commas or semicolons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import QQ, OrderSpec, Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass
class PolySystem:
    order: OrderSpec
    polys: List[Polynomial]
    name: str = ""
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.order.names


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()/]))")


class _Parser:
    def __init__(self, text: str, order: OrderSpec, line: int, col0: int):
        self.order = order
        self.index = {name: i for i, name in enumerate(order.names)}
        self.line = line
        self.col0 = col0
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            val = m.group(m.lastindex)
            self.toks.append((kind, val, col0 + m.start(m.lastindex) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.col0 + 1)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        col = self.peek()[2] if self.i < len(self.toks) else (self.toks[-1][2] + len(self.toks[-1][1]) if self.toks else self.col0 + 1)
        raise ParseError(msg, self.line, col)

    def parse(self) -> Polynomial:
        if not self.toks:
            self.error("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.power()
            elif kind == "op" and val == "/":
                self.take()
                k, v, _ = self.peek()
                if k != "num":
                    self.error("division only by rational constants")
                self.take()
                d = QQ(v)
                if d == 0:
                    self.error("division by zero")
                p = p * Polynomial.constant(self.order, 1 / d)
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                p = p * self.power()
            else:
                return p

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            k, v, _ = self.peek()
            if k != "num" or "/" in v:
                self.error("exponent must be a non-negative integer")
            self.take()
            return base ** int(v)
        return base

    def atom(self):
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.order, QQ(val))
        if kind == "name":
            if val not in self.index:
                self.error(f"unknown variable {val!r}")
            self.take()
            return Polynomial.variable(self.order, self.index[val])
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            if self.peek()[1] != ")":
                self.error("missing ')'")
            self.take()
            return p
        self.error("expected a number, a variable or '('" if kind else "unexpected end of polynomial")


def parse_polynomial(text: str, order: OrderSpec, line: int = 1, col: int = 0) -> Polynomial:
    return _Parser(text, order, line, col).parse()


def parse_polynomials(items: Sequence[str], order: OrderSpec) -> List[Polynomial]:
    return [parse_polynomial(s, order) for s in items]


def ring(names: Sequence[str], kind: str = "degrevlex") -> OrderSpec:
    return OrderSpec(len(names), kind, tuple(names))


_HEADER = re.compile(r"\s*(vars|ring|order|polys|homogenize)\s*:", re.IGNORECASE)


def parse_system(text: str, order_kind: Optional[str] = None, name: str = "") -> PolySystem:
    """Parse a system file; ``order_kind`` overrides the file's ``order`` line."""
    names = None
    kind = "degrevlex"
    homog = None
    meta: Dict[str, str] = {}
    bodies: List[Tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        if comment.strip().startswith("meta:"):
            for item in comment.strip()[5:].split():
                k, _, v = item.partition("=")
                meta[k] = v
        for seg in re.finditer(r"[^;]+", line):
            segment, off = seg.group(), seg.start()
            m = _HEADER.match(segment)
            if m:
                key = m.group(1).lower()
                rest, roff = segment[m.end():], off + m.end()
                if key in ("vars", "ring"):
                    names = []
                    for v in re.finditer(r"[^,\s]+", rest):
                        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v.group()):
                            raise ParseError(f"invalid variable name {v.group()!r}", lineno, roff + v.start() + 1)
                        names.append(v.group())
                    if not names:
                        raise ParseError("no variables declared", lineno, roff + 1)
                    if len(set(names)) != len(names):
                        raise ParseError("duplicated variable name", lineno, roff + 1)
                    continue
                if key == "order":
                    kind = rest.strip()
                    continue
                if key == "homogenize":
                    homog = rest.strip() or "h"
                    continue
                segment, off = rest, roff
            for item in re.finditer(r"[^,]+", segment):
                if item.group().strip():
                    bodies.append((item.group(), lineno, off + item.start()))
    if names is None:
        raise ParseError("missing variable declaration", 1, 1)
    if not bodies:
        raise ParseError("no polynomials listed", 1, 1)
    try:
        order = ring(names, order_kind or kind)
    except ValueError as e:
        raise ParseError(str(e), 1, 1) from None
    polys = []
    for b, ln, col in bodies:
        p = parse_polynomial(b, order, ln, col)
        if not p:
            raise ParseError("zero polynomial listed", ln, col + len(b) - len(b.lstrip()) + 1)
        polys.append(p)
    if homog is not None:
        if homog in names:
            raise ParseError(f"homogenizing variable {homog!r} is already declared", 1, 1)
        order = ring(list(names) + [homog], order.kind)
        polys = [Polynomial(order, [(a, m + (p.degree() - sum(m),)) for a, m in p.terms]) for p in polys]
    return PolySystem(order, polys, name, meta)


def read_system(path, order_kind: Optional[str] = None) -> PolySystem:
    from pathlib import Path

    path = Path(path)
    return parse_system(path.read_text(encoding="utf-8"), order_kind, path.stem)


def format_system(system: PolySystem) -> str:
    lines = [f"ring: {', '.join(system.names)}", f"order: {system.order.kind}"]
    lines += [str(p) for p in system.polys]
    return "\n".join(lines) + "\n"
