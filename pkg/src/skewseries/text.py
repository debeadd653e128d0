"""Element text grammar: parsing and canonical printing.

Terms look like ``c * x1^a1 * ... * xn^an`` with an integer coefficient,
optionally written as a digit ``T(c)``. Inside one term the variable
indices must not decrease, so every accepted term already is a standard
monomial. :func:`parse_expression` accepts a larger language (parentheses,
arbitrary factor order, powers of sub-expressions) and evaluates products
with the ring multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>x(?P<idx>\d+))|(?P<T>T)|(?P<op>[-+*^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1, hint: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.hint = hint
        text = f"line {line}, column {col}: {message}"
        if hint:
            text += f" (hint: {hint})"
        super().__init__(text)


@dataclass(frozen=True)
class Digit:
    """A coefficient written ``T(c)``: the multiplicative lift of residue c."""

    residue: int


@dataclass
class _Tok:
    kind: str
    value: object
    col: int


def _tokenize(text: str, line: int, col0: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", line, col0 + pos + stripped)
        col = col0 + m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("int") is not None:
            toks.append(_Tok("int", int(m.group("int")), col))
        elif m.group("var") is not None:
            toks.append(_Tok("var", int(m.group("idx")), col))
        elif m.group("T") is not None:
            toks.append(_Tok("T", None, col))
        else:
            toks.append(_Tok(m.group("op"), None, col))
        pos = m.end()
    toks.append(_Tok("end", None, col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int, line: int = 1, col0: int = 1):
        self.n = n
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        t = self.toks[self.i]
        if kind is not None and t.kind != kind:
            want = {"int": "an integer", "end": "end of input"}.get(kind, repr(kind))
            raise ParseError(f"expected {want}, found {self._describe(t)}", self.line, t.col)
        self.i += 1
        return t

    @staticmethod
    def _describe(t: _Tok) -> str:
        if t.kind == "end":
            return "end of input"
        if t.kind == "int":
            return f"integer {t.value}"
        if t.kind == "var":
            return f"variable x{t.value}"
        return repr(t.kind if t.kind != "T" else "T")

    def error(self, message: str, tok: _Tok | None = None, hint: str | None = None):
        tok = tok or self.peek()
        raise ParseError(message, self.line, tok.col, hint)

    def var_index(self, tok: _Tok) -> int:
        if not 1 <= tok.value <= self.n:
            self.error(f"variable x{tok.value} out of range x1..x{self.n}", tok)
        return tok.value

    def digit(self) -> Digit:
        self.take("T")
        self.take("(")
        v = self.take("int").value
        self.take(")")
        return Digit(v)

    # -- flat grammar: sums of standard terms -------------------------------------

    def terms(self) -> list[tuple[object, tuple[int, ...]]]:
        out = []
        sign = 1
        t = self.peek()
        if t.kind in ("+", "-"):
            self.take()
            sign = -1 if t.kind == "-" else 1
        while True:
            out.append(self.term(sign))
            t = self.peek()
            if t.kind == "end":
                break
            if t.kind not in ("+", "-"):
                hint = "use the mul command or parentheses for general products" if t.kind == "(" else None
                self.error(f"expected '+', '-' or end of input, found {self._describe(t)}", t, hint)
            self.take()
            sign = -1 if t.kind == "-" else 1
        return out

    def term(self, sign: int):
        coeff: object = sign
        exp = [0] * self.n
        last = 0
        first = True
        while True:
            t = self.peek()
            if t.kind == "int":
                self.take()
                coeff = _coeff_mul(coeff, t.value)
            elif t.kind == "T":
                coeff = _coeff_mul(coeff, self.digit())
            elif t.kind == "var":
                self.take()
                idx = self.var_index(t)
                if idx < last:
                    self.error(f"variable x{idx} after x{last}: indices must not decrease inside a term", t,
                               "reorder the term or compute the product with mul")
                last = idx
                power = 1
                if self.peek().kind == "^":
                    self.take()
                    power = self.take("int").value
                exp[idx - 1] += power
            else:
                if first:
                    self.error(f"expected a term, found {self._describe(t)}", t)
                self.error(f"expected a factor after '*', found {self._describe(t)}", t)
            first = False
            if self.peek().kind == "*":
                self.take()
                continue
            if self.peek().kind in ("^",):
                self.error("exponent must follow a variable", self.peek())
            return coeff, tuple(exp)

    # -- full expression grammar, evaluated in a ring -----------------------------

    def expr(self, ring):
        t = self.peek()
        neg = False
        if t.kind in ("+", "-"):
            self.take()
            neg = t.kind == "-"
        acc = self.product(ring)
        if neg:
            acc = -acc
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.product(ring)
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def product(self, ring):
        acc = self.power(ring)
        while self.peek().kind == "*":
            self.take()
            acc = acc * self.power(ring)
        return acc

    def power(self, ring):
        base = self.atom(ring)
        if self.peek().kind == "^":
            self.take()
            k = self.take("int").value
            acc = ring.one
            for _ in range(k):
                acc = acc * base
            return acc
        return base

    def atom(self, ring):
        t = self.peek()
        if t.kind == "int":
            self.take()
            return ring.from_int(t.value)
        if t.kind == "T":
            d = self.digit()
            return ring.from_raw([(d, (0,) * self.n)])
        if t.kind == "var":
            self.take()
            return ring.var(self.var_index(t))
        if t.kind == "(":
            self.take()
            inner = self.expr(ring)
            self.take(")")
            return inner
        if t.kind == "-":
            self.take()
            return -self.atom(ring)
        self.error(f"expected a factor, found {self._describe(t)}", t)


def _coeff_mul(a, b):
    if isinstance(a, Digit) or isinstance(b, Digit):
        return _DigitProduct.of(a, b)
    return a * b


class _DigitProduct:
    """An integer times a product of digits, kept symbolic until normalised."""

    def __init__(self, integer: int, digits: tuple[int, ...]):
        self.integer = integer
        self.digits = digits

    @classmethod
    def of(cls, a, b) -> _DigitProduct:
        parts = []
        integer = 1
        for x in (a, b):
            if isinstance(x, cls):
                integer *= x.integer
                parts.extend(x.digits)
            elif isinstance(x, Digit):
                parts.append(x.residue)
            else:
                integer *= x
        return cls(integer, tuple(parts))

    def value(self, domain) -> int:
        v = domain.from_int(self.integer)
        for r in self.digits:
            v = domain.mul(v, domain.teichmuller(r))
        return v


def coefficient_value(domain, c) -> int:
    """Turn a parsed coefficient (int, Digit or digit product) into a scalar."""
    if isinstance(c, Digit):
        return domain.teichmuller(c.residue)
    if isinstance(c, _DigitProduct):
        return c.value(domain)
    return domain.from_int(c)


def parse_terms(text: str, n: int, line: int = 1, col0: int = 1):
    """Parse a flat sum of standard terms into ``[(coefficient, exponent)]``."""
    return _Parser(text, n, line, col0).terms()


def parse_element(ring, text: str, line: int = 1, col0: int = 1):
    """Parse ``text`` (flat grammar) into a normalised element of ``ring``."""
    return ring.from_raw(parse_terms(text, ring.n, line, col0))


def parse_expression(ring, text: str, line: int = 1, col0: int = 1):
    """Parse and evaluate an expression with parentheses and general products."""
    p = _Parser(text, ring.n, line, col0)
    value = p.expr(ring)
    p.take("end")
    return value


def format_term(digit_repr: int, exp: tuple[int, ...]) -> str:
    parts = [f"T({digit_repr})"]
    parts.extend(f"x{i + 1}^{a}" for i, a in enumerate(exp) if a)
    return "*".join(parts)


def print_canonical(element) -> str:
    """Canonical text: terms ascending in the active order, digits as T(c)."""
    items = element.sorted_terms()
    if not items:
        return "0"
    dom = element.ring.domain
    return " + ".join(format_term(dom.digit_residue(d), e) for e, d in items)
