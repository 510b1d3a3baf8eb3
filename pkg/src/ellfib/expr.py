"""Parsing and canonical rendering of polynomial / rational-function expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' uint)?
    base   := uint | variable | '(' expr ')'

Juxtaposition is not multiplication: ``t(x-1)`` must be written ``t*(x-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ellfib.algebra.fields import QQ, Poly, RationalFunction, tower


class ExpressionError(ValueError):
    """Base class for expression failures."""


class ParseError(ExpressionError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class UnknownVariableError(ExpressionError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            for i, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = tokenize(text)
        self.i = 0
        self.field = tower(variables)
        self.names = {}
        # variable v_i becomes the generator at tower level i, lifted to the top
        field = QQ
        for v in variables:
            from ellfib.algebra.fields import FracField, PolyRing

            field = FracField(PolyRing(field, v))
            self.names[v] = field.gen
        self.names = {v: self.field(g) for v, g in self.names.items()}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        where = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message} (found {where})", tok.line, tok.column)

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self):
        if self.tok.kind == "end":
            self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            self.error("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op_tok = self.tok
            self.i += 1
            rhs = self.unary()
            if op_tok.text == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ParseError("division by zero", op_tok.line, op_tok.column)
                value = value / rhs
        return value

    def unary(self):
        if self.eat("-"):
            return -self.unary()
        return self.factor()

    def factor(self):
        value = self.base()
        if self.eat("^"):
            tok = self.tok
            if tok.kind == "op" and tok.text == "-":
                raise ParseError("negative exponent", tok.line, tok.column)
            if tok.kind != "int":
                self.error("expected a nonnegative integer exponent")
            self.i += 1
            value = value ** int(tok.text)
        return value

    def base(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return self.field(Fraction(int(tok.text))) if self.field is not QQ else Fraction(int(tok.text))
        if tok.kind == "name":
            if tok.text not in self.names:
                raise UnknownVariableError(
                    f"unknown variable {tok.text!r} at line {tok.line}, column {tok.column}"
                )
            self.i += 1
            return self.names[tok.text]
        if self.eat("("):
            value = self.expr()
            if not self.eat(")"):
                self.error("expected ')'")
            return value
        self.error("expected a number, variable or '('")


def parse_expression(text: str, variables: Sequence[str]):
    """Parse ``text`` in the tower ``QQ(v0)...(vk)`` with ``vk`` as main variable.

    Returns a :class:`Poly` in ``vk`` when the value is polynomial in it, a
    :class:`RationalFunction` otherwise, and a ``Fraction`` if no variables
    are declared.
    """
    if not text or not text.strip():
        raise ParseError("empty expression", 1, 1)
    value = _Parser(text, list(variables)).parse()
    if isinstance(value, RationalFunction) and value.den.is_one():
        return value.num
    return value


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_ATOMIC = re.compile(r"^(\d+|[A-Za-z_]\w*(\^\d+)?)$")


def _sign(c) -> int:
    if isinstance(c, Fraction):
        return (c > 0) - (c < 0)
    if isinstance(c, Poly):
        return _sign(c.lc())
    if isinstance(c, RationalFunction):
        return _sign(c.num)
    raise TypeError(c)


def _nterms(c) -> int:
    if isinstance(c, Fraction):
        return 1 if c else 0
    if isinstance(c, RationalFunction):
        return _nterms(c.num) if c.den.is_one() else 1
    return sum(1 for x in c.coeffs if x)


def _render_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _render_poly(p: Poly) -> str:
    if not p:
        return "0"
    pieces: list[tuple[int, str]] = []
    for k in range(p.degree(), -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = _sign(c)
        mag = -c if sign < 0 else c
        mono = "" if k == 0 else (p.var if k == 1 else f"{p.var}^{k}")
        cs = render_expression(mag)
        if _nterms(mag) > 1:
            cs = f"({cs})"
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        pieces.append((sign, body))
    out = ("-" if pieces[0][0] < 0 else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


def _wrap(s: str) -> str:
    return s if _ATOMIC.match(s) else f"({s})"


def render_expression(value) -> str:
    """Canonical text: descending powers, explicit ``*`` and ``^``."""
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return _render_fraction(value)
    if isinstance(value, Poly):
        return _render_poly(value)
    if isinstance(value, RationalFunction):
        if value.den.is_one():
            return _render_poly(value.num)
        num = value.num
        ns = _render_poly(num)
        single = _nterms(num) == 1
        if not single:
            ns = f"({ns})"
        return f"{ns}/{_wrap(_render_poly(value.den))}"
    raise TypeError(f"cannot render {value!r}")
