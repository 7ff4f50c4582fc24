"""Recursive-descent parser for the expression grammar.

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := base ("^" signed-integer)?
    base   := rational | identifier | "(" expr ")"
            | "exp" "(" expr ")" | "sqrt" "(" expr ")"

Rationals are integer literals or integer/integer.  Identifiers cover the
reserved atoms (t, x, y, r, R, S, V, W, omega), jet variables such as ``u``,
``u_tx`` or ``z_rr`` (subscript letters in canonical order: t, x, y, r), and
any names passed in ``constants``.  ``sqrt`` accepts exactly one radicand,
``R^2 - 4*S``, and yields the surd atom omega; anything else is rejected so
that the single-surd canonical form stays sound.

``parse(to_text(e)) == e`` for every canonical expression, and parsing
arbitrary grammar-conformant text canonicalises it.
"""

from __future__ import annotations

from fractions import Fraction

from . import expr as ex
from .expr import Expr, ExprError

__all__ = ["parse", "render", "ParseError"]


class ParseError(ExprError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_OMEGA_RADICAND = ex.R ** 2 - 4 * ex.S
_PUNCT = "+-*^()/"


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, constants: frozenset[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.constants = constants

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok)
        return self.advance()

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    # grammar ---------------------------------------------------------------

    def parse_expr(self) -> Expr:
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.advance().kind == "-" else 1
        value = self.parse_term() * sign
        while self.peek().kind in "+-":
            op = self.advance().kind
            term = self.parse_term()
            value = value + term if op == "+" else value - term
        return value

    def parse_term(self) -> Expr:
        value = self.parse_factor()
        while self.peek().kind == "*":
            self.advance()
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> Expr:
        base = self.parse_base()
        if self.peek().kind == "^":
            caret = self.advance()
            sign = 1
            if self.peek().kind == "-":
                self.advance()
                sign = -1
            tok = self.expect("int")
            try:
                return base ** (sign * int(tok.text))
            except ExprError as err:
                raise ParseError(str(err), caret.line, caret.col) from err
        return base

    def parse_base(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            num = int(tok.text)
            if self.peek().kind == "/":
                self.advance()
                den_tok = self.expect("int")
                den = int(den_tok.text)
                if den == 0:
                    self.fail("zero denominator in rational literal", den_tok)
                return ex.rational(num, den)
            return ex.rational(num)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            if tok.text in ("exp", "sqrt") and self.peek().kind == "(":
                self.advance()
                inner = self.parse_expr()
                self.expect(")")
                if tok.text == "exp":
                    return ex.exp_of(inner)
                if inner != _OMEGA_RADICAND:
                    self.fail("sqrt supports only the radicand R^2 - 4*S "
                              "(the surd omega)", tok)
                return ex.OMEGA
            return self.resolve(tok)
        self.fail(f"expected an expression, found {tok.text or 'end of input'!r}",
                  tok)

    def resolve(self, tok: _Token) -> Expr:
        name = tok.text
        if name in ("R", "S", "V", "W", "omega", "t", "x", "y", "r"):
            return ex.sym(name)
        if name in ex.DEPENDENT_NAMES:
            return ex.jet(name)
        if "_" in name:
            dep, _, suffix = name.partition("_")
            if dep in ex.DEPENDENT_NAMES:
                try:
                    return ex.jet(dep, tuple(suffix))
                except ExprError as err:
                    self.fail(str(err), tok)
        if name in self.constants:
            return ex.sym(name)
        self.fail(
            f"unknown identifier {name!r}; reserved names are "
            + ", ".join(ex.RESERVED_NAMES), tok)


def parse(text: str, constants: frozenset[str] | set[str] = frozenset()) -> Expr:
    """Parse grammar text into a canonical expression."""
    parser = _Parser(text, frozenset(constants))
    value = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        parser.fail(f"unexpected trailing input {tok.text!r}", tok)
    return value


def render(e: Expr) -> str:
    """Canonical text form; inverse of :func:`parse` on canonical forms."""
    return ex.to_text(e)
