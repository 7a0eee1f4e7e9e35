"""
Expression Parser

Recursive-descent reader for the expression grammar:

    expr   := ['-'] term (('+' | '-') term)*
    term   := [coef '*'] factor (['^'] factor)*  |  coef
    coef   := RATIONAL ['i'] | '(' [RATIONAL] [('+'|'-') [RATIONAL] 'i'] ')'
    factor := SYM | 'G' DIGIT | '(' expr ')'
            | 'd(' expr ')' | 'd[' SYM '](' expr ')' | 'i[' SYM '](' expr ')'
            | 'L[' SYM ',' SYM '](' expr ')' | 'delta(' expr ')'
            | 'bar(' expr ')' | 'br(' expr ',' expr ')' | '<e,' expr '>'

Juxtaposition (whitespace) is accepted as '^'. Curvatures are symbols
of the form F[conn].
"""

import re
from typing import List, Optional, Tuple

from src.services.base_service import InputError, ParseError
from src.services.scalars import GaussRational, frac, gq
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import (
    Angle,
    Apply,
    Atom,
    Bar,
    Bracket,
    Expression,
    Gamma,
    Paren,
    Sym,
    Term,
)
from src.services.symbolic.registry import FieldRegistry

_RATIONAL = r"\d+(?:/\d+)?"
_REAL_COEF = re.compile(rf"({_RATIONAL})(i?)")
_PAREN_COEF = re.compile(rf"\(\s*(-?{_RATIONAL})?\s*(?:([+-])\s*({_RATIONAL})?\s*i)?\s*\)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_GAMMA = re.compile(r"G(\d)(?![A-Za-z0-9_\[])")


def _rational(text: Optional[str]) -> GaussRational:
    if not text:
        return frac(1)
    if "/" in text:
        num, den = text.split("/")
        return frac(int(num), int(den))
    return frac(int(text))


class _Parser:
    def __init__(self, text: str, registry: FieldRegistry):
        self.text = text
        self.pos = 0
        self.registry = registry

    # -- helpers --------------------------------------------------------
    def error(self, message: str, offset: Optional[int] = None) -> ParseError:
        return ParseError(message, self.pos if offset is None else offset)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str) -> None:
        self.skip()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected '{token}'")
        self.pos += len(token)

    def at_factor(self) -> bool:
        ch = self.peek()
        return bool(ch) and (ch.isalpha() or ch in "_(<")

    # -- grammar --------------------------------------------------------
    def parse_expr(self) -> Expression:
        terms: List[Term] = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        terms.append(self.parse_term().scaled(sign))
        while self.peek() and self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            terms.append(self.parse_term().scaled(sign))
        return Expression(tuple(terms))

    def parse_coefficient(self) -> Tuple[Optional[GaussRational], bool]:
        """(coefficient, followed-by-'*')"""
        self.skip()
        start = self.pos
        match = _REAL_COEF.match(self.text, self.pos)
        if match:
            value = _rational(match.group(1))
            if match.group(2):
                value = gq(0) + value * gq(0, 1)
            self.pos = match.end()
            if self.peek() == "*":
                self.pos += 1
                return value, True
            return value, False
        match = _PAREN_COEF.match(self.text, self.pos)
        if match and (match.group(1) or match.group(2)):
            real = _rational(match.group(1)) if match.group(1) else gq(0)
            imag = gq(0)
            if match.group(2):
                imag = _rational(match.group(3)) * (-1 if match.group(2) == "-" else 1)
            self.pos = match.end()
            if self.peek() != "*":
                raise self.error("expected '*' after a complex coefficient")
            self.pos += 1
            return real + imag * gq(0, 1), True
        self.pos = start
        return None, False

    def parse_term(self) -> Term:
        coefficient, starred = self.parse_coefficient()
        if coefficient is not None and not starred:
            return Term(coefficient, ())
        atoms: List[Atom] = [self.parse_factor()]
        while True:
            if self.peek() == "^":
                self.pos += 1
                atoms.append(self.parse_factor())
            elif self.at_factor():
                atoms.append(self.parse_factor())
            else:
                break
        return Term(coefficient if coefficient is not None else frac(1), tuple(atoms))

    def parse_symbol_name(self) -> str:
        self.skip()
        start = self.pos
        match = _IDENT.match(self.text, self.pos)
        if not match:
            raise self.error("expected a symbol")
        name = match.group(0)
        self.pos = match.end()
        if name == "F" and self.pos < len(self.text) and self.text[self.pos] == "[":
            close = self.text.find("]", self.pos)
            if close < 0:
                raise self.error("unterminated curvature symbol")
            name = f"F[{self.text[self.pos + 1:close].strip()}]"
            self.pos = close + 1
        if name not in self.registry:
            raise self.error(f"unknown symbol '{name}'", start)
        return name

    def parse_group(self) -> Expression:
        self.expect("(")
        inner = self.parse_expr()
        self.expect(")")
        return inner

    def parse_factor(self) -> Atom:
        self.skip()
        rest = self.text[self.pos:]
        if not rest:
            raise self.error("expected a factor")
        gamma = _GAMMA.match(self.text, self.pos)
        if gamma:
            self.pos = gamma.end()
            return Gamma(int(gamma.group(1)))
        if rest.startswith("<"):
            self.pos += 1
            self.expect("e")
            self.expect(",")
            inner = self.parse_expr()
            self.expect(">")
            return Angle(inner)
        if rest.startswith("("):
            return Paren(self.parse_group())
        for keyword in ("delta(", "bar(", "br(", "d("):
            if rest.startswith(keyword):
                self.pos += len(keyword) - 1
                if keyword == "br(":
                    self.expect("(")
                    left = self.parse_expr()
                    self.expect(",")
                    right = self.parse_expr()
                    self.expect(")")
                    return Bracket(left, right)
                inner = self.parse_group()
                if keyword == "bar(":
                    return Bar(inner)
                return Apply(("delta",) if keyword == "delta(" else ("d", None), inner)
        if rest.startswith("d[") or rest.startswith("i["):
            kind = rest[0]
            self.pos += 2
            name = self.parse_symbol_name()
            self.expect("]")
            return Apply((kind, name), self.parse_group())
        if rest.startswith("L["):
            self.pos += 2
            vector = self.parse_symbol_name()
            self.expect(",")
            connection = self.parse_symbol_name()
            self.expect("]")
            return Apply(("L", vector, connection), self.parse_group())
        return Sym(self.parse_symbol_name())


def parse(text: str, registry: FieldRegistry, raw: bool = False) -> Expression:
    """
    Parse expression text against a registry.

    Args:
        raw: skip normalization

    Raises:
        ParseError: on a syntax error or an unknown symbol (offset attached)
    """
    parser = _Parser(text, registry)
    if not text.strip():
        raise parser.error("empty expression", 0)
    try:
        expr = parser.parse_expr()
    except InputError as error:
        raise ParseError(str(error), parser.pos) from error
    if parser.peek():
        raise parser.error(f"unexpected '{parser.peek()}'")
    return expr if raw else normalize(expr, registry)
