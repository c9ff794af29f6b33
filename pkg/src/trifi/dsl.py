"""One-variable functional identities such as ``Psi(X^3) = g*X^2*Omega(X)``.

Grammar::

    identity := expr ("=" expr)+
    expr     := term (("+" | "-") term)*
    term     := [rational] ("*" factor)* | factor ("*" factor)*
    factor   := power | mapapp | symbol
    power    := "X" ["^" integer]
    mapapp   := ident "(" power ")"
    symbol   := ident | "1"
    rational := integer ["/" integer]

Multiplication is explicit and non-commutative.  A leading "-" on the first
term is accepted as a convenience.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

UNIT = "1"


class IdentitySyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(message + where)


class IdentityError(ValueError):
    """A well-formed identity that violates a structural requirement."""


@dataclass(frozen=True)
class Power:
    k: int

    @property
    def degree(self) -> int:
        return self.k


@dataclass(frozen=True)
class MapApp:
    name: str
    k: int

    @property
    def degree(self) -> int:
        return self.k


@dataclass(frozen=True)
class Central:
    name: str

    @property
    def degree(self) -> int:
        return 0


Factor = Power | MapApp | Central


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple[Factor, ...]

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    @property
    def map_apps(self) -> list[MapApp]:
        return [f for f in self.factors if isinstance(f, MapApp)]


@dataclass(frozen=True)
class Expression:
    terms: tuple[Term, ...]

    def __neg__(self) -> "Expression":
        return Expression(tuple(Term(-t.coeff, t.factors) for t in self.terms))

    def __sub__(self, other: "Expression") -> "Expression":
        return Expression(self.terms + (-other).terms)


@dataclass(frozen=True)
class IdentityAst:
    sides: tuple[Expression, ...]

    @property
    def degree(self) -> int:
        return self.sides[0].terms[0].degree

    def map_symbols(self) -> list[str]:
        """Map symbols in order of first appearance."""
        seen: dict[str, None] = {}
        for side in self.sides:
            for t in side.terms:
                for f in t.map_apps:
                    seen.setdefault(f.name, None)
        return list(seen)

    def central_symbols(self) -> list[str]:
        seen: dict[str, None] = {}
        for side in self.sides:
            for t in side.terms:
                for f in t.factors:
                    if isinstance(f, Central) and f.name != UNIT:
                        seen.setdefault(f.name, None)
        return list(seen)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "=+-*/^()":
                raise IdentitySyntaxError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tok
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise IdentitySyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def identity(self) -> IdentityAst:
        sides = [self.expr()]
        while self.tok[0] == "=":
            self.take()
            sides.append(self.expr())
        end = self.take("end")
        if len(sides) < 2:
            raise IdentitySyntaxError("an identity needs at least one '='", end[2])
        return IdentityAst(tuple(sides))

    def expr(self) -> Expression:
        sign = 1
        if self.tok[0] == "-":
            self.take()
            sign = -1
        terms = [self.term(sign)]
        while self.tok[0] in "+-" and self.tok[0] != "end":
            sign = 1 if self.take()[0] == "+" else -1
            terms.append(self.term(sign))
        return Expression(tuple(terms))

    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        factors: list[Factor] = []
        if self.tok[0] == "int" and not (self.tok[1] == UNIT and self._unit_is_factor()):
            coeff *= self.rational()
        else:
            factors.append(self.factor())
        while self.tok[0] == "*":
            self.take()
            factors.append(self.factor())
        return Term(coeff, tuple(factors))

    def _unit_is_factor(self) -> bool:
        # "1" alone (not followed by "/" or "*") is the unit; "1*..." or "1/2" is a coefficient
        nxt = self.tokens[self.i + 1][0]
        return nxt not in ("/", "*")

    def rational(self) -> Fraction:
        num = int(self.take("int")[1])
        if self.tok[0] == "/":
            self.take()
            tok = self.take("int")
            den = int(tok[1])
            if den == 0:
                raise IdentitySyntaxError("zero denominator", tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def power(self) -> Power:
        tok = self.tok
        if tok[:2] != ("ident", "X"):
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise IdentitySyntaxError(f"expected 'X', found {found}", tok[2])
        self.take()
        k = 1
        if self.tok[0] == "^":
            self.take()
            tok = self.take("int")
            k = int(tok[1])
            if k < 1:
                raise IdentitySyntaxError("exponent must be at least 1", tok[2])
        return Power(k)

    def factor(self) -> Factor:
        kind, value, pos = self.tok
        if kind == "ident" and value == "X":
            return self.power()
        if kind == "ident":
            self.take()
            if self.tok[0] != "(":
                return Central(value)
            self.take("(")
            inner = self.tok
            if inner[0] == "ident" and inner[1] != "X" and self.tokens[self.i + 1][0] == "(":
                raise IdentitySyntaxError(
                    f"nested map application {value}({inner[1]}(...)) is not linear in the unknown maps", inner[2]
                )
            arg = self.power()
            if self.tok[0] != ")":
                raise IdentitySyntaxError("map arguments must be a single power of X", self.tok[2])
            self.take(")")
            return MapApp(value, arg.k)
        if kind == "int" and value == UNIT:
            self.take()
            return Central(UNIT)
        found = "end of input" if kind == "end" else repr(value)
        raise IdentitySyntaxError(f"expected a factor, found {found}", pos)


def _check_structure(ast: IdentityAst):
    degrees = set()
    for s, side in enumerate(ast.sides):
        for t in side.terms:
            apps = t.map_apps
            if len(apps) > 1:
                raise IdentityError(f"term on side {s + 1} applies {len(apps)} maps; identities must be linear in the maps")
            degrees.add(t.degree)
    if len(degrees) > 1:
        raise IdentityError(f"sides are not homogeneous of one degree in X (degrees {sorted(degrees)})")


def parse_identity(text: str, maps: Iterable[str] | None = None, central: Iterable[str] | None = None) -> IdentityAst:
    """Parse ``text``; if symbol tables are given, unknown symbols are errors."""
    ast = _Parser(text).identity()
    _check_structure(ast)
    if maps is not None or central is not None:
        _check_symbols(ast, set(maps or ()), set(central or ()))
    return ast


def _check_symbols(ast: IdentityAst, maps: set[str], central: set[str]):
    for name in ast.map_symbols():
        if name not in maps:
            raise IdentityError(f"unknown map symbol {name!r}")
    for name in ast.central_symbols():
        if name not in central:
            raise IdentityError(f"unknown central symbol {name!r}")


@dataclass(frozen=True)
class NormalizedIdentity:
    ast: IdentityAst
    degree: int
    maps: tuple[str, ...]
    central: tuple[str, ...]
    differences: tuple[Expression, ...]


def validate_identity(
    ast: IdentityAst, maps: Iterable[str] | None = None, central: Iterable[str] | None = None
) -> NormalizedIdentity:
    _check_structure(ast)
    if maps is not None or central is not None:
        _check_symbols(ast, set(maps or ()), set(central or ()))
    n = ast.degree
    if n < 2:
        raise IdentityError(f"n must exceed 1 (identity has degree {n})")
    for side in ast.sides:
        for t in side.terms:
            if not t.map_apps and t.coeff != 0:
                raise IdentityError(f"term {format_term(t)!r} contains no map application")
    diffs = tuple(a - b for a, b in zip(ast.sides, ast.sides[1:]))
    return NormalizedIdentity(ast, n, tuple(ast.map_symbols()), tuple(ast.central_symbols()), diffs)


# -- printing -------------------------------------------------------------------


def _format_power(k: int) -> str:
    return "X" if k == 1 else f"X^{k}"


def format_factor(f: Factor) -> str:
    if isinstance(f, Power):
        return _format_power(f.k)
    if isinstance(f, MapApp):
        return f"{f.name}({_format_power(f.k)})"
    return f.name


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_term(t: Term, signed: bool = False) -> str:
    c = abs(t.coeff) if signed else t.coeff
    body = "*".join(format_factor(f) for f in t.factors)
    if not body:
        return _format_coeff(c)
    if t.factors[0] == Central(UNIT):
        # a leading "1*" would be read back as the coefficient
        return f"{_format_coeff(c)}*{body}"
    if c == 1:
        return body
    if c == -1 and not signed:
        return "-" + body
    return f"{_format_coeff(c)}*{body}"


def format_expression(e: Expression) -> str:
    out = []
    for i, t in enumerate(e.terms):
        if i == 0:
            out.append(format_term(t))
        else:
            out.append(("- " if t.coeff < 0 else "+ ") + format_term(t, signed=True))
    return " ".join(out)


def format_identity(ast: IdentityAst) -> str:
    return " = ".join(format_expression(s) for s in ast.sides)


# -- the identities studied here ---------------------------------------------------


def _xp(k: int) -> str:
    return _format_power(k)


def standard_identity(shape: str, n: int, gamma: str = "g") -> str:
    """Text of a standard identity of degree ``n``.

    ``centralizer_chain``:  Psi(X^n) = g X^{n-1} Omega(X) = g Omega(X) X^{n-1}
    ``inner_chain``:        Psi(X^n) = g X Omega(X^{n-1}) = g Omega(X^{n-1}) X
    ``generalized``:        2 Psi(X^n) = X^{n-1} Omega(X) + Omega(X) X^{n-1}
    ``generalized_single``: 2 Psi(X^n) = X^{n-1} Psi(X) + Psi(X) X^{n-1}
    ``jordan``:             T(X^2) = T(X) X = X T(X)   (n ignored)
    """
    if n < 2 and shape != "jordan":
        raise ValueError("n must exceed 1")
    g = f"{gamma}*" if gamma else ""
    if shape == "centralizer_chain":
        return f"Psi({_xp(n)}) = {g}{_xp(n - 1)}*Omega(X) = {g}Omega(X)*{_xp(n - 1)}"
    if shape == "inner_chain":
        return f"Psi({_xp(n)}) = {g}X*Omega({_xp(n - 1)}) = {g}Omega({_xp(n - 1)})*X"
    if shape == "generalized":
        return f"2*Psi({_xp(n)}) = {_xp(n - 1)}*Omega(X) + Omega(X)*{_xp(n - 1)}"
    if shape == "generalized_single":
        return f"2*Psi({_xp(n)}) = {_xp(n - 1)}*Psi(X) + Psi(X)*{_xp(n - 1)}"
    if shape == "jordan":
        return "T(X^2) = T(X)*X = X*T(X)"
    raise ValueError(f"unknown identity shape {shape!r}")


SHAPES = ("centralizer_chain", "inner_chain", "generalized", "generalized_single", "jordan")
