"""Sparse multivariate polynomials with exact coefficients.

Terms map dense exponent tuples (one slot per variable x1..xk) to nonzero
integer (or exact rational) coefficients.  Canonical text form sorts
monomials by graded lexicographic order, largest first.  This is the
entry type of parameterized schemes and the scalar type of the linear
solves behind parameter introduction.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["Poly", "parse_poly", "PolyParseError"]


class PolyParseError(ValueError):
    pass


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Poly:
    """Immutable by convention; all operations return new polynomials."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value} if value else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: 1})

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def has_integer_coefficients(self) -> bool:
        return all(
            not isinstance(c, Fraction) or c.denominator == 1
            for c in self.terms.values()
        )

    # -- arithmetic -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return Poly(self.nvars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) - c
        return Poly(self.nvars, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return Poly(self.nvars, out)

    def scale(self, factor) -> "Poly":
        if not factor:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: c * factor for e, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative exponent")
        out = Poly.const(self.nvars, 1)
        for _ in range(exponent):
            out = out * self
        return out

    def evaluate(self, point) -> object:
        if len(point) != self.nvars:
            raise ValueError("point length mismatch")
        total = 0
        for exps, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, exps):
                for _ in range(e):
                    value *= x
            total += value
        return total

    def extend(self, nvars: int) -> "Poly":
        """Re-embed into a polynomial ring with more variables."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink the variable count")
        pad = (0,) * (nvars - self.nvars)
        return Poly(nvars, {e + pad: c for e, c in self.terms.items()})

    def divide_exact(self, divisor: "Poly") -> "Poly | None":
        """Quotient self/divisor when the division is exact, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return Poly.zero(self.nvars)
        if divisor.is_constant():
            d = divisor.constant_value()
            out = {}
            for e, c in self.terms.items():
                q = Fraction(c) / Fraction(d)
                if q.denominator != 1 and not isinstance(c, Fraction):
                    return None
                out[e] = q if q.denominator != 1 else int(q)
            return Poly(self.nvars, out)
        rem = Poly(self.nvars, dict(self.terms))
        quo: dict = {}
        lead_d = max(divisor.terms, key=_grlex_key)
        cd = divisor.terms[lead_d]
        while not rem.is_zero():
            lead_r = max(rem.terms, key=_grlex_key)
            diff = tuple(a - b for a, b in zip(lead_r, lead_d))
            if any(d < 0 for d in diff):
                return None
            q = Fraction(rem.terms[lead_r]) / Fraction(cd)
            if q.denominator != 1:
                if not isinstance(rem.terms[lead_r], Fraction):
                    return None
            else:
                q = int(q)
            quo[diff] = q
            rem = rem - Poly(self.nvars, {diff: q}) * divisor
        return Poly(self.nvars, quo)

    def content(self) -> int:
        """gcd of the (integer) coefficients; 0 for the zero polynomial."""
        from math import gcd

        g = 0
        for c in self.terms.values():
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("content of a non-integer polynomial")
                c = c.numerator
            g = gcd(g, abs(c))
        return g

    # -- text form -------------------------------------------------------------

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_string()!r})"

    def to_string(self) -> str:
        """Canonical form: graded lexicographic order, largest terms first."""
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[exps]
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            mag = abs(coeff)
            body = "*".join(([str(mag)] if (mag != 1 or not factors) else []) + factors)
            parts.append(("-" if coeff < 0 else "+", body))
        # leading sign only shown when negative
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([()+*^-]))")
_VAR = re.compile(r"^x([1-9][0-9]*)$")


class _Parser:
    def __init__(self, text: str, nvars: int, macros: dict[str, Poly]):
        self.nvars = nvars
        self.macros = macros
        self.tokens: list[str] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if match is None or match.end() == pos:
                if text[pos:].strip():
                    raise PolyParseError(f"bad character at {text[pos:]!r}")
                break
            self.tokens.append(match.group(match.lastindex))
            pos = match.end()
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of polynomial")
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        poly = self.expr()
        if self.peek() is not None:
            raise PolyParseError(f"trailing input near {self.peek()!r}")
        return poly

    def expr(self) -> Poly:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Poly:
        out = self.unary()
        while self.peek() == "*":
            self.next()
            out = out * self.unary()
        return out

    def unary(self) -> Poly:
        if self.peek() == "-":
            self.next()
            return -self.unary()
        if self.peek() == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.next()
            tok = self.next()
            if not tok.isdigit():
                raise PolyParseError("exponent must be a nonnegative integer")
            return base ** int(tok)
        return base

    def atom(self) -> Poly:
        tok = self.next()
        if tok.isdigit():
            return Poly.const(self.nvars, int(tok))
        if tok == "(":
            inner = self.expr()
            if self.next() != ")":
                raise PolyParseError("missing closing parenthesis")
            return inner
        match = _VAR.match(tok)
        if match:
            index = int(match.group(1)) - 1
            if index >= self.nvars:
                raise PolyParseError(
                    f"variable {tok} exceeds the declared parameter count {self.nvars}"
                )
            return Poly.variable(self.nvars, index)
        if tok in self.macros:
            return self.macros[tok]
        raise PolyParseError(f"unknown name {tok!r}")


def parse_poly(text: str, nvars: int, macros: dict[str, Poly] | None = None) -> Poly:
    """Parse the polynomial grammar: integers, x<k>, macros, + - * ^ ( )."""
    return _Parser(str(text), nvars, macros or {}).parse()
