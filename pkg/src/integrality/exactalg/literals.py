"""Element literal grammar shared by the library and the command line.

    polynomial      2*t^2+t+1
    rational func.  (t^2+1)/(t+2)
    F_q scalar      integers are read modulo p; for F_{p^m}, m > 1, a
                    bracketed polynomial in the generator u, e.g. [u+1]*t
    rational        -7/15

Parsing accepts any arithmetic expression built from these with + - * / ^
and parentheses; printing produces the canonical forms above.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .finite_field import FiniteField
from .poly import Poly
from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


class LiteralError(ValueError):
    """Syntax error in an element literal; ``pos`` is the offending offset."""

    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    """Recursive-descent evaluator over a caller-supplied ring."""

    def __init__(self, text: str, ring):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise LiteralError(f"expected {op!r}", self.text, pos)

    def parse(self):
        v = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise LiteralError(f"unexpected {val!r}", self.text, pos)
        return v

    def expr(self):
        v = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                w = self.term()
                v = v + w if val == "+" else v - w
            else:
                return v

    def term(self):
        v = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                w = self.unary()
                if val == "*":
                    v = v * w
                else:
                    if self.ring.is_zero(w):
                        raise LiteralError("division by zero", self.text, pos)
                    v = v / w
            else:
                return v

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            v = self.unary()
            return -v if val == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            neg = False
            k2, v2, p2 = self.peek()
            if k2 == "op" and v2 == "-":
                self.take()
                neg = True
            k2, v2, p2 = self.take()
            if k2 != "num":
                raise LiteralError("expected integer exponent", self.text, p2)
            e = int(v2)
            if neg:
                if self.ring.is_zero(base):
                    raise LiteralError("division by zero", self.text, p2)
                return self.ring.one() / (base ** e)
            return base ** e
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.integer(int(val))
        if kind == "name":
            return self.ring.variable(val, self.text, pos)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind == "op" and val == "[":
            start = pos + 1
            depth = 0
            j = self.i
            while True:
                k, v, p = self.toks[j]
                if k == "end":
                    raise LiteralError("unclosed '['", self.text, pos)
                if k == "op" and v == "[":
                    depth += 1
                if k == "op" and v == "]":
                    if depth == 0:
                        break
                    depth -= 1
                j += 1
            inner = self.text[start:self.toks[j][2]]
            self.i = j + 1
            return self.ring.scalar(inner, self.text, pos)
        raise LiteralError(f"unexpected {val or 'end of input'!r}", self.text, pos)


class _FunctionRing:
    def __init__(self, F: FiniteField, var: str):
        self.F = F
        self.var = var

    def is_zero(self, x):
        return x.is_zero()

    def one(self):
        return RatFunc.const(self.F, 1)

    def integer(self, n):
        return RatFunc.from_int(self.F, n)

    def variable(self, name, text, pos):
        if name != self.var:
            raise LiteralError(f"unknown symbol {name!r}", text, pos)
        return RatFunc.t(self.F)

    def scalar(self, inner, text, pos):
        return RatFunc.const(self.F, parse_scalar(inner, self.F))


class _ScalarRing:
    """Evaluates ``u``-polynomials over F_p into an extension's encoding."""

    def __init__(self, F: FiniteField):
        self.F = F
        self.prime = F.base if F.base is not None and F.base.is_prime_field else None
        if self.prime is None:
            raise ValueError("bracketed scalars need a simple extension of a prime field")

    def is_zero(self, x):
        return x.is_zero()

    def one(self):
        return Poly(self.prime, (1,))

    def integer(self, n):
        return Poly(self.prime, (n % self.F.p,))

    def variable(self, name, text, pos):
        if name != "u":
            raise LiteralError(f"unknown symbol {name!r}", text, pos)
        return Poly.x(self.prime)

    def scalar(self, inner, text, pos):
        raise LiteralError("nested brackets", text, pos)


class _RationalRing:
    def is_zero(self, x):
        return x == 0

    def one(self):
        return Fraction(1)

    def integer(self, n):
        return Fraction(n)

    def variable(self, name, text, pos):
        raise LiteralError(f"unknown symbol {name!r}", text, pos)

    def scalar(self, inner, text, pos):
        raise LiteralError("brackets are not valid for rationals", text, pos)


def parse_scalar(text: str, F: FiniteField) -> int:
    """Parse an F_q scalar; returns its encoded value."""
    text = text.strip()
    if F.is_prime_field:
        try:
            return int(text) % F.p
        except ValueError:
            raise LiteralError("expected an integer scalar", text, 0) from None
    ring = _ScalarRing(F)
    poly = _Parser(text, ring).parse()
    if isinstance(poly, Poly):
        r = poly % Poly(ring.prime, F.modulus)
        return F.from_digits(r.c + (0,) * (F.degree - len(r.c)))
    raise LiteralError("bad scalar", text, 0)  # pragma: no cover


def parse_ratfunc(text: str, F: FiniteField, var: str = "t") -> RatFunc:
    return _Parser(text, _FunctionRing(F, var)).parse()


def parse_rational(text: str) -> Fraction:
    return _Parser(text, _RationalRing()).parse()


def format_scalar(F: FiniteField, a: int) -> str:
    if F.is_prime_field or a < F.p:
        return str(a)
    if F.base is not None and F.base.is_prime_field:
        return "[" + _format_coeffs(F.base, F.digits(a), "u") + "]"
    return str(a)


def _format_coeffs(F: FiniteField, coeffs, var: str) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        a = coeffs[k]
        if a == 0:
            continue
        cs = format_scalar(F, a)
        if k == 0:
            parts.append(cs)
            continue
        mon = var if k == 1 else f"{var}^{k}"
        parts.append(mon if a == 1 else f"{cs}*{mon}")
    return "+".join(parts) if parts else "0"


def format_poly(f: Poly, var: str = "t") -> str:
    return _format_coeffs(f.F, f.c, var)


def _wrap(f: Poly, var: str) -> str:
    text = format_poly(f, var)
    return text if sum(1 for c in f.c if c) == 1 else f"({text})"


def format_ratfunc(x: RatFunc, var: str = "t") -> str:
    if x.den.is_one():
        return format_poly(x.num, var)
    return f"{_wrap(x.num, var)}/{_wrap(x.den, var)}"


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))
