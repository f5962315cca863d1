"""Global fields, their places, valuations, residues and approximation.

Two kinds of global field are supported: ``F_q(t)`` (:class:`FunctionField`)
and ``Q`` (:class:`Rationals`). Elements are :class:`RatFunc` and
:class:`fractions.Fraction` respectively. A :class:`Place` is a finite place
(monic irreducible ``pi`` or prime ``l``) or the infinite/real place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Iterator, Sequence, Union

import sympy

from .exactalg import (
    GF,
    FFElem,
    FiniteField,
    Poly,
    RatFunc,
    crt,
    factor,
    format_poly,
    format_ratfunc,
    inverse_mod,
    is_irreducible,
    is_prime,
    monic_irreducibles,
    parse_ratfunc,
    parse_rational,
    polys_up_to,
)

Element = Union[RatFunc, Fraction]


class PlaceError(ValueError):
    """Operation is not defined at the given place."""


# ---------------------------------------------------------------------------
# fields


class FunctionField:
    """The rational function field ``F_q(t)``."""

    kind = "FqT"

    def __init__(self, q: int, var: str = "t"):
        self.F: FiniteField = GF(q)
        self.q = q
        self.var = var

    @property
    def name(self) -> str:
        return f"F{self.q}{self.var}"

    @property
    def characteristic(self) -> int:
        return self.F.p

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionField) and other.q == self.q and other.var == self.var

    def __hash__(self) -> int:
        return hash((self.kind, self.q, self.var))

    def __repr__(self) -> str:
        return f"FunctionField({self.q})"

    def zero(self) -> RatFunc:
        return RatFunc.const(self.F, 0)

    def one(self) -> RatFunc:
        return RatFunc.const(self.F, 1)

    def t(self) -> RatFunc:
        return RatFunc.t(self.F)

    def __call__(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return RatFunc(x)
        if isinstance(x, int):
            return RatFunc.from_int(self.F, x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def parse(self, text: str) -> RatFunc:
        return parse_ratfunc(text, self.F, self.var)

    def fmt(self, x: RatFunc) -> str:
        return format_ratfunc(x, self.var)

    def height(self, x: RatFunc) -> int:
        return x.height()

    def is_integral_poly(self, x: RatFunc) -> bool:
        return x.den.is_one()

    def places(self, max_degree: int) -> Iterator[Place]:
        """Finite places by increasing degree, lexicographic within a degree."""
        for d in range(1, max_degree + 1):
            for pi in monic_irreducibles(self.F, d):
                yield Place.finite(pi)

    def infinite_places(self) -> list[Place]:
        return [Place.infinite()]

    def finite_support(self, x: RatFunc) -> list[Place]:
        """Finite places where ``x`` has nonzero valuation."""
        out = []
        for poly in (x.num, x.den):
            if poly.deg > 0:
                out.extend(Place.finite(g) for g, _ in factor(poly))
        return out

    def elements(self, bound: int) -> Iterator[RatFunc]:
        from .harness import enumerate_elements

        return enumerate_elements(self, bound)


class Rationals:
    """The field ``Q``."""

    kind = "Q"
    name = "Q"
    characteristic = 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash(self.kind)

    def __repr__(self) -> str:
        return "Rationals()"

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        return parse_rational(text)

    def fmt(self, x: Fraction) -> str:
        return str(Fraction(x))

    def height(self, x: Fraction) -> int:
        x = Fraction(x)
        return max(abs(x.numerator), x.denominator)

    def is_integral_poly(self, x: Fraction) -> bool:
        return Fraction(x).denominator == 1

    def places(self, max_prime: int) -> Iterator[Place]:
        for n in range(2, max_prime + 1):
            if is_prime(n):
                yield Place.prime(n)

    def infinite_places(self) -> list[Place]:
        return [Place.real()]

    def finite_support(self, x: Fraction) -> list[Place]:
        x = Fraction(x)
        out = []
        for n in (abs(x.numerator), x.denominator):
            if n > 1:
                out.extend(Place.prime(int(l)) for l in sorted(_factorint(n)))
        return out


@lru_cache(maxsize=65536)
def _factorint(n: int) -> dict:
    return sympy.factorint(n)


FieldSpec = Union[FunctionField, Rationals]


def parse_field(text: str) -> FieldSpec:
    """``Q`` or ``F<q>t`` (for instance ``F3t``, ``F9t``)."""
    text = text.strip()
    if text == "Q":
        return Rationals()
    if text.startswith("F") and text.endswith("t") and text[1:-1].isdigit():
        return FunctionField(int(text[1:-1]))
    raise ValueError(f"unknown field {text!r}; expected 'Q' or 'F<q>t'")


def field_of(x) -> FieldSpec:
    if isinstance(x, RatFunc):
        if x.F != GF(x.F.size):
            raise ValueError(f"elements over the non-standard field {x.F!r} have no FieldSpec")
        return FunctionField(x.F.size)
    return Rationals()


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class Place:
    """``kind`` is one of 'finite', 'infinite' (for F_q(t)), 'prime', 'real' (for Q)."""

    kind: str
    pi: Poly | int | None = None

    @classmethod
    def finite(cls, pi: Poly) -> Place:
        if not pi.is_monic() or not is_irreducible(pi):
            raise PlaceError(f"{pi} is not a monic irreducible")
        return cls("finite", pi)

    @classmethod
    def infinite(cls) -> Place:
        return cls("infinite")

    @classmethod
    def prime(cls, l: int) -> Place:
        if not is_prime(l):
            raise PlaceError(f"{l} is not prime")
        return cls("prime", l)

    @classmethod
    def real(cls) -> Place:
        return cls("real")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("finite", "prime")

    @property
    def is_archimedean(self) -> bool:
        return self.kind == "real"

    @property
    def degree(self) -> int:
        if self.kind == "finite":
            return self.pi.deg
        if self.kind == "infinite":
            return 1
        raise PlaceError("degree is defined for function-field places only")

    def residue_characteristic(self) -> int:
        if self.kind == "prime":
            return self.pi
        if self.kind == "finite":
            return self.pi.F.p
        raise PlaceError(f"{self} has no residue field")

    def __str__(self) -> str:
        if self.kind == "finite":
            return f"finite:{format_poly(self.pi)}"
        if self.kind == "prime":
            return f"prime:{self.pi}"
        return self.kind

    def sort_key(self) -> tuple:
        if self.kind == "finite":
            return (0, self.pi.sort_key())
        if self.kind == "prime":
            return (0, self.pi)
        return (1,)

    def __lt__(self, other: Place) -> bool:
        return self.sort_key() < other.sort_key()


def parse_place(text: str, field: FieldSpec) -> Place:
    """``finite:<poly>``, ``infinite``, ``prime:<l>``, ``real``."""
    text = text.strip()
    if text == "infinite":
        if not isinstance(field, FunctionField):
            raise PlaceError("'infinite' is a place of F_q(t); use 'real' for Q")
        return Place.infinite()
    if text == "real":
        if not isinstance(field, Rationals):
            raise PlaceError("'real' is a place of Q")
        return Place.real()
    kind, _, rest = text.partition(":")
    if kind == "finite":
        if not isinstance(field, FunctionField):
            raise PlaceError("finite:<poly> places belong to F_q(t); use prime:<l> for Q")
        x = field.parse(rest)
        if not x.is_poly():
            raise PlaceError(f"{rest!r} is not a polynomial")
        return Place.finite(x.num)
    if kind == "prime":
        if not isinstance(field, Rationals):
            raise PlaceError("prime:<l> places belong to Q")
        return Place.prime(int(rest))
    raise PlaceError(f"unknown place literal {text!r}")


INF = float("inf")


def ord(v: Place, x: Element) -> int | float:
    """Normalised valuation; ``+inf`` at zero."""
    if v.kind == "real":
        raise PlaceError("the real place has no discrete valuation")
    if not x:
        return INF
    if v.kind == "finite":
        return _poly_ord(x.num, v.pi) - _poly_ord(x.den, v.pi)
    if v.kind == "infinite":
        return x.den.deg - x.num.deg
    x = Fraction(x)
    return _int_ord(x.numerator, v.pi) - _int_ord(x.denominator, v.pi)


def _poly_ord(f: Poly, pi: Poly) -> int:
    if f.deg < pi.deg:
        return 0
    return f.valuation_at(pi)


def _int_ord(n: int, l: int) -> int:
    n = abs(n)
    k = 0
    while n % l == 0:
        n //= l
        k += 1
    return k


@lru_cache(maxsize=None)
def residue_field(v: Place) -> FiniteField:
    """Residue field as a :class:`FiniteField`. Elements of ``F_q[t]/(pi)`` are
    encoded through their coefficient tuples over ``F_q``."""
    if v.kind == "prime":
        return GF(v.pi)
    if v.kind == "finite":
        F = v.pi.F
        return FiniteField(F.p, F, v.pi.c)
    if v.kind == "infinite":
        raise PlaceError("use residue_field_of(field, place) for the infinite place")
    raise PlaceError("the real place has no residue field")


def residue_field_of(field: FieldSpec, v: Place) -> FiniteField:
    if v.kind == "infinite":
        return field.F
    return residue_field(v)


@dataclass(frozen=True)
class ResidueSystem:
    place: Place
    field: FiniteField

    @property
    def size(self) -> int:
        return self.field.size


def residue_system(field: FieldSpec, v: Place) -> ResidueSystem:
    return ResidueSystem(v, residue_field_of(field, v))


def _reduce_poly(f: Poly, v: Place) -> int:
    k = residue_field(v)
    r = f % v.pi
    return k.from_digits(r.c + (0,) * (k.degree - len(r.c)))


def _residue_raw(v: Place, x: Element) -> int:
    if v.kind == "prime":
        x = Fraction(x)
        l = v.pi
        if x.denominator % l == 0:
            raise PlaceError("negative valuation")
        return x.numerator * pow(x.denominator, -1, l) % l
    if v.kind == "finite":
        if (x.den % v.pi).is_zero():
            raise PlaceError("negative valuation")
        k = residue_field(v)
        return k.div(_reduce_poly(x.num, v), _reduce_poly(x.den, v))
    if v.kind == "infinite":
        if x.num.deg > x.den.deg:
            raise PlaceError("negative valuation")
        if x.num.deg < x.den.deg:
            return 0
        F = x.F
        return F.div(x.num.lc, x.den.lc)
    raise PlaceError("the real place has no residue map")


def residue(v: Place, x: Element) -> FFElem:
    """Image of an integral ``x`` in the residue field."""
    raw = _residue_raw(v, x)
    k = x.F if v.kind == "infinite" else residue_field(v)
    return k.elem(raw)


def uniformizer(field: FieldSpec, v: Place) -> Element:
    if v.kind == "finite":
        return RatFunc(v.pi)
    if v.kind == "infinite":
        return field.one() / field.t()
    if v.kind == "prime":
        return Fraction(v.pi)
    raise PlaceError("the real place has no uniformizer")


def unit_part(v: Place, x: Element) -> tuple[int, int]:
    """``(ord_v x, residue of x / pi_v^ord)`` for the fixed uniformizer of ``v``."""
    if not x:
        raise PlaceError("zero has no unit part")
    if v.kind == "finite":
        a, un = x.num.split_at(v.pi) if x.num.deg >= v.pi.deg else (0, x.num)
        b, ud = x.den.split_at(v.pi) if x.den.deg >= v.pi.deg else (0, x.den)
        k = residue_field(v)
        return a - b, k.div(_reduce_poly(un, v), _reduce_poly(ud, v))
    if v.kind == "infinite":
        return x.den.deg - x.num.deg, x.F.div(x.num.lc, x.den.lc)
    if v.kind == "prime":
        x = Fraction(x)
        l = v.pi
        n, d = x.numerator, x.denominator
        a = _int_ord(n, l)
        b = _int_ord(d, l)
        n //= l ** a
        d //= l ** b
        return a - b, n * pow(d, -1, l) % l
    raise PlaceError("the real place has no unit part")


def lift_residue(field: FieldSpec, v: Place, r) -> Element:
    """A canonical lift (lowest degree / least nonnegative) of a residue."""
    val = r.value if isinstance(r, FFElem) else r
    if v.kind == "prime":
        return Fraction(val)
    if v.kind == "infinite":
        return RatFunc.const(field.F, val)
    k = residue_field(v)
    return RatFunc(Poly(field.F, k.digits(val)))


def is_local_square(v: Place, x: Element) -> bool:
    """Whether ``x`` is a square in the completion at ``v``."""
    if not x:
        raise PlaceError("zero is not a valid argument for the square-class test")
    if v.kind == "real":
        return Fraction(x) > 0
    if v.kind == "prime" and v.pi == 2:
        x = Fraction(x)
        a = _int_ord(x.numerator, 2) - _int_ord(x.denominator, 2)
        if a % 2:
            return False
        u = x / Fraction(2) ** a
        return u.numerator * u.denominator % 8 == 1
    if v.kind in ("finite", "infinite"):
        if v.kind == "finite" and v.pi.F.p == 2 or v.kind == "infinite" and x.F.p == 2:
            raise PlaceError("residue characteristic 2 is not supported for function fields")
    e, u = unit_part(v, x)
    if e % 2:
        return False
    k = x.F if v.kind == "infinite" else residue_field(v)
    return k.chi(u) == 1


# ---------------------------------------------------------------------------
# approximation


@dataclass(frozen=True)
class Target:
    """Constraint for :func:`approximate`.

    ``mode`` is 'close' (``ord_v(y - value) >= n``) or 'exact'
    (``ord_v(y) == n``; ``value`` unused).
    """

    place: Place
    mode: str
    n: int
    value: object = None

    @classmethod
    def residue(cls, place: Place, value) -> Target:
        return cls(place, "close", 1, value)

    @classmethod
    def at_least(cls, place: Place, n: int) -> Target:
        return cls(place, "close", n, None)

    @classmethod
    def exactly(cls, place: Place, n: int) -> Target:
        return cls(place, "exact", n, None)

    @classmethod
    def close(cls, place: Place, value, n: int) -> Target:
        return cls(place, "close", n, value)


def approximate(field: FieldSpec, targets: Sequence[Target], max_candidates: int = 1 << 20) -> Element:
    """Element meeting every target, chosen deterministically.

    Constraints of the 'close' kind are solved by CRT with the least-degree
    (least absolute value) representative; 'exact' valuation constraints are
    then met by the first admissible translate in enumeration order.
    """
    seen = set()
    for tg in targets:
        if not tg.place.is_finite:
            raise PlaceError("approximation is implemented at finite places only")
        if tg.place in seen:
            raise ValueError(f"conflicting duplicate place {tg.place}")
        seen.add(tg.place)
    if isinstance(field, FunctionField):
        return _approximate_poly(field, list(targets), max_candidates)
    return _approximate_int(list(targets), max_candidates)


def _approximate_poly(field: FunctionField, targets: list[Target], max_candidates: int) -> RatFunc:
    F = field.F
    one = Poly(F, (1,))
    # Clear denominators at the constrained places: y = Y / D.
    D = one
    dexp: dict[Place, int] = {}
    for tg in targets:
        d = 0
        if tg.mode == "close":
            if tg.value is not None and tg.value:
                d = max(d, -ord(tg.place, tg.value))
            d = max(d, -tg.n)
        else:
            d = max(d, -tg.n)
        dexp[tg.place] = d
        D = D * tg.place.pi ** d
    res, mods = [], []
    exact = []
    for tg in targets:
        pi, d = tg.place.pi, dexp[tg.place]
        if tg.mode == "close":
            prec = tg.n + d
            if prec <= 0:
                continue
            modulus = pi ** prec
            val = field.zero() if tg.value is None else field(tg.value)
            w = val * RatFunc(D)
            res.append(w.num * inverse_mod(w.den, modulus) % modulus)
            mods.append(modulus)
        else:
            exact.append((pi, tg.n + d))
    M = one
    Y0 = Poly(F)
    if mods:
        Y0 = crt(res, mods)
        for m in mods:
            M = M * m
    if not exact:
        return RatFunc(Y0, D)
    span = sum((n + 1) * pi.deg for pi, n in exact)
    tried = 0
    for k in polys_up_to(F, max(span - 1, 0)):
        tried += 1
        if tried > max_candidates:
            break
        Y = Y0 + M * k
        if Y.is_zero():
            continue
        if all(Y.valuation_at(pi) == n for pi, n in exact):
            return RatFunc(Y, D)
    raise ValueError("approximation search exhausted")  # pragma: no cover


def _signed_range() -> Iterator[int]:
    yield 0
    for n in count(1):
        yield n
        yield -n


def _approximate_int(targets: list[Target], max_candidates: int) -> Fraction:
    D = 1
    dexp: dict[Place, int] = {}
    for tg in targets:
        d = 0
        if tg.mode == "close" and tg.value is not None and tg.value:
            d = max(d, -ord(tg.place, Fraction(tg.value)))
        d = max(d, -tg.n)
        dexp[tg.place] = d
        D *= tg.place.pi ** d
    Y0, M = 0, 1
    exact = []
    for tg in targets:
        l, d = tg.place.pi, dexp[tg.place]
        if tg.mode == "close":
            prec = tg.n + d
            if prec <= 0:
                continue
            m = l ** prec
            w = Fraction(0 if tg.value is None else tg.value) * D
            r = w.numerator * pow(w.denominator, -1, m) % m
            Y0 = _crt_int(Y0, M, r, m)
            M *= m
        else:
            exact.append((l, tg.n + d))
    if M > 1:
        Y0 = Y0 % M
        if Y0 > M // 2:
            Y0 -= M
    if not exact:
        return Fraction(Y0, D)
    for tried, k in enumerate(_signed_range()):
        if tried > max_candidates:
            break
        Y = Y0 + M * k
        if Y != 0 and all(_int_ord(Y, l) == n for l, n in exact):
            return Fraction(Y, D)
    raise ValueError("approximation search exhausted")  # pragma: no cover


def _crt_int(r1: int, m1: int, r2: int, m2: int) -> int:
    s = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * s % m2)) % (m1 * m2)


# ---------------------------------------------------------------------------
# helpers for the pipelines


def bad_places(field: FieldSpec, *elements: Element) -> list[Place]:
    """Support of the given nonzero elements plus the archimedean/infinite
    places (and 2 for Q), sorted and without repetitions."""
    out: set[Place] = set()
    for x in elements:
        out.update(field.finite_support(x))
    out.update(field.infinite_places())
    if isinstance(field, Rationals):
        out.add(Place.prime(2))
    return sorted(out)


def helper_places(field: FieldSpec, exclude: Sequence[Place], count_: int) -> list[Place]:
    """First ``count_`` finite places (lowest degree / smallest odd prime) not in ``exclude``."""
    out: list[Place] = []
    if isinstance(field, FunctionField):
        d = 1
        while len(out) < count_:
            for pi in monic_irreducibles(field.F, d):
                v = Place.finite(pi)
                if v not in exclude:
                    out.append(v)
                    if len(out) == count_:
                        break
            d += 1
        return out
    n = 3
    while len(out) < count_:
        if is_prime(n) and Place.prime(n) not in exclude:
            out.append(Place.prime(n))
        n += 2
    return out
