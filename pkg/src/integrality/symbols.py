"""Hilbert symbols, ramification sets of quaternion algebras and reciprocity."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator

from .exactalg import RatFunc, polys_up_to
from .places import (
    Element,
    FieldSpec,
    FunctionField,
    Place,
    PlaceError,
    Rationals,
    bad_places,
    residue_field,
    unit_part,
)


class SearchExhausted(RuntimeError):
    """A bounded search ended without an acceptable candidate."""


def hilbert_symbol(v: Place, a: Element, b: Element) -> int:
    """``(a, b)_v`` in {+1, -1}: +1 iff ``z^2 = a x^2 + b y^2`` has a
    nontrivial solution over the completion at ``v``."""
    if not a or not b:
        raise ValueError("Hilbert symbol of zero")
    if v.kind == "real":
        return -1 if Fraction(a) < 0 and Fraction(b) < 0 else 1
    if v.kind == "prime" and v.pi == 2:
        return _dyadic_symbol(Fraction(a), Fraction(b))
    if v.kind == "infinite":
        k = a.F
    elif v.kind == "finite":
        k = residue_field(v)
    else:
        k = None
    if k is not None and k.p == 2:
        raise PlaceError("symbols at residue characteristic 2 are not supported for F_q(t)")
    alpha, ua = unit_part(v, a)
    beta, ub = unit_part(v, b)
    if v.kind == "prime":
        l = v.pi
        # (-1)^(alpha beta) ua^beta / ub^alpha  modulo l
        val = pow(ua, beta % (l - 1), l) * pow(ub, (-alpha) % (l - 1), l) % l
        if alpha * beta % 2:
            val = -val % l
        return _legendre(val, l)
    val = k.mul(k.pow(ua, beta), k.pow(ub, -alpha))
    if alpha * beta % 2:
        val = k.neg(val)
    return k.chi(val)


def _legendre(a: int, l: int) -> int:
    r = pow(a, (l - 1) // 2, l)
    return 1 if r == 1 else -1


def _dyadic_symbol(a: Fraction, b: Fraction) -> int:
    def split(x: Fraction) -> tuple[int, int]:
        # x = 2^e * u, u a 2-adic unit; return (e, u mod 8)
        n, d = x.numerator, x.denominator
        e = 0
        while n % 2 == 0:
            n //= 2
            e += 1
        while d % 2 == 0:
            d //= 2
            e -= 1
        return e, n * pow(d, -1, 8) % 8

    alpha, u = split(a)
    beta, w = split(b)

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    s = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if s % 2 else 1


@dataclass(frozen=True)
class RamificationData:
    algebra: tuple
    ram: tuple[Place, ...]
    evidence: tuple[tuple[Place, int], ...] = dc_field(default=(), compare=False)

    def __contains__(self, v: Place) -> bool:
        return v in self.ram


def ram_set(field: FieldSpec, a: Element, b: Element) -> RamificationData:
    """Places where ``H(a, b)`` ramifies (symbol -1). Every place outside the
    candidate set has unit ``a``, ``b`` and odd residue characteristic, hence
    splits."""
    if not a or not b:
        raise ValueError("quaternion algebra parameters must be nonzero")
    evidence = tuple((v, hilbert_symbol(v, a, b)) for v in bad_places(field, a, b))
    ram = tuple(v for v, s in evidence if s == -1)
    return RamificationData((a, b), ram, evidence)


def reciprocity_check(field: FieldSpec, a: Element, b: Element) -> tuple[bool, list[tuple[Place, int]]]:
    """Product of local symbols over all bad places, with the per-place list."""
    data = ram_set(field, a, b)
    prod = 1
    for _, s in data.evidence:
        prod *= s
    return prod == 1, list(data.evidence)


def _candidate_a(field: FieldSpec, bound: int) -> Iterator[Element]:
    if isinstance(field, FunctionField):
        for f in polys_up_to(field.F, bound):
            if not f.is_zero():
                yield RatFunc(f)
    else:
        for n in range(1, bound + 1):
            yield Fraction(n)
            yield Fraction(-n)


def _units(field: FieldSpec) -> list[Element]:
    if isinstance(field, FunctionField):
        return [RatFunc.const(field.F, c) for c in range(1, field.F.size)]
    return [Fraction(1), Fraction(-1)]


def _uniformizer_product(field: FieldSpec, places: tuple[Place, ...]) -> Element:
    out = field.one()
    for v in places:
        out = out * (RatFunc(v.pi) if v.kind == "finite" else Fraction(v.pi))
    return out


def find_ramified_algebra(field: FieldSpec, v1: Place, v2: Place, bound: int | None = None) -> tuple[Element, Element]:
    """First ``(a, b)`` in the fixed candidate order with ``ram = {v1, v2}``.

    ``b`` runs over unit multiples of the product of the two uniformizers and
    ``a`` over nonzero polynomials by degree (integers by absolute value);
    ``bound`` caps the degree (absolute value) of ``a``.
    """
    if v1 == v2:
        raise ValueError("the two places must be distinct")
    for v in (v1, v2):
        if not v.is_finite:
            raise PlaceError(f"{v} is not a finite place")
        if v.residue_characteristic() == 2:
            raise PlaceError(f"{v} has residue characteristic 2")
    if bound is None:
        bound = 6 if isinstance(field, FunctionField) else 10_000
    want = tuple(sorted((v1, v2)))
    base = _uniformizer_product(field, want)
    units = _units(field)
    for a in _candidate_a(field, bound):
        for c in units:
            b = c * base
            if _quick_reject(field, want, a, b):
                continue
            if ram_set(field, a, b).ram == want:
                return a, b
    raise SearchExhausted(f"no algebra ramified exactly at {v1}, {v2} within bound {bound}")


def _quick_reject(field: FieldSpec, want: tuple[Place, ...], a: Element, b: Element) -> bool:
    return any(hilbert_symbol(v, a, b) != -1 for v in want)
