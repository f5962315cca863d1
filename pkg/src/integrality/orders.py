"""Maximal orders of quaternion algebras, semi-locally, by lattice saturation.

Lattices live inside ``H(a, b)`` and are written in coordinates for the
standard basis ``(1, i, j, ij)``. A lattice is stored as ``(den, rows)``: the
rows are integral vectors over ``R`` (``F_q[t]`` or ``Z``) and the lattice is
``R``-span(rows) / den. Saturating at a place ``v`` means adding integral
elements of ``pi^-1 L`` until none is left; the result localised at ``v`` is
the unique maximal order of the local division algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from .exactalg import Poly, RatFunc, poly_gcd, polys_up_to
from .places import Element, FieldSpec, FunctionField, Place, PlaceError, ord
from .symbols import hilbert_symbol
from .quaternion import QuatAlgebra, reduced_norm, reduced_trace


class SaturationError(RuntimeError):
    """Saturation did not stabilise within its candidate budget."""


# ---------------------------------------------------------------------------
# Euclidean rings F_q[t] and Z


class _PolyRing:
    def __init__(self, F):
        self.F = F

    def zero(self):
        return Poly(self.F)

    def one(self):
        return Poly(self.F, (1,))

    def size(self, x) -> int:
        return x.deg

    def normalize(self, x):
        """Unit multiple of ``x`` with monic leading term; returns (x', unit)."""
        if x.is_zero():
            return x, 1
        u = self.F.inv(x.lc)
        return x.scale(u), u

    def gcd(self, x, y):
        return poly_gcd(x, y)

    def to_field(self, x) -> RatFunc:
        return RatFunc(x)

    def from_field(self, x: RatFunc):
        if not x.den.is_one():
            raise ValueError("not integral")
        return x.num


class _IntRing:
    def zero(self):
        return 0

    def one(self):
        return 1

    def size(self, x) -> int:
        return abs(x)

    def normalize(self, x):
        return (x, 1) if x >= 0 else (-x, -1)

    def gcd(self, x, y):
        return gcd(x, y)

    def to_field(self, x) -> Fraction:
        return Fraction(x)

    def from_field(self, x: Fraction):
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError("not integral")
        return x.numerator


def _ring(field: FieldSpec):
    if isinstance(field, FunctionField):
        return _PolyRing(field.F)
    return _IntRing()


def _scale(ring, c, x):
    if isinstance(ring, _PolyRing):
        return x.scale(c)
    return c * x


def hnf(rows: Sequence[Sequence], ring) -> list[list]:
    """Row Hermite normal form over a Euclidean ring; zero rows are dropped."""
    A = [list(r) for r in rows]
    if not A:
        return []
    ncols = len(A[0])
    out: list[list] = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col]]
        zero = [r for r in A if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: ring.size(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                qt, _ = divmod(r[col], piv[col])
                r = [x - qt * y for x, y in zip(r, piv)]
                if r[col]:
                    rest.append(r)
                else:
                    zero.append(r)
            nz = [piv] + rest
        piv = nz[0]
        _, u = ring.normalize(piv[col])
        piv = [_scale(ring, u, x) for x in piv]
        out.append(piv)
        A = [r for r in zero if any(r)]
        col += 1
    # reduce entries above the pivots
    pivcols = []
    for r in out:
        pivcols.append(next(k for k, x in enumerate(r) if x))
    for n, r in enumerate(out):
        c = pivcols[n]
        for m in range(n):
            qt, _ = divmod(out[m][c], r[c])
            if qt:
                out[m] = [x - qt * y for x, y in zip(out[m], r)]
    return out


@dataclass(frozen=True)
class Lattice:
    """``span_R(rows) / den`` in standard coordinates."""

    den: object
    rows: tuple

    def vectors(self, ring) -> list[tuple]:
        d = ring.to_field(self.den)
        return [tuple(ring.to_field(x) / d for x in r) for r in self.rows]


def _simplify(ring, den, rows):
    g = den
    for r in rows:
        for x in r:
            g = ring.gcd(g, x)
    if isinstance(ring, _PolyRing):
        g = g.monic()
        if not g.is_one():
            den = den // g
            rows = [[x // g for x in r] for r in rows]
    elif g != 1:
        den //= g
        rows = [[x // g for x in r] for r in rows]
    return den, rows


def standard_lattice(field: FieldSpec) -> Lattice:
    ring = _ring(field)
    o, z = ring.one(), ring.zero()
    rows = tuple(tuple(o if k == n else z for k in range(4)) for n in range(4))
    return Lattice(o, rows)


def is_integral_at(alg: QuatAlgebra, coords: Sequence, places: Sequence[Place]) -> bool:
    """Reduced trace and reduced norm integral at every listed place."""
    x = alg.element(coords)
    tr, nr = reduced_trace(x), reduced_norm(x)
    return all(ord(v, tr) >= 0 and ord(v, nr) >= 0 for v in places)


def _residue_reps(field: FieldSpec, v: Place) -> list:
    if isinstance(field, FunctionField):
        return list(polys_up_to(field.F, v.pi.deg - 1))
    return list(range(v.pi))


def _projective(reps: list, n: int):
    """Nonzero vectors over the residue reps with first nonzero entry 1."""
    zero, one = reps[0], reps[1]
    for lead in range(n):
        for tail in product(reps, repeat=n - lead - 1):
            yield (zero,) * lead + (one,) + tail


def saturate(field: FieldSpec, alg: QuatAlgebra, lattice: Lattice, v: Place, budget: int = 2_000_000) -> Lattice:
    """Largest lattice integral at ``v`` obtained from ``lattice`` by adjoining
    ``pi^-1`` multiples. Integrality elsewhere is unchanged because only
    ``pi`` enters the denominators."""
    if not v.is_finite:
        raise PlaceError("saturation needs a finite place")
    ring = _ring(field)
    pi = v.pi
    reps = _residue_reps(field, v)
    den, rows = lattice.den, [list(r) for r in lattice.rows]
    spent = 0
    changed = True
    while changed:
        changed = False
        dfield = ring.to_field(den * pi)
        for c in _projective(reps, 4):
            spent += 1
            if spent > budget:
                raise SaturationError(f"saturation at {v} exceeded {budget} candidates")
            num = [ring.zero()] * 4
            for ck, r in zip(c, rows):
                if ck:
                    num = [x + ck * y for x, y in zip(num, r)]
            coords = [ring.to_field(x) / dfield for x in num]
            if not is_integral_at(alg, coords, [v]):
                continue
            new_rows = [[pi * x for x in r] for r in rows] + [num]
            rows = hnf(new_rows, ring)
            den, rows = _simplify(ring, den * pi, rows)
            changed = True
            break
    return Lattice(den, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class OrderData:
    """Basis of the maximal order over the semi-local ring at ``places``.

    ``basis[0]`` is ``1``; the remaining elements have reduced trace zero.
    ``lattice`` is the saturated ``R``-lattice the basis was read off.
    """

    places: tuple
    basis: tuple
    lattice: Lattice


def maximal_order(field: FieldSpec, a: Element, b: Element, places: Sequence[Place]) -> OrderData:
    """Saturate the standard order at each place, then trace-normalise."""
    alg = QuatAlgebra(a, b)
    for v in places:
        if not v.is_finite:
            raise PlaceError(f"{v} is not a finite place")
        if v.residue_characteristic() == 2:
            raise PlaceError(f"{v} has residue characteristic 2")
        # Integral elements form a ring only in the local division algebra.
        if hilbert_symbol(v, a, b) != -1:
            raise ValueError(f"H({a}, {b}) is not ramified at {v}")
    ring = _ring(field)
    L = standard_lattice(field)
    for v in places:
        L = saturate(field, alg, L, v)
    # x -> x - tr(x)/2 kills the first coordinate; 1 splits off because 2 is a unit.
    kernel = hnf([[x for x in r[1:]] for r in L.rows], ring)
    if len(kernel) != 3:
        raise AssertionError("trace kernel must have rank 3")
    d = ring.to_field(L.den)
    zero = field.zero()
    basis = [(field.one(), zero, zero, zero)]
    for r in kernel:
        basis.append((zero,) + tuple(ring.to_field(x) / d for x in r))
    return OrderData(tuple(places), tuple(basis), L)


def coordinate_exponent(order: OrderData, v: Place) -> int:
    """Least ``r >= 0`` with ``pi_v^r * O_v`` inside the standard order at ``v``."""
    r = 0
    for vec in order.basis:
        for x in vec:
            if x:
                r = max(r, -ord(v, x))
    return r


def determinant(vectors: Sequence[Sequence]) -> Element:
    """Determinant by Gaussian elimination over the field."""
    M = [list(r) for r in vectors]
    n = len(M)
    det = M[0][0] - M[0][0] + 1
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return M[0][0] - M[0][0]
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det = det * M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det
