"""Quaternion algebras ``H(a, b)`` in both presentations.

Odd characteristic: basis ``(1, i, j, ij)`` with ``i^2 = a, j^2 = b, ij = -ji``.
Characteristic 2: basis ``(1, u, v, uv)`` with ``u^2 = a, v^2 = v + b,
vu = uv + u``; the remaining products follow from these and are tabulated
below with ``w = uv``.

Coordinates may live in any field whose elements support ``+ - * /`` with
ints (``RatFunc``, ``Fraction``, ``PerfElement``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

ODD = "OddChar"
CHAR2 = "Char2"


def _char_of(x) -> int:
    F = getattr(x, "F", None)
    if F is not None:
        return F.p
    return 0


class QuatAlgebra:
    def __init__(self, a, b, presentation: str | None = None):
        if not a or not b:
            raise ValueError("quaternion algebra parameters must be nonzero")
        p = _char_of(a)
        if presentation is None:
            presentation = CHAR2 if p == 2 else ODD
        if presentation == ODD and p == 2:
            raise ValueError("the (1, i, j, ij) presentation needs characteristic != 2")
        if presentation == CHAR2 and p != 2:
            raise ValueError("the (1, u, v, uv) presentation needs characteristic 2")
        self.a = a
        self.b = b
        self.presentation = presentation
        self.zero = a - a
        self.one = a / a
        self._table = self._build_table()

    def __repr__(self) -> str:
        return f"QuatAlgebra({self.a}, {self.b}, {self.presentation})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuatAlgebra)
            and self.presentation == other.presentation
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.presentation))

    def _build_table(self):
        a, b, z, o = self.a, self.b, self.zero, self.one
        if self.presentation == ODD:
            rows = {
                (0, 0): (o, z, z, z), (0, 1): (z, o, z, z), (0, 2): (z, z, o, z), (0, 3): (z, z, z, o),
                (1, 0): (z, o, z, z), (1, 1): (a, z, z, z), (1, 2): (z, z, z, o), (1, 3): (z, z, a, z),
                (2, 0): (z, z, o, z), (2, 1): (z, z, z, -o), (2, 2): (b, z, z, z), (2, 3): (z, -b, z, z),
                (3, 0): (z, z, z, o), (3, 1): (z, z, -a, z), (3, 2): (z, b, z, z), (3, 3): (-(a * b), z, z, z),
            }
        else:
            rows = {
                (0, 0): (o, z, z, z), (0, 1): (z, o, z, z), (0, 2): (z, z, o, z), (0, 3): (z, z, z, o),
                (1, 0): (z, o, z, z), (1, 1): (a, z, z, z), (1, 2): (z, z, z, o), (1, 3): (z, z, a, z),
                (2, 0): (z, z, o, z), (2, 1): (z, o, z, o), (2, 2): (b, z, o, z), (2, 3): (z, b, z, z),
                (3, 0): (z, z, z, o), (3, 1): (a, z, a, z), (3, 2): (z, b, z, o), (3, 3): (a * b, z, z, z),
            }
        return rows

    def element(self, coords: Sequence) -> QuatElem:
        if len(coords) != 4:
            raise ValueError("quaternions have four coordinates")
        z = self.zero
        return QuatElem(self, tuple(z + c for c in coords))

    def basis(self) -> list[QuatElem]:
        z, o = self.zero, self.one
        return [self.element([o if k == n else z for k in range(4)]) for n in range(4)]

    def scalar(self, c) -> QuatElem:
        z = self.zero
        return self.element([z + c, z, z, z])


@dataclass(frozen=True)
class QuatElem:
    alg: QuatAlgebra
    coords: tuple

    def _check(self, y: QuatElem):
        if self.alg is not y.alg and self.alg != y.alg:
            raise ValueError("quaternions from different algebras")

    def __add__(self, y: QuatElem) -> QuatElem:
        self._check(y)
        return QuatElem(self.alg, tuple(u + v for u, v in zip(self.coords, y.coords)))

    def __sub__(self, y: QuatElem) -> QuatElem:
        self._check(y)
        return QuatElem(self.alg, tuple(u - v for u, v in zip(self.coords, y.coords)))

    def __neg__(self) -> QuatElem:
        return QuatElem(self.alg, tuple(-u for u in self.coords))

    def scale(self, c) -> QuatElem:
        return QuatElem(self.alg, tuple(c * u for u in self.coords))

    def __mul__(self, y):
        if not isinstance(y, QuatElem):
            return self.scale(y)
        return quat_mul(self, y)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, e: int) -> QuatElem:
        if e < 0:
            raise ValueError("no division in quaternion algebras here")
        r = self.alg.scalar(self.alg.one)
        for _ in range(e):
            r = r * self
        return r

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def __eq__(self, y) -> bool:
        return isinstance(y, QuatElem) and self.alg == y.alg and self.coords == y.coords

    def __hash__(self) -> int:
        return hash(self.coords)


def quat_mul(x: QuatElem, y: QuatElem) -> QuatElem:
    x._check(y)
    alg = x.alg
    z = alg.zero
    out = [z, z, z, z]
    table = alg._table
    for m, xm in enumerate(x.coords):
        if not xm:
            continue
        for n, yn in enumerate(y.coords):
            if not yn:
                continue
            c = xm * yn
            for k, s in enumerate(table[(m, n)]):
                if s:
                    out[k] = out[k] + c * s
    return QuatElem(alg, tuple(out))


def reduced_trace(x: QuatElem):
    x1, _, x3, _ = x.coords
    if x.alg.presentation == ODD:
        return 2 * x1
    return x3


def reduced_norm(x: QuatElem):
    a, b = x.alg.a, x.alg.b
    x1, x2, x3, x4 = x.coords
    if x.alg.presentation == ODD:
        return x1 * x1 - a * x2 * x2 - b * x3 * x3 + a * b * x4 * x4
    return x1 * x1 + x1 * x3 + b * x3 * x3 + a * (x2 * x2 + x2 * x4 + b * x4 * x4)


def conjugate(x: QuatElem) -> QuatElem:
    return x.alg.scalar(reduced_trace(x)) - x


def char_poly_check(x: QuatElem) -> bool:
    """``x^2 - tr(x) x + nr(x) == 0`` evaluated in the algebra."""
    lhs = x * x - x.scale(reduced_trace(x)) + x.alg.scalar(reduced_norm(x))
    return lhs.is_zero()


def rescale(x: QuatElem, s, r) -> QuatElem:
    """Image of ``x`` under ``H(a, b) -> H(a s^2, b r^2)`` (odd presentation)."""
    alg = x.alg
    if alg.presentation != ODD:
        raise ValueError("rescaling is defined for the odd-characteristic presentation")
    target = QuatAlgebra(alg.a * s * s, alg.b * r * r)
    x1, x2, x3, x4 = x.coords
    return target.element([x1, x2 / s, x3 / r, x4 / (s * r)])


def trace_form_matrix(elems: Sequence[QuatElem]) -> list[list]:
    """Gram matrix ``tr(e_m e_n)``."""
    return [[reduced_trace(u * v) for v in elems] for u in elems]
