"""Rational functions over a finite field in canonical form."""

from __future__ import annotations

from fractions import Fraction

from .finite_field import FiniteField
from .poly import Poly, poly_gcd

# Elements of Q are plain fractions.Fraction values.
BigRational = Fraction


class RatFunc:
    """``num/den`` with ``den`` monic and ``gcd(num, den) = 1``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, _canonical: bool = False):
        if den is None:
            den = Poly(num.F, (1,))
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                den = Poly(num.F, (1,))
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
                if den.lc != 1:
                    k = num.F.inv(den.lc)
                    num, den = num.scale(k), den.scale(k)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def F(self) -> FiniteField:
        return self.num.F

    @classmethod
    def const(cls, F: FiniteField, a: int) -> RatFunc:
        return cls(Poly(F, (a,)), _canonical_den(F), _canonical=True)

    @classmethod
    def from_int(cls, F: FiniteField, n: int) -> RatFunc:
        return cls.const(F, F.from_int(n))

    @classmethod
    def t(cls, F: FiniteField) -> RatFunc:
        return cls(Poly.x(F), _canonical_den(F), _canonical=True)

    def _lift(self, y):
        if isinstance(y, RatFunc):
            return y
        if isinstance(y, Poly):
            return RatFunc(y)
        if isinstance(y, int):
            return RatFunc.from_int(self.F, y)
        return NotImplemented

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_const(self) -> bool:
        return self.den.is_one() and self.num.deg <= 0

    def height(self) -> int:
        return max(self.num.deg, self.den.deg, 0)

    def __eq__(self, y) -> bool:
        y = self._lift(y)
        if y is NotImplemented:
            return NotImplemented
        return self.num == y.num and self.den == y.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def sort_key(self) -> tuple:
        return (self.height(), self.den.sort_key(), self.num.sort_key())

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.den == y.den:
            return RatFunc(self.num + y.num, self.den)
        return RatFunc(self.num * y.den + y.num * self.den, self.den * y.den)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self + (-y)

    def __rsub__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return y + (-self)

    def __mul__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if self.is_zero() or y.is_zero():
            return RatFunc(Poly(self.F), _canonical_den(self.F), _canonical=True)
        return RatFunc(self.num * y.num, self.den * y.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return self * y.inverse()

    def __rtruediv__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        return y * self.inverse()

    def __pow__(self, e: int) -> RatFunc:
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, _canonical=True)

    # -- transformations ----------------------------------------------------

    def compose_power(self, k: int) -> RatFunc:
        """Substitute ``t -> t^k`` (stays canonical)."""
        return RatFunc(self.num.compose_power(k), self.den.compose_power(k), _canonical=True)

    def frobenius_coeffs(self, k: int = 1) -> RatFunc:
        """Apply the ``k``-th power of Frobenius to every coefficient."""
        return RatFunc(self.num.frobenius_coeffs(k), self.den.frobenius_coeffs(k), _canonical=True)

    def invert_variable(self) -> RatFunc:
        """Image under the field automorphism ``t -> 1/t``."""
        n, d = self.num, self.den
        if n.is_zero():
            return self
        e = max(n.deg, d.deg)
        rn = Poly(n.F, tuple(reversed(n.c + (0,) * (e - n.deg))))
        rd = Poly(n.F, tuple(reversed(d.c + (0,) * (e - d.deg))))
        return RatFunc(rn, rd)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        from .literals import format_ratfunc

        return format_ratfunc(self)


def _canonical_den(F: FiniteField) -> Poly:
    return Poly(F, (1,))
