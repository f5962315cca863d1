"""Finite fields F_p, F_{p^m} and towers of them.

Elements are encoded as plain ints in ``range(field.size)``: the base-``q``
digits of the integer are the coefficients (low degree first) of the
representing polynomial over the base field. The prime field encodes
residues ``0..p-1`` directly. :class:`FFElem` wraps an encoded value
together with its field for operator-style use.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise ``ValueError``."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


class FiniteField:
    """A finite field, either prime or a simple extension of another finite field.

    ``modulus`` is the monic defining polynomial over ``base`` as a tuple of
    encoded base elements, low degree first (``None`` for a prime field).
    """

    def __init__(self, p: int, base: FiniteField | None = None, modulus: tuple[int, ...] | None = None):
        if base is None:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            self.p = p
            self.base = None
            self.modulus = None
            self.degree = 1
            self.m = 1
            self.size = p
        else:
            if modulus is None or len(modulus) < 2 or modulus[-1] != 1:
                raise ValueError("extension modulus must be monic of degree >= 1")
            self.p = base.p
            self.base = base
            self.modulus = tuple(modulus)
            self.degree = len(modulus) - 1
            self.m = base.m * self.degree
            self.size = base.size ** self.degree
        self._mul_cache: dict[tuple[int, int], int] = {}
        self._inv_cache: dict[int, int] = {}

    # -- identity ---------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.base is None

    def __repr__(self) -> str:
        if self.base is None:
            return f"F_{self.p}"
        return f"F_{self.size}[{self.base!r}/{self.modulus}]"

    def key(self) -> tuple:
        if self.base is None:
            return (self.p,)
        return (self.base.key(), self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    # -- encoding ----------------------------------------------------------

    def digits(self, x: int) -> tuple[int, ...]:
        """Coefficient tuple (length ``degree``) of ``x`` over the base field."""
        q = self.base.size
        out = []
        for _ in range(self.degree):
            x, r = divmod(x, q)
            out.append(r)
        return tuple(out)

    def from_digits(self, ds) -> int:
        q = self.base.size
        x = 0
        for d in reversed(tuple(ds)):
            x = x * q + d
        return x

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` (through the prime subfield)."""
        return n % self.p

    def elements(self) -> range:
        return range(self.size)

    def elem(self, x: int) -> FFElem:
        return FFElem(self, x % self.size if self.base is None else x)

    # -- arithmetic on encoded ints ----------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.base is None:
            return (x + y) % self.p
        if self.p == self.size:
            return (x + y) % self.p
        b = self.base
        return self.from_digits(b.add(u, v) for u, v in zip(self.digits(x), self.digits(y)))

    def neg(self, x: int) -> int:
        if self.base is None:
            return -x % self.p
        b = self.base
        return self.from_digits(b.neg(u) for u in self.digits(x))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.base is None:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        if x == 1:
            return y
        if y == 1:
            return x
        k = (x, y) if x <= y else (y, x)
        r = self._mul_cache.get(k)
        if r is None:
            r = self._mul_slow(x, y)
            self._mul_cache[k] = r
        return r

    def _mul_slow(self, x: int, y: int) -> int:
        b = self.base
        a, c = self.digits(x), self.digits(y)
        n = self.degree
        prod_ = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, cj in enumerate(c):
                if cj:
                    prod_[i + j] = b.add(prod_[i + j], b.mul(ai, cj))
        mod = self.modulus
        for k in range(len(prod_) - 1, n - 1, -1):
            lead = prod_[k]
            if lead:
                for i in range(n):
                    prod_[k - n + i] = b.sub(prod_[k - n + i], b.mul(lead, mod[i]))
                prod_[k] = 0
        return self.from_digits(prod_[:n])

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.base is None:
            return pow(x, -1, self.p)
        r = self._inv_cache.get(x)
        if r is None:
            r = self.pow(x, self.size - 2)
            self._inv_cache[x] = r
        return r

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def frobenius(self, x: int, k: int = 1) -> int:
        """``x -> x^(p^k)``; negative ``k`` applies the inverse automorphism."""
        k %= self.m
        return self.pow(x, self.p ** k) if k else x

    def pth_root(self, x: int) -> int:
        return self.frobenius(x, -1)

    def chi(self, x: int) -> int:
        """Quadratic character with values in {1, -1, 0}."""
        if self.p == 2:
            raise ValueError("quadratic character undefined in characteristic 2")
        if x == 0:
            return 0
        r = self.pow(x, (self.size - 1) // 2)
        return 1 if r == 1 else -1

    def is_square(self, x: int) -> bool:
        if self.p == 2:
            return True
        return self.chi(x) >= 0

    def sqrt(self, x: int) -> int | None:
        """Some square root of ``x`` (deterministic, by search), or ``None``."""
        if self.p != 2 and self.chi(x) < 0:
            return None
        for y in range(self.size):
            if self.mul(y, y) == x:
                return y
        return None


def first_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``m`` over F_p in lexicographic order."""
    base = FiniteField(p)
    for tail in product(range(p), repeat=m):
        coeffs = tuple(reversed(tail)) + (1,)
        if m == 1 or _irreducible_small(base, coeffs):
            return coeffs
    raise AssertionError("no irreducible found")  # pragma: no cover


def _irreducible_small(base: FiniteField, coeffs: tuple[int, ...]) -> bool:
    from .poly import Poly, is_irreducible

    return is_irreducible(Poly(base, coeffs))


@lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    """The field with ``q`` elements; ``F_{p^m}`` uses the first irreducible modulus."""
    p, m = prime_power(q)
    prime = _prime_field(p)
    if m == 1:
        return prime
    return FiniteField(p, prime, first_irreducible(p, m))


@lru_cache(maxsize=None)
def _prime_field(p: int) -> FiniteField:
    return FiniteField(p)


class FFElem:
    """Finite field element with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        if not 0 <= value < field.size:
            raise ValueError(f"{value} is not an encoded element of {field!r}")
        self.field = field
        self.value = value

    def _other(self, y) -> int:
        if isinstance(y, FFElem):
            if y.field != self.field:
                raise ValueError("operands lie in different finite fields")
            return y.value
        if isinstance(y, int):
            return self.field.from_int(y)
        return NotImplemented

    def _wrap(self, v: int) -> FFElem:
        return FFElem(self.field, v)

    def __add__(self, y):
        v = self._other(y)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, y):
        v = self._other(y)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.sub(self.value, v))

    def __rsub__(self, y):
        v = self._other(y)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.sub(v, self.value))

    def __mul__(self, y):
        v = self._other(y)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, y):
        v = self._other(y)
        return NotImplemented if v is NotImplemented else self._wrap(self.field.div(self.value, v))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> FFElem:
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, y) -> bool:
        if isinstance(y, FFElem):
            return self.field == y.field and self.value == y.value
        if isinstance(y, int):
            return self.value == self.field.from_int(y)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.key(), self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FFElem({self.field!r}, {self.value})"

    def __str__(self) -> str:
        return str(self.value)


def ff_arith(x: FFElem, y: FFElem | None, op: str) -> FFElem:
    """Dispatch ``op`` in {'add', 'mul', 'inv', 'neg'} on field elements."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "neg":
        return -x
    raise ValueError(f"unknown operation {op!r}")


def _as_value(F: FiniteField, u) -> int:
    if isinstance(u, FFElem):
        if u.field != F:
            raise ValueError("element does not belong to this field")
        return u.value
    return u


def quadratic_character(F: FiniteField, u) -> int:
    """``u^((q-1)/2)`` read in {1, -1, 0}. Raises in characteristic 2."""
    return F.chi(_as_value(F, u))


def find_nonsquare_shift(F: FiniteField) -> FFElem:
    """First ``a`` (in encoding order) such that ``a^2 - 1`` is a nonsquare."""
    if F.p == 2:
        raise ValueError("characteristic 2 has no nonsquares")
    one = 1
    for a in F.elements():
        if F.chi(F.sub(F.mul(a, a), one)) == -1:
            return F.elem(a)
    raise AssertionError(f"no nonsquare shift in {F!r}")  # pragma: no cover


def count_squares(F: FiniteField) -> int:
    """Number of squares in F, zero included."""
    return len({F.mul(x, x) for x in F.elements()})
