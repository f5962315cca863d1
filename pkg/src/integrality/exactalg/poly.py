"""Univariate polynomials over finite fields, plus the usual toolkit.

Coefficients are encoded field elements (ints, see :mod:`finite_field`),
stored low degree first with no trailing zeros. The zero polynomial has the
empty tuple and degree ``-1``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from .finite_field import FiniteField


class Poly:
    __slots__ = ("F", "c", "_hash")

    def __init__(self, F: FiniteField, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.c = tuple(c)
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def const(cls, F: FiniteField, a: int) -> Poly:
        return cls(F, (a,))

    @classmethod
    def x(cls, F: FiniteField) -> Poly:
        return cls(F, (0, 1))

    @classmethod
    def monomial(cls, F: FiniteField, n: int, a: int = 1) -> Poly:
        return cls(F, (0,) * n + (a,))

    def _lift(self, y) -> Poly:
        if isinstance(y, Poly):
            if y.F is not self.F and y.F != self.F:
                raise ValueError("polynomials over different fields")
            return y
        if isinstance(y, int):
            return Poly(self.F, (self.F.from_int(y),))
        return NotImplemented

    # -- basic data ----------------------------------------------------------

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, y) -> bool:
        if isinstance(y, Poly):
            return self.c == y.c and self.F == y.F
        if isinstance(y, int):
            return self.c == Poly(self.F, (self.F.from_int(y),)).c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.F.key(), self.c))
        return self._hash

    def sort_key(self) -> tuple:
        return (self.deg, tuple(reversed(self.c)))

    def __lt__(self, y: Poly) -> bool:
        return self.sort_key() < y.sort_key()

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        from .literals import format_poly

        return format_poly(self)

    # -- ring operations -----------------------------------------------------

    def __add__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        F = self.F
        a, b = self.c, y.c
        if len(a) < len(b):
            a, b = b, a
        if F.base is None:
            p = F.p
            out = [(u + v) % p for u, v in zip(a, b)] + list(a[len(b):])
        else:
            out = [F.add(u, v) for u, v in zip(a, b)] + list(a[len(b):])
        return Poly(F, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        F = self.F
        return Poly(F, [F.neg(u) for u in self.c])

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
        a, b = self.c, y.c
        if not a or not b:
            return Poly(self.F)
        F = self.F
        out = [0] * (len(a) + len(b) - 1)
        if F.base is None:
            p = F.p
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] += ai * bj
            return Poly(F, [v % p for v in out])
        add, mul = F.add, F.mul
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, a: int) -> Poly:
        F = self.F
        return Poly(F, [F.mul(a, u) for u in self.c])

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly(self.F, (1,))
        x = self
        while e:
            if e & 1:
                r = r * x
            x = x * x
            e >>= 1
        return r

    def __divmod__(self, y):
        y = self._lift(y)
        if y is NotImplemented:
            return y
        if not y.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(self.c)
        n = len(y.c) - 1
        if len(r) <= n:
            return Poly(F), self
        inv_lc = F.inv(y.c[-1])
        qt = [0] * (len(r) - n)
        yc = y.c
        if F.base is None:
            p = F.p
            for k in range(len(r) - 1, n - 1, -1):
                coef = r[k] * inv_lc % p
                if coef:
                    qt[k - n] = coef
                    for i in range(n + 1):
                        r[k - n + i] = (r[k - n + i] - coef * yc[i]) % p
        else:
            for k in range(len(r) - 1, n - 1, -1):
                coef = F.mul(r[k], inv_lc)
                if coef:
                    qt[k - n] = coef
                    for i in range(n + 1):
                        r[k - n + i] = F.sub(r[k - n + i], F.mul(coef, yc[i]))
        return Poly(F, qt), Poly(F, r[:n])

    def __floordiv__(self, y):
        return divmod(self, y)[0]

    def __mod__(self, y):
        return divmod(self, y)[1]

    def monic(self) -> Poly:
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def __call__(self, x: int) -> int:
        F = self.F
        r = 0
        for a in reversed(self.c):
            r = F.add(F.mul(r, x), a)
        return r

    def derivative(self) -> Poly:
        F = self.F
        return Poly(F, [F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:])

    def compose_power(self, k: int) -> Poly:
        """Substitute ``x -> x^k``."""
        out = [0] * (k * self.deg + 1) if self.c else []
        for i, a in enumerate(self.c):
            out[i * k] = a
        return Poly(self.F, out)

    def map_coeffs(self, fn) -> Poly:
        return Poly(self.F, [fn(a) for a in self.c])

    def frobenius_coeffs(self, k: int = 1) -> Poly:
        F = self.F
        return self.map_coeffs(lambda a: F.frobenius(a, k))

    def pow_mod(self, e: int, m: Poly) -> Poly:
        r = Poly(self.F, (1,))
        x = self % m
        while e:
            if e & 1:
                r = r * x % m
            x = x * x % m
            e >>= 1
        return r

    def is_pth_power_pattern(self) -> bool:
        p = self.F.p
        return all(a == 0 for i, a in enumerate(self.c) if i % p)

    def contract_p(self) -> Poly:
        """For ``f(x) = g(x^p)``, return ``g``."""
        p = self.F.p
        return Poly(self.F, self.c[::p])

    def valuation_at(self, pi: Poly) -> int:
        if not self.c:
            raise ValueError("valuation of the zero polynomial")
        v, f = 0, self
        while True:
            q, r = divmod(f, pi)
            if r.c:
                return v
            f, v = q, v + 1

    def split_at(self, pi: Poly) -> tuple[int, Poly]:
        """Return ``(v, u)`` with ``self = pi^v * u`` and ``pi`` not dividing ``u``."""
        if not self.c:
            raise ValueError("valuation of the zero polynomial")
        v, f = 0, self
        while True:
            q, r = divmod(f, pi)
            if r.c:
                return v, f
            f, v = q, v + 1


# -- gcd / crt --------------------------------------------------------------------


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` monic (or zero)."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly(F, (1,)), Poly(F)
    t0, t1 = Poly(F), Poly(F, (1,))
    while r1.c:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.c and r0.c[-1] != 1:
        k = F.inv(r0.c[-1])
        r0, s0, t0 = r0.scale(k), s0.scale(k), t0.scale(k)
    return r0, s0, t0


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b.c:
        a, b = b, a % b
    return a.monic()


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(a % m, m)
    if not g.is_one():
        raise ZeroDivisionError("polynomial not invertible modulo the given modulus")
    return s % m


def crt(residues: list[Poly], moduli: list[Poly]) -> Poly:
    """Unique ``x`` with ``deg x < deg(prod moduli)`` and ``x = r_i mod m_i``."""
    if len(residues) != len(moduli):
        raise ValueError("residues and moduli differ in length")
    F = moduli[0].F if moduli else None
    if F is None:
        raise ValueError("empty CRT system")
    x, M = Poly(F), Poly(F, (1,))
    for r, m in zip(residues, moduli):
        if m.deg < 0:
            raise ValueError("zero modulus")
        g, s, _ = xgcd(M, m)
        if not g.is_one():
            raise ValueError("CRT moduli are not coprime")
        # x' = x + M * s * (r - x)  (mod M*m)
        x = (x + M * ((s * (r - x)) % m)) % (M * m)
        M = M * m
    return x


# -- irreducibility and factorisation -------------------------------------------------


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Exact irreducibility test over the coefficient field.

    Degrees below 4 use the root criterion (degree 2, 3) directly; larger
    degrees use Rabin's test.
    """
    n = f.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    F = f.F
    if n <= 3:
        return all(f(a) != 0 for a in F.elements())
    q = F.size
    x = Poly.x(F)
    f = f.monic()
    if (x.pow_mod(q ** n, f) - x) % f:
        return False
    for r in _prime_divisors(n):
        h = x.pow_mod(q ** (n // r), f) - x
        if not poly_gcd(f, h).is_one():
            return False
    return True


def monic_polys(F: FiniteField, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree exactly ``d``, in lexicographic order."""
    for tail in product(range(F.size), repeat=d):
        yield Poly(F, tuple(reversed(tail)) + (1,))


def polys_up_to(F: FiniteField, d: int) -> Iterator[Poly]:
    """All polynomials of degree <= ``d`` (zero first), ordered by degree."""
    yield Poly(F)
    for n in range(d + 1):
        for lead in range(1, F.size):
            for tail in product(range(F.size), repeat=n):
                yield Poly(F, tuple(reversed(tail)) + (lead,))


def monic_irreducibles(F: FiniteField, d: int) -> Iterator[Poly]:
    for f in monic_polys(F, d):
        if is_irreducible(f):
            yield f


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree factors with multiplicities (Yun's algorithm, char p)."""
    F = f.F
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.deg <= 0:
        return out

    def rec(g: Poly, mult: int):
        i = 1
        d = g.derivative()
        if not d.c:
            root = g.contract_p().map_coeffs(F.pth_root)
            rec(root, mult * F.p)
            return
        c = poly_gcd(g, d)
        w = g // c
        while not w.is_one():
            y = poly_gcd(w, c)
            z = w // y
            if not z.is_one():
                out.append((z.monic(), i * mult))
            i += 1
            w, c = y, c // y
        if not c.is_one():
            root = c.contract_p().map_coeffs(F.pth_root)
            rec(root, mult * F.p)

    rec(f, 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    F = f.F
    q = F.size
    x = Poly.x(F)
    out = []
    h = x
    i = 0
    while f.deg >= 2 * (i + 1):
        i += 1
        h = h.pow_mod(q, f)
        g = poly_gcd(f, h - x)
        if not g.is_one():
            out.append((g, i))
            f = f // g
            h = h % f
    if f.deg > 0:
        out.append((f.monic(), f.deg))
    return out


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    F = f.F
    if f.deg == d:
        return [f.monic()]
    q = F.size
    while True:
        a = Poly(F, [rng.randrange(q) for _ in range(f.deg)])
        if a.deg < 1:
            continue
        if F.p == 2:
            # absolute trace map a + a^2 + ... + a^(2^(m d - 1))
            b, t = a % f, a % f
            for _ in range(F.m * d - 1):
                t = t * t % f
                b = b + t
        else:
            b = a.pow_mod((q ** d - 1) // 2, f) - 1
        g = poly_gcd(f, b)
        if 0 < g.deg < f.deg:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factorisation, sorted by (degree, coefficients)."""
    return list(_factor_cached(f.monic()))


@lru_cache(maxsize=65536)
def _factor_cached(f: Poly) -> tuple[tuple[Poly, int], ...]:
    if f.deg <= 0:
        return ()
    rng = random.Random(0x5EED)
    acc: dict[Poly, int] = {}
    for g, mult in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                acc[irr] = acc.get(irr, 0) + mult
    return tuple(sorted(acc.items(), key=lambda kv: kv[0].sort_key()))


def poly_sqrt(f: Poly) -> Poly | None:
    """Square root of ``f`` in F[x] if it is a square (odd characteristic)."""
    F = f.F
    if not f.c:
        return f
    if f.deg % 2:
        return None
    r = F.sqrt(f.lc)
    if r is None:
        return None
    # Newton-free: coefficient recursion from the top.
    n = f.deg // 2
    g = [0] * (n + 1)
    g[n] = r
    two_r_inv = F.inv(F.mul(2 % F.p, r))
    for k in range(n - 1, -1, -1):
        # coefficient of x^(n+k) in g^2 equals f_(n+k)
        s = 0
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                s = F.add(s, F.mul(g[i], g[j]))
        # 2 g_n g_k + sum_{i+j = n+k, k<i,j<n} g_i g_j = f_{n+k}
        g[k] = F.mul(F.sub(f.c[n + k], s), two_r_inv)
    cand = Poly(F, g)
    return cand if cand * cand == f else None
