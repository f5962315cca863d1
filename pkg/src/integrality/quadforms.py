"""Diagonal quadratic forms: local isotropy, representation, and the
local-global decision over ``F_q(t)`` (odd ``q``) and ``Q``.

Local invariants follow Serre's normalisation: for ``f = <c_1, ..., c_n>``
the discriminant is ``d = c_1 ... c_n`` and the Hasse symbol is
``eps = prod_{i<j} (c_i, c_j)_v``. Then, over a local field of
characteristic not 2,

* rank 2 is isotropic iff ``-d`` is a square,
* rank 3 is isotropic iff ``(-1, -d)_v == eps``,
* rank 4 is isotropic unless ``d`` is a square and ``eps == -(-1, -1)_v``,
* rank >= 5 is always isotropic at nonarchimedean places.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exactalg import Poly, RatFunc, poly_gcd, polys_up_to
from .places import (
    Element,
    FieldSpec,
    FunctionField,
    Place,
    PlaceError,
    Rationals,
    bad_places,
    is_local_square,
)
from .symbols import hilbert_symbol


@dataclass(frozen=True)
class DiagForm:
    field: FieldSpec
    coeffs: tuple

    def __post_init__(self):
        if any(not c for c in self.coeffs):
            raise ValueError("diagonal form coefficients must be nonzero")

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def __call__(self, xs: Sequence) -> Element:
        if len(xs) != self.rank:
            raise ValueError("wrong number of variables")
        out = self.field.zero()
        for c, x in zip(self.coeffs, xs):
            out = out + c * x * x
        return out

    def orthogonal_sum(self, other: Iterable) -> DiagForm:
        return DiagForm(self.field, self.coeffs + tuple(other))

    def discriminant(self) -> Element:
        d = self.field.one()
        for c in self.coeffs:
            d = d * c
        return d


def hasse_symbol(v: Place, f: DiagForm) -> int:
    eps = 1
    cs = f.coeffs
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            eps *= hilbert_symbol(v, cs[i], cs[j])
    return eps


def local_isotropic(v: Place, f: DiagForm) -> bool:
    """Whether ``f`` has a nontrivial zero over the completion at ``v``."""
    n = f.rank
    if v.kind == "real":
        signs = {Fraction(c) > 0 for c in f.coeffs}
        return n >= 2 and len(signs) == 2
    if n <= 1:
        return False
    if n >= 5:
        return True
    d = f.discriminant()
    if n == 2:
        return is_local_square(v, -d)
    minus_one = f.field(-1)
    eps = hasse_symbol(v, f)
    if n == 3:
        return hilbert_symbol(v, minus_one, -d) == eps
    if not is_local_square(v, d):
        return True
    return eps == hilbert_symbol(v, minus_one, minus_one)


def local_represents(v: Place, f: DiagForm, c: Element) -> bool:
    """``f`` represents the nonzero ``c`` over the completion at ``v``."""
    if not c:
        raise ValueError("representation of zero is handled by local_isotropic")
    return local_isotropic(v, f.orthogonal_sum([-c]))


def global_represents(f: DiagForm, c: Element, first: Sequence[Place] = (), trace: list | None = None) -> bool:
    """Hasse-Minkowski: ``f`` represents ``c`` over the global field iff it
    does so at every place in the finite bad set; elsewhere all
    coefficients are units at an odd place and rank >= 3 forms are universal.

    ``first`` lists places to examine before the rest (evaluation order only);
    ``trace``, when given, collects ``(place, verdict)`` pairs.
    """
    if not c:
        raise ValueError("representation of zero is handled by local_isotropic")
    if f.rank > 3:
        raise ValueError("global_represents handles forms of rank <= 3")
    if f.rank == 1:
        return _global_square(f.field, c / f.coeffs[0])
    g = f.orthogonal_sum([-c])
    checked = set()
    for v in first:
        checked.add(v)
        ok = local_isotropic(v, g)
        if trace is not None:
            trace.append((v, ok))
        if not ok:
            return False
    rest = bad_places(f.field, *f.coeffs, c)
    for v in rest:
        if v in checked:
            continue
        ok = local_isotropic(v, g)
        if trace is not None:
            trace.append((v, ok))
        if not ok:
            return False
    return True


def _global_square(field: FieldSpec, x: Element) -> bool:
    if isinstance(field, Rationals):
        x = Fraction(x)
        if x < 0:
            return False
        from math import isqrt

        n, d = x.numerator, x.denominator
        return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d
    return ratfunc_sqrt(x) is not None


def ratfunc_sqrt(x: RatFunc) -> RatFunc | None:
    from .exactalg import poly_sqrt

    if x.is_zero():
        return x
    n = poly_sqrt(x.num)
    d = poly_sqrt(x.den)
    if n is None or d is None:
        return None
    return RatFunc(n, d)


# ---------------------------------------------------------------------------
# witness search


def _clear_denominators(field: FieldSpec, coeffs: Sequence[Element]) -> list:
    """Integral multiples (polynomials / ints) of the coefficients by a common factor."""
    if isinstance(field, Rationals):
        from math import lcm

        L = 1
        for c in coeffs:
            L = lcm(L, Fraction(c).denominator)
        return [int(Fraction(c) * L) for c in coeffs]
    L = Poly(field.F, (1,))
    for c in coeffs:
        L = L * c.den // poly_gcd(L, c.den)
    out = []
    for c in coeffs:
        w = c * RatFunc(L)
        out.append(w.num)
    return out


def _small_values(field: FieldSpec, bound: int) -> list:
    if isinstance(field, Rationals):
        vals = [0]
        for n in range(1, bound + 1):
            vals += [n, -n]
        return vals
    return list(polys_up_to(field.F, bound))


def witness_search(f: DiagForm, c: Element, bound: int):
    """Search for ``x`` with ``f(x) = c``.

    Candidates are ``x_i = X_i / Z`` with integral ``X_i, Z`` of height at most
    ``bound`` (degree for ``F_q(t)``, absolute value for ``Q``) and ``Z``
    nonzero, normalised (monic / positive). For ``c == 0`` only ``Z = 1`` and
    nonzero ``x`` are used. Meet-in-the-middle on
    ``sum c_i X_i^2 = c Z^2``; returns the first hit in enumeration order,
    or ``None``. ``None`` is inconclusive.
    """
    field = f.field
    homog = bool(c)
    cs = _clear_denominators(field, list(f.coeffs) + ([c] if homog else []))
    vals = _small_values(field, bound)
    n = f.rank
    if homog:
        if isinstance(field, Rationals):
            zvals = [z for z in vals if z > 0]
        else:
            zvals = [z for z in vals if z.is_monic()]
    else:
        zvals = [None]
    sq = [v * v for v in vals]
    left_n = (n + 1) // 2
    key = _key(field)

    left: dict = {}
    for idx in product(range(len(vals)), repeat=left_n):
        s = _zero_like(field)
        for k, m in enumerate(idx):
            s = s + cs[k] * sq[m]
        left.setdefault(key(s), []).append(idx)
    for z in zvals:
        zz = cs[n] * z * z if homog else _zero_like(field)
        for idx in product(range(len(vals)), repeat=n - left_n):
            s = zz
            for k, m in enumerate(idx):
                s = s - cs[left_n + k] * sq[m]
            for hit in left.get(key(s), ()):
                X = [vals[m] for m in hit + idx]
                if not homog and not any(X):
                    continue
                zden = _to_field(field, z) if homog else field.one()
                xs = [_to_field(field, x) / zden for x in X]
                if f(xs) == (c if homog else field.zero()):
                    return xs
    return None


def _zero_like(field: FieldSpec):
    if isinstance(field, Rationals):
        return 0
    return Poly(field.F)


def _key(field: FieldSpec):
    if isinstance(field, Rationals):
        return lambda s: s
    return lambda s: s.c


def _to_field(field: FieldSpec, x) -> Element:
    if isinstance(field, Rationals):
        return Fraction(x)
    return RatFunc(x)
