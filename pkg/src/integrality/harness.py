"""Independent checks: element enumeration, a brute-force local solvability
oracle, and agreement sweeps with machine-readable reports."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .exactalg import Poly, RatFunc, inverse_mod, monic_polys, poly_gcd, polys_up_to
from .places import Element, FieldSpec, FunctionField, Place, PlaceError, ord

REPORT_SCHEMA = "integrality/sweep-report"
REPORT_VERSION = 1


# ---------------------------------------------------------------------------
# enumeration


def enumerate_elements(field: FieldSpec, bound: int) -> Iterator[Element]:
    """Every element of height at most ``bound`` exactly once, by height.

    Height is ``max(deg num, deg den)`` over ``F_q(t)`` and ``max(|num|, den)``
    over ``Q``.
    """
    if bound < 0:
        return
    if isinstance(field, FunctionField):
        yield from _enumerate_ratfuncs(field.F, bound)
    else:
        yield from _enumerate_rationals(bound)


def _enumerate_ratfuncs(F, bound: int) -> Iterator[RatFunc]:
    yield RatFunc(Poly(F), _canonical=False)
    for h in range(bound + 1):
        for dd in range(h + 1):
            for den in monic_polys(F, dd):
                for num in polys_up_to(F, h):
                    if num.is_zero() or max(num.deg, dd) != h:
                        continue
                    if not poly_gcd(num, den).is_one():
                        continue
                    yield RatFunc(num, den, _canonical=True)


def _enumerate_rationals(bound: int) -> Iterator[Fraction]:
    yield Fraction(0)
    for h in range(1, bound + 1):
        for d in range(1, h + 1):
            nums = [h] if d < h else list(range(1, h + 1))
            for n in nums:
                if math.gcd(n, d) == 1:
                    yield Fraction(n, d)
                    yield Fraction(-n, d)


def count_elements(field: FieldSpec, bound: int) -> int:
    return sum(1 for _ in enumerate_elements(field, bound))


# ---------------------------------------------------------------------------
# brute-force local oracle


class InsufficientPrecision(ValueError):
    """The requested precision cannot certify the verdict."""


class _Residues:
    """Arithmetic in ``O_v / pi^k`` for a finite place ``v``."""

    def __init__(self, v: Place, k: int):
        self.v, self.k = v, k
        if v.kind == "prime":
            self.mod = v.pi ** k
            self.digits = list(range(v.pi))
            self.powers = [v.pi ** j for j in range(k)]
        else:
            F = v.pi.F
            self.mod = v.pi ** k
            self.digits = list(polys_up_to(F, v.pi.deg - 1))
            self.powers = [v.pi ** j for j in range(k)]

    def reduce(self, x: Element):
        if self.v.kind == "prime":
            x = Fraction(x)
            return x.numerator * pow(x.denominator, -1, self.mod) % self.mod
        return x.num * inverse_mod(x.den, self.mod) % self.mod

    def zero(self):
        return 0 if self.v.kind == "prime" else Poly(self.v.pi.F)

    def one(self):
        return 1 if self.v.kind == "prime" else Poly(self.v.pi.F, (1,))

    def vanishes(self, x, j: int) -> bool:
        """``x == 0 mod pi^j``."""
        m = self.v.pi ** j
        r = x % m
        return r == 0 if self.v.kind == "prime" else r.is_zero()


def _to_finite(v: Place, xs: Sequence[Element]) -> tuple[Place, list]:
    """Move the infinite place of ``F_q(t)`` to ``(t)`` via ``t -> 1/t``."""
    if v.kind != "infinite":
        return v, list(xs)
    F = xs[0].F
    return Place.finite(Poly.x(F)), [x.invert_variable() for x in xs]


def _normalize(v: Place, coeffs: Sequence[Element]) -> tuple[list, int]:
    """Square-class representatives with valuations in {0, 1}, then a global
    division by ``pi`` if every valuation is odd. Returns (coeffs, max ord)."""
    from .places import uniformizer, field_of

    pi = uniformizer(field_of(coeffs[0]), v)
    out = []
    for c in coeffs:
        e = ord(v, c)
        shift = e - (e % 2)
        out.append(c / pi ** shift)
    if all(ord(v, c) == 1 for c in out):
        out = [c / pi for c in out]
    return out, max(ord(v, c) for c in out)


def required_precision(v: Place, coeffs: Sequence[Element]) -> int:
    """Precision at which primitive solutions certify isotropy."""
    v2, cs = _to_finite(v, coeffs)
    cs, m = _normalize(v2, cs)
    e2 = 1 if v2.residue_characteristic() == 2 else 0
    return 2 * (m + e2) + 1


def local_solvability_oracle(v: Place, coeffs: Sequence[Element], c: Element | None = None, precision: int | None = None) -> bool:
    """Brute-force decision whether ``sum coeffs[i] x_i^2 = c`` is solvable
    over the completion at ``v`` (nontrivially when ``c`` is zero or None).

    Coefficients are replaced by square-class representatives with valuation
    0 or 1. A primitive zero modulo ``pi^k`` with ``k = 2(m + ord_v 2) + 1``
    (``m`` the largest remaining valuation) lifts by Hensel's lemma through
    a unit coordinate, and every true primitive zero reduces to one, so the
    search below is exact. Smaller requested precisions are refused.
    """
    coeffs = list(coeffs)
    if any(not x for x in coeffs):
        raise ValueError("coefficients must be nonzero")
    if c is not None and c:
        coeffs.append(-c)
    if v.kind == "real":
        signs = {Fraction(x) > 0 for x in coeffs}
        return len(signs) == 2
    v2, cs = _to_finite(v, coeffs)
    if v2.kind == "finite" and v2.pi.F.p == 2:
        raise PlaceError("residue characteristic 2 is not supported for function fields")
    cs, m = _normalize(v2, cs)
    e2 = 1 if v2.residue_characteristic() == 2 else 0
    need = 2 * (m + e2) + 1
    if precision is None:
        precision = need
    if precision < need:
        raise InsufficientPrecision(f"precision {precision} < {need} needed at {v}")
    R = _Residues(v2, precision)
    red = [R.reduce(x) for x in cs]
    return _primitive_zero(R, red, precision)


def _primitive_zero(R: _Residues, coeffs: list, k: int) -> bool:
    n = len(coeffs)
    zero, one = R.zero(), R.one()
    for pivot in range(n):
        # x_pivot = 1; earlier coordinates are divisible by pi.
        free = [i for i in range(n) if i != pivot]

        def dfs(x: list, j: int) -> bool:
            if j == k:
                return True
            digits_for = []
            for i in free:
                if i < pivot and j == 0:
                    digits_for.append([zero])
                else:
                    digits_for.append(R.digits)
            pj = R.powers[j]
            for ds in product(*digits_for):
                y = list(x)
                for i, d in zip(free, ds):
                    if d:
                        y[i] = y[i] + d * pj
                val = zero
                for cc, yi in zip(coeffs, y):
                    val = val + cc * yi * yi
                if R.vanishes(val, j + 1) and dfs(y, j + 1):
                    return True
            return False

        start = [zero] * n
        start[pivot] = one
        if dfs(start, 0):
            return True
    return False


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepReport:
    config: dict
    tested: int = 0
    agreed: int = 0
    disagreed: int = 0
    disagreements: list = dc_field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.disagreed == 0 and self.tested == self.agreed

    def to_json(self) -> dict:
        """Serializable form. Wall time is left out so reruns are byte-identical."""
        return {
            "schema": REPORT_SCHEMA,
            "schema_version": REPORT_VERSION,
            "config": self.config,
            "counts": {"tested": self.tested, "agreed": self.agreed, "disagreed": self.disagreed},
            "disagreements": self.disagreements,
            "passed": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"


def agreement_sweep(defn, bound: int, levels: int = 0) -> SweepReport:
    """Compare the definition's verdict with the direct valuation test on
    every element of height at most ``bound`` (and level at most ``levels``
    for the perfect closure)."""
    from .diophdef import IntegralityDefinition, decide
    from .perfectclosure import PerfIntegralityDefinition, decide_perf, enumerate_perf, ord_perf

    start = time.perf_counter()
    if isinstance(defn, IntegralityDefinition):
        field = defn.field
        config = {"kind": "global", "field": field.name, "place": str(defn.target), "bound": bound}
        report = SweepReport(config)
        for x in enumerate_elements(field, bound):
            got, _ = decide(defn, x)
            want = ord(defn.target, x) >= 0
            _tally(report, got, want, field.fmt(x))
    elif isinstance(defn, PerfIntegralityDefinition):
        config = {
            "kind": "perfect",
            "field": defn.field.name,
            "place": str(defn.target),
            "bound": bound,
            "levels": levels,
        }
        report = SweepReport(config)
        for x in enumerate_perf(defn.field, bound, levels):
            got, _ = decide_perf(defn, x)
            want = x.is_zero() or ord_perf(defn.target, x) >= 0
            _tally(report, got, want, str(x))
    else:
        raise TypeError("expected a built definition")
    report.wall_time = time.perf_counter() - start
    return report


def _tally(report: SweepReport, got: bool, want: bool, label: str) -> None:
    report.tested += 1
    if got == want:
        report.agreed += 1
    else:
        report.disagreed += 1
        report.disagreements.append({"element": label, "definition": got, "valuation": want})
