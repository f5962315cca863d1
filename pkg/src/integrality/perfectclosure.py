"""The perfect closure ``K = F_q(t, t^(1/p), t^(1/p^2), ...)`` for odd ``p``
and the diophantine definition of ``{x in K : ord_p x >= 0}``.

An element at level ``i`` is a rational function of ``s = t^(1/p^i)``. Local
questions are pushed down to ``F_q(t)`` through ``x -> x^(p^i)``, which maps
level ``i`` to level 0: valuations scale by ``p^i``, residues are raised to
the ``p^i``-th power (a bijection of the residue field), and square classes
are preserved because ``p^i`` is odd.

For two finite places ``p1, p2`` and ``D = H(a, b)`` ramified exactly there,
``T`` is the set of ``x1`` for which ``nr(x1 a1 + ... + x4 a4) = 1`` is
solvable in ``K``, with ``a1 = 1, a2, a3, a4`` a trace-normalised basis of the
maximal order over ``O = R_p1 cap R_p2``. Membership is decided by

    x1 in T  iff  x1 = +-1, or x1^2 - 1 is a nonsquare at p1 and at p2

(nonsquare at a place forces ``x1`` to be integral there). The union of
``T + alpha_ij`` over residue pairs ``(i, j)`` is ``O^perf``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .diophdef import (
    And,
    DefinitionError,
    Eq,
    Exists,
    MPoly,
    Or,
    _modulus_digits,
    formula_from_json,
    formula_to_json,
)
from .exactalg import (
    FiniteField,
    LiteralError,
    Poly,
    RatFunc,
    find_nonsquare_shift,
    format_ratfunc,
    parse_ratfunc,
    polys_up_to,
)
from .orders import is_integral_at, maximal_order
from .places import (
    FunctionField,
    Place,
    PlaceError,
    Target,
    approximate,
    helper_places,
    is_local_square,
    lift_residue,
    ord,
    parse_field,
    parse_place,
    residue_field,
)
from .places import _residue_raw
from .quaternion import QuatAlgebra, reduced_norm, reduced_trace
from .symbols import find_ramified_algebra, ram_set

SCHEMA_NAME = "integrality/perf-definition"
SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# elements


class PerfElement:
    """``rep(s)`` with ``s = t^(1/p^level)``, stored at the least level."""

    __slots__ = ("level", "rep")

    def __init__(self, level: int, rep: RatFunc):
        if level < 0:
            raise ValueError("level must be nonnegative")
        while level > 0 and rep.num.is_pth_power_pattern() and rep.den.is_pth_power_pattern():
            rep = RatFunc(rep.num.contract_p(), rep.den.contract_p(), _canonical=True)
            level -= 1
        self.level = level
        self.rep = rep

    @property
    def F(self) -> FiniteField:
        return self.rep.F

    @classmethod
    def base(cls, x: RatFunc) -> PerfElement:
        return cls(0, x)

    @classmethod
    def const(cls, F: FiniteField, n: int) -> PerfElement:
        return cls(0, RatFunc.from_int(F, n))

    def at_level(self, level: int) -> RatFunc:
        """The representative as a function of ``t^(1/p^level)``."""
        if level < self.level:
            raise ValueError("cannot lower the level of an element")
        return self.rep.compose_power(self.F.p ** (level - self.level))

    def _coerce(self, y) -> PerfElement:
        if isinstance(y, PerfElement):
            return y
        if isinstance(y, RatFunc):
            return PerfElement(0, y)
        if isinstance(y, int):
            return PerfElement(0, RatFunc.from_int(self.F, y))
        return NotImplemented

    def _binop(self, y, op) -> PerfElement:
        y = self._coerce(y)
        if y is NotImplemented:
            return y
        n = max(self.level, y.level)
        return PerfElement(n, op(self.at_level(n), y.at_level(n)))

    def __add__(self, y):
        return self._binop(y, lambda u, v: u + v)

    __radd__ = __add__

    def __sub__(self, y):
        return self._binop(y, lambda u, v: u - v)

    def __rsub__(self, y):
        return self._binop(y, lambda u, v: v - u)

    def __mul__(self, y):
        return self._binop(y, lambda u, v: u * v)

    __rmul__ = __mul__

    def __truediv__(self, y):
        return self._binop(y, lambda u, v: u / v)

    def __rtruediv__(self, y):
        return self._binop(y, lambda u, v: v / u)

    def __neg__(self) -> PerfElement:
        return PerfElement(self.level, -self.rep)

    def __pow__(self, e: int) -> PerfElement:
        return PerfElement(self.level, self.rep ** e)

    def __bool__(self) -> bool:
        return not self.rep.is_zero()

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, y) -> bool:
        y = self._coerce(y) if not isinstance(y, PerfElement) else y
        if y is NotImplemented:
            return False
        return self.level == y.level and self.rep == y.rep

    def __hash__(self) -> int:
        return hash((self.level, self.rep))

    def sort_key(self) -> tuple:
        return (self.level, self.rep.sort_key())

    def frobenius_image(self) -> RatFunc:
        """``x^(p^level)`` as an element of ``F_q(t)``."""
        return self.rep.frobenius_coeffs(self.level)

    def __repr__(self) -> str:
        return f"PerfElement({self})"

    def __str__(self) -> str:
        return format_perf(self)


def format_perf(x: PerfElement) -> str:
    if x.level == 0:
        return format_ratfunc(x.rep, "t")
    return f"level={x.level}; {format_ratfunc(x.rep, 's')}"


_LEVEL = re.compile(r"\s*level\s*=\s*(\d+)\s*;(.*)$", re.S)


def parse_perf(text: str, F: FiniteField) -> PerfElement:
    """``level=2; (s^4+1)/(s^3+2)`` (``s = t^(1/p^2)``) or a plain ``t`` literal."""
    m = _LEVEL.match(text)
    if m is None:
        return PerfElement(0, parse_ratfunc(text, F, "t"))
    level = int(m.group(1))
    body = m.group(2)
    offset = m.start(2)
    try:
        rep = parse_ratfunc(body, F, "s")
    except LiteralError as exc:
        raise LiteralError(str(exc).split(" at position")[0], text, exc.pos + offset) from None
    return PerfElement(level, rep)


def frobenius(x: PerfElement) -> PerfElement:
    """``x^p``."""
    return PerfElement(x.level, x.rep.frobenius_coeffs(1).compose_power(x.F.p))


def pth_root(x: PerfElement) -> PerfElement:
    """The unique ``y`` with ``y^p = x``."""
    return PerfElement(x.level + 1, x.rep.frobenius_coeffs(-1))


def level_place(v: Place, level: int) -> Place:
    """The place above ``v`` in ``F_q(t^(1/p^level))``: ``pi`` with its
    coefficients under the inverse Frobenius ``level`` times."""
    if v.kind != "finite":
        raise PlaceError("perfect-closure places must be finite")
    return Place.finite(v.pi.frobenius_coeffs(-level))


def ord_perf(v: Place, x: PerfElement) -> Fraction:
    """Valuation in ``Z[1/p]``, normalised to agree with ``v`` on ``F_q(t)``."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    return Fraction(ord(v, x.frobenius_image()), x.F.p ** x.level)


def residue_perf(v: Place, x: PerfElement) -> int:
    """Residue in ``k_v = F_q[t]/(pi)`` (encoded), for integral ``x``."""
    k = residue_field(v)
    r = _residue_raw(v, x.frobenius_image())
    return k.frobenius(r, -x.level)


def local_square_perf(v: Place, x: PerfElement) -> bool:
    """Square class test at the place above ``v``.

    Equivalent to: the numerator of ``ord_perf`` (odd denominator) is even
    and the unit part has square residue.
    """
    if x.is_zero():
        raise ValueError("zero is not a valid argument for the square-class test")
    if x.F.p == 2:
        raise PlaceError("characteristic 2 is not supported")
    return is_local_square(v, x.frobenius_image())


def enumerate_perf(field: FunctionField, bound: int, levels: int) -> Iterator[PerfElement]:
    """Elements whose least level is at most ``levels`` and whose
    representative at that level has height at most ``bound``."""
    from .harness import enumerate_elements

    for n in range(levels + 1):
        for rep in enumerate_elements(field, bound):
            x = PerfElement(n, rep)
            if x.level == n:
                yield x


# ---------------------------------------------------------------------------
# definition


def integral_basis(field: FunctionField, p1: Place, p2: Place, a, b) -> tuple:
    """Trace-normalised basis ``(1, a2, a3, a4)`` of the maximal order of
    ``H(a, b)`` over ``R_p1 cap R_p2``, as coordinate vectors."""
    if not (p1.is_finite and p2.is_finite):
        raise PlaceError("integral bases are computed at finite places")
    return maximal_order(field, a, b, [p1, p2]).basis


def norm_gram(alg: QuatAlgebra, basis: Sequence) -> tuple:
    """Upper-triangular coefficients ``N[k][l]`` with
    ``nr(sum x_k a_k) = sum_{k <= l} N[k][l] x_k x_l``."""
    els = [alg.element(v) for v in basis]
    n = len(els)
    zero = alg.zero
    N = [[zero] * n for _ in range(n)]
    for k in range(n):
        N[k][k] = reduced_norm(els[k])
    for k in range(n):
        for l in range(k + 1, n):
            N[k][l] = reduced_norm(els[k] + els[l]) - N[k][k] - N[l][l]
    return tuple(tuple(r) for r in N)


@dataclass(frozen=True)
class PerfCopy:
    """``O^perf`` for the places ``(target, helper)``."""

    helper: Place
    a: RatFunc
    b: RatFunc
    basis: tuple
    gram: tuple
    shifts: tuple  # nonsquare-shift residues (encoded) at target and helper
    shift_element: RatFunc  # congruent to the shifts
    alphas: tuple  # ((i, j, alpha), ...) over all residue pairs

    def alpha(self, i: int, j: int) -> RatFunc:
        return self._table[(i, j)]

    @property
    def _table(self) -> dict:
        t = self.__dict__.get("_alpha_table")
        if t is None:
            t = {(i, j): al for i, j, al in self.alphas}
            object.__setattr__(self, "_alpha_table", t)
        return t


@dataclass
class PerfIntegralityDefinition:
    field: FunctionField
    target: Place
    helpers: tuple
    copies: tuple
    _formula: object = dc_field(default=None, repr=False, compare=False)

    @property
    def formula(self):
        if self._formula is None:
            self._formula = emit_perf_formula(self)
        return self._formula


def _residue_lift(field, v, r) -> RatFunc:
    return lift_residue(field, v, r)


def build_perf_copy(field: FunctionField, target: Place, helper: Place, ram_bound: int | None = None) -> PerfCopy:
    a, b = find_ramified_algebra(field, target, helper, ram_bound)
    basis = integral_basis(field, target, helper, a, b)
    alg = QuatAlgebra(a, b)
    gram = norm_gram(alg, basis)
    k1, k2 = residue_field(target), residue_field(helper)
    s1, s2 = find_nonsquare_shift(k1).value, find_nonsquare_shift(k2).value
    shift_el = approximate(
        field,
        [Target.residue(target, _residue_lift(field, target, s1)), Target.residue(helper, _residue_lift(field, helper, s2))],
    )
    alphas = []
    for i in k1.elements():
        for j in k2.elements():
            al = approximate(
                field,
                [Target.residue(target, _residue_lift(field, target, i)), Target.residue(helper, _residue_lift(field, helper, j))],
            )
            alphas.append((i, j, al))
    return PerfCopy(helper, a, b, tuple(basis), gram, (s1, s2), shift_el, tuple(alphas))


def verify_perf_copy(field: FunctionField, target: Place, c: PerfCopy) -> None:
    """Re-check the invariants of one copy; raises AssertionError."""
    if ram_set(field, c.a, c.b).ram != tuple(sorted((target, c.helper))):
        raise AssertionError("algebra is not ramified exactly at the two places")
    alg = QuatAlgebra(c.a, c.b)
    els = [alg.element(v) for v in c.basis]
    if reduced_trace(els[0]) != field(2) or any(reduced_trace(e) for e in els[1:]):
        raise AssertionError("basis is not trace-normalised")
    for v in c.basis:
        if not is_integral_at(alg, v, [target, c.helper]):
            raise AssertionError("basis element is not integral")
    k1, k2 = residue_field(target), residue_field(c.helper)
    for k, s in ((k1, c.shifts[0]), (k2, c.shifts[1])):
        if k.chi(k.sub(k.mul(s, s), 1)) != -1:
            raise AssertionError("shift residue does not make a^2 - 1 a nonsquare")
    x = PerfElement.base(c.shift_element)
    if (residue_perf(target, x), residue_perf(c.helper, x)) != c.shifts:
        raise AssertionError("shift element has the wrong residues")
    if len(c.alphas) != k1.size * k2.size:
        raise AssertionError("shift table is incomplete")
    for i, j, al in c.alphas:
        y = PerfElement.base(al)
        if (residue_perf(target, y), residue_perf(c.helper, y)) != (i, j):
            raise AssertionError("alpha has the wrong residues")


def build_perf_definition(field: FunctionField, target: Place, ram_bound: int | None = None) -> PerfIntegralityDefinition:
    if not isinstance(field, FunctionField):
        raise PlaceError("the perfect closure is defined for F_q(t)")
    if field.characteristic == 2:
        raise PlaceError("the perfect-closure construction needs p > 2")
    if not target.is_finite:
        raise PlaceError(f"target place {target} must be finite (apply t -> 1/t first)")
    helpers = tuple(helper_places(field, [target], 2))
    copies = tuple(build_perf_copy(field, target, h, ram_bound) for h in helpers)
    for c in copies:
        verify_perf_copy(field, target, c)
    return PerfIntegralityDefinition(field, target, helpers, copies)


# ---------------------------------------------------------------------------
# membership


def t_perf_membership(defn: PerfIntegralityDefinition, x1: PerfElement, copy: int = 0) -> bool:
    """``x1 in T`` for the copy: integral at both places and either
    ``x1 = +-1`` or ``x1^2 - 1`` a nonsquare at both places."""
    c = defn.copies[copy]
    places = (defn.target, c.helper)
    if any(x1 and ord_perf(v, x1) < 0 for v in places):
        return False
    if x1 == 1 or x1 == -1:
        return True
    w = x1 * x1 - 1
    return all(not local_square_perf(v, w) for v in places)


def residue_pair(defn: PerfIntegralityDefinition, y: PerfElement, copy: int = 0):
    c = defn.copies[copy]
    out = []
    for v in (defn.target, c.helper):
        if y and ord_perf(v, y) < 0:
            return None
        out.append(residue_perf(v, y))
    return tuple(out)


@dataclass
class PerfCopyVerdict:
    element: PerfElement
    accepted: bool
    shift: tuple | None = None
    x1: PerfElement | None = None
    tried: int = 0


def operf_membership(defn: PerfIntegralityDefinition, y: PerfElement, copy: int = 0, detail: PerfCopyVerdict | None = None) -> bool:
    """``y in O^perf`` through ``union (T + alpha_ij)``, residue-matched shift first."""
    c = defn.copies[copy]
    k1, k2 = residue_field(defn.target), residue_field(c.helper)
    order = [(i, j) for i, j, _ in c.alphas]
    res = residue_pair(defn, y, copy)
    if res is not None:
        first = (k1.sub(res[0], c.shifts[0]), k2.sub(res[1], c.shifts[1]))
        order.remove(first)
        order.insert(0, first)
    tried = 0
    for i, j in order:
        tried += 1
        x1 = y - PerfElement.base(c.alpha(i, j))
        if t_perf_membership(defn, x1, copy):
            if detail is not None:
                detail.accepted, detail.shift, detail.x1, detail.tried = True, (i, j), x1, tried
            return True
    if detail is not None:
        detail.accepted, detail.tried = False, tried
    return False


@dataclass
class PerfDecideTrace:
    x: PerfElement
    y: PerfElement
    z: PerfElement
    verdicts: tuple


def split_perf(defn: PerfIntegralityDefinition, x: PerfElement) -> tuple[PerfElement, PerfElement]:
    """``x = y + z`` with ``y`` integral at ``p1, p2`` and ``x - y`` integral
    at ``p3``, computed at the level of ``x``."""
    n = x.level
    places = [level_place(v, n) for v in (defn.target, defn.helpers[0], defn.helpers[1])]
    yrep = approximate(
        defn.field,
        [Target.at_least(places[0], 0), Target.at_least(places[1], 0), Target.close(places[2], x.rep, 0)],
    )
    y = PerfElement(n, yrep)
    return y, x - y


def decide_perf(defn: PerfIntegralityDefinition, x: PerfElement) -> tuple[bool, PerfDecideTrace]:
    """``ord_p x >= 0`` decided through the definition only."""
    y, z = split_perf(defn, x)
    v1, v2 = PerfCopyVerdict(y, False), PerfCopyVerdict(z, False)
    ok1 = operf_membership(defn, y, 0, v1)
    ok2 = operf_membership(defn, z, 1, v2)
    return ok1 and ok2, PerfDecideTrace(x, y, z, (v1, v2))


def norm_in_basis(c: PerfCopy, xs: Sequence[PerfElement]) -> PerfElement:
    total = PerfElement.const(xs[0].F, 0)
    for k in range(4):
        for l in range(k, 4):
            g = c.gram[k][l]
            if g:
                total = total + PerfElement.base(g) * xs[k] * xs[l]
    return total


def perf_witness_search(defn: PerfIntegralityDefinition, x1: PerfElement, copy: int = 0, bound: int = 1, level: int = 1):
    """Search ``x2, x3, x4 = X_k / Z`` at ``level`` (``X_k, Z`` polynomials in
    ``s`` of degree at most ``bound``, ``Z`` monic) with
    ``nr(x1 + x2 a2 + x3 a3 + x4 a4) = 1``. Returns the triple or None.

    None is inconclusive. A diagonal norm form goes through the
    meet-in-the-middle search of :mod:`quadforms`; otherwise candidates are
    tried one by one.
    """
    c = defn.copies[copy]
    F = defn.field.F
    n = max(level, x1.level)
    e = F.p ** n
    zero = PerfElement.const(F, 0)
    # nr(x1 + y) = x1^2 + Q(y) for trace-zero y
    Q = [[c.gram[k][l].compose_power(e) if c.gram[k][l] else None for l in range(4)] for k in range(4)]
    rhs = (1 - x1 * x1).at_level(n)
    if rhs.is_zero():
        return (zero, zero, zero)
    if all(Q[k][l] is None for k in range(1, 4) for l in range(k + 1, 4)) and all(Q[k][k] for k in range(1, 4)):
        from .quadforms import DiagForm, witness_search

        Fs = FunctionField(F.size, "s")
        hit = witness_search(DiagForm(Fs, tuple(Q[k][k] for k in range(1, 4))), rhs, bound)
        return None if hit is None else tuple(PerfElement(n, v) for v in hit)
    vals = list(polys_up_to(F, bound))
    zs = [z for z in vals if not z.is_zero() and z.is_monic()]
    for z in zs:
        target = rhs * RatFunc(z * z)
        for X in product(vals, repeat=3):
            if not any(X):
                continue
            Xs = (None,) + tuple(RatFunc(v) for v in X)
            tot = RatFunc.const(F, 0)
            for k in range(1, 4):
                for l in range(k, 4):
                    if Q[k][l] is not None and Xs[k] and Xs[l]:
                        tot = tot + Q[k][l] * Xs[k] * Xs[l]
            if tot == target:
                return tuple(PerfElement(n, v / RatFunc(z)) for v in Xs[1:])
    return None


# ---------------------------------------------------------------------------
# formula and serialization


def _perf_copy_formula(c: PerfCopy, k: int, arg: str, F) -> object:
    one = PerfElement.const(F, 1)
    names = [f"x{m}_{k}" for m in range(1, 5)]
    xs = [MPoly.var(n, one) for n in names]
    nr = MPoly()
    for a in range(4):
        for b in range(a, 4):
            g = c.gram[a][b]
            if g:
                nr = nr + xs[a] * xs[b] * PerfElement.base(g)
    eq_norm = Eq(nr - MPoly.const(one))
    Y = MPoly.var(arg, one)
    shifts = Or(tuple(Eq(Y - xs[0] - MPoly.const(PerfElement.base(al))) for _, _, al in c.alphas))
    return Exists(tuple(names), And((eq_norm, shifts)))


def emit_perf_formula(defn: PerfIntegralityDefinition):
    F = defn.field.F
    one = PerfElement.const(F, 1)
    X, Y, Z = (MPoly.var(n, one) for n in ("x", "y", "z"))
    body = And(
        (Eq(X - Y - Z), _perf_copy_formula(defn.copies[0], 1, "y", F), _perf_copy_formula(defn.copies[1], 2, "z", F))
    )
    return Exists(("y", "z"), body)


def perf_witness_assignment(defn: PerfIntegralityDefinition, x: PerfElement, bound: int = 1, level: int = 1) -> dict | None:
    ok, tr = decide_perf(defn, x)
    if not ok:
        return None
    env = {"x": x, "y": tr.y, "z": tr.z}
    for k, v in enumerate(tr.verdicts, start=1):
        w = perf_witness_search(defn, v.x1, k - 1, bound, level)
        if w is None:
            return None
        env[f"x1_{k}"] = v.x1
        env[f"x2_{k}"], env[f"x3_{k}"], env[f"x4_{k}"] = w
    return env


def perf_definition_to_json(defn: PerfIntegralityDefinition) -> dict:
    f = defn.field
    cs = defn.copies

    def fmt_res(v, r):
        return f.fmt(lift_residue(f, v, r))

    places = [(defn.target, c.helper) for c in cs]
    return {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "field": f.name,
        "field_modulus": _modulus_digits(f),
        "target_place": str(defn.target),
        "helper_places": [str(h) for h in defn.helpers],
        "a": [f.fmt(c.a) for c in cs],
        "b": [f.fmt(c.b) for c in cs],
        "basis": [[[f.fmt(x) for x in vec] for vec in c.basis] for c in cs],
        "norm_gram": [[[f.fmt(x) for x in row] for row in c.gram] for c in cs],
        "nonsquare_shifts": [[fmt_res(v, s) for v, s in zip(pl, c.shifts)] for pl, c in zip(places, cs)],
        "shift_element": [f.fmt(c.shift_element) for c in cs],
        "alphas": [
            [[fmt_res(pl[0], i), fmt_res(pl[1], j), f.fmt(al)] for i, j, al in c.alphas] for pl, c in zip(places, cs)
        ],
        "formula": formula_to_json(defn.formula, str),
    }


def _residue_of_literal(field: FunctionField, v: Place, text: str) -> int:
    return _residue_raw(v, field.parse(text))


def perf_definition_from_json(doc: dict, verify: bool = True) -> PerfIntegralityDefinition:
    if doc.get("schema") != SCHEMA_NAME:
        raise DefinitionError("not a perfect-closure definition artifact")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DefinitionError(f"unsupported schema version {doc.get('schema_version')}")
    field = parse_field(doc["field"])
    if not isinstance(field, FunctionField):
        raise DefinitionError("perfect-closure definitions live over F_q(t)")
    if _modulus_digits(field) != doc.get("field_modulus"):
        raise DefinitionError("field modulus differs from this installation's model of F_q")
    target = parse_place(doc["target_place"], field)
    helpers = tuple(parse_place(h, field) for h in doc["helper_places"])
    copies = []
    for k, h in enumerate(helpers):
        P = field.parse
        basis = tuple(tuple(P(x) for x in vec) for vec in doc["basis"][k])
        gram = tuple(tuple(P(x) for x in row) for row in doc["norm_gram"][k])
        s1, s2 = doc["nonsquare_shifts"][k]
        shifts = (_residue_of_literal(field, target, s1), _residue_of_literal(field, h, s2))
        alphas = tuple(
            (_residue_of_literal(field, target, i), _residue_of_literal(field, h, j), P(al))
            for i, j, al in doc["alphas"][k]
        )
        copies.append(PerfCopy(h, P(doc["a"][k]), P(doc["b"][k]), basis, gram, shifts, P(doc["shift_element"][k]), alphas))
    formula = formula_from_json(doc["formula"], lambda s: parse_perf(s, field.F))
    defn = PerfIntegralityDefinition(field, target, helpers, tuple(copies), formula)
    if verify:
        for c in defn.copies:
            verify_perf_copy(field, target, c)
            alg = QuatAlgebra(c.a, c.b)
            if norm_gram(alg, c.basis) != c.gram:
                raise DefinitionError("stored norm coefficients do not match the basis")
        if formula_to_json(emit_perf_formula(defn), str) != doc["formula"]:
            raise DefinitionError("stored formula does not match the stored data")
    return defn


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
