"""Diophantine definition of the valuation ring ``R_p = {x : ord_p x >= 0}``
over ``F_q(t)`` (``q`` odd) and ``Q``.

Data for one copy (target ``p`` and helper ``h``):

* ``p, q`` with ``ord_p p = 1, ord_h p = 0, ord_p q = 0, ord_h q = 1``;
* ``H(a, b)`` ramified exactly at ``{p, h}``;
* ``r`` with ``pi^r A_v`` inside the standard order at ``v in {p, h}``;
* ``T = {x1 : x1^2 - a x2^2 - b x3^2 + ab x4^2 = pq solvable}``,
  ``S = (pq)^r T`` and coset representatives of
  ``G = p^(r+1) R_p  cap  q^(r+1) R_h`` in ``R_p cap R_h``.

Then ``x in R_p cap R_h`` iff ``x - s_i in S`` for some ``i``, and
``R_p = (R_p cap R_q) + (R_p cap R_l)`` joins two copies.

Membership in ``T`` is decided by Hasse-Minkowski: ``x1`` is in ``T`` iff the
ternary form ``<a, b, -ab>`` represents ``x1^2 - pq`` (never zero because
``ord_p(pq) = 1`` is odd).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

from .exactalg import RatFunc, inverse_mod, poly_gcd, polys_up_to
from .orders import coordinate_exponent, maximal_order
from .places import (
    Element,
    FieldSpec,
    FunctionField,
    Place,
    PlaceError,
    Target,
    approximate,
    helper_places,
    ord,
    parse_field,
    parse_place,
)
from .quadforms import DiagForm, global_represents, witness_search
from .symbols import find_ramified_algebra, ram_set

SCHEMA_NAME = "integrality/definition"
SCHEMA_VERSION = 1
DEFAULT_COSET_CAP = 20_000


class DefinitionError(ValueError):
    """A definition cannot be built or loaded as requested."""


class CosetCapExceeded(DefinitionError):
    """The coset disjunction would be larger than the configured cap."""


# ---------------------------------------------------------------------------
# formula trees


class MPoly:
    """Sparse multivariate polynomial with field coefficients.

    Monomials are sorted tuples of ``(variable, exponent)`` pairs.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, name: str, one) -> MPoly:
        return cls({((name, 1),): one})

    @classmethod
    def const(cls, c) -> MPoly:
        return cls({(): c})

    def __add__(self, other: MPoly) -> MPoly:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MPoly(out)

    def __neg__(self) -> MPoly:
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: MPoly) -> MPoly:
        return self + (-other)

    def __mul__(self, other) -> MPoly:
        if not isinstance(other, MPoly):
            return MPoly({m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for v, e in m2:
                    exps[v] = exps.get(v, 0) + e
                m = tuple(sorted(exps.items()))
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return MPoly(out)

    __rmul__ = __mul__

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def evaluate(self, env: dict, zero):
        total = zero
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                if v not in env:
                    raise KeyError(f"variable {v!r} is unassigned")
                val = val * env[v] ** e
            total = total + val
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: (sum(e for _, e in mc[0]), mc[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self) -> int:  # pragma: no cover - MPoly is not used as a key
        return hash(tuple(sorted(self.terms)))


@dataclass(frozen=True)
class Eq:
    poly: MPoly


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Exists:
    variables: tuple
    child: object


FormulaTree = object  # Exists | And | Or | Eq


def evaluate_formula(tree, env: dict, zero) -> bool:
    """Truth of ``tree`` when every variable (bound or free) takes its value in ``env``.

    Existential variables are not searched for; the caller supplies witnesses.
    """
    if isinstance(tree, Eq):
        return not tree.poly.evaluate(env, zero)
    if isinstance(tree, And):
        return all(evaluate_formula(c, env, zero) for c in tree.children)
    if isinstance(tree, Or):
        return any(evaluate_formula(c, env, zero) for c in tree.children)
    if isinstance(tree, Exists):
        missing = [v for v in tree.variables if v not in env]
        if missing:
            raise KeyError(f"no witness supplied for {missing}")
        return evaluate_formula(tree.child, env, zero)
    raise TypeError(f"not a formula node: {tree!r}")


def formula_to_json(tree, fmt: Callable) -> dict:
    if isinstance(tree, Eq):
        return {
            "node": "Eq",
            "terms": [[fmt(c), [[v, e] for v, e in m]] for m, c in tree.poly.sorted_terms()],
        }
    if isinstance(tree, (And, Or)):
        return {"node": type(tree).__name__, "children": [formula_to_json(c, fmt) for c in tree.children]}
    if isinstance(tree, Exists):
        return {"node": "Exists", "vars": list(tree.variables), "child": formula_to_json(tree.child, fmt)}
    raise TypeError(f"not a formula node: {tree!r}")


def formula_from_json(doc: dict, parse: Callable):
    node = doc.get("node")
    if node == "Eq":
        terms = {}
        for coeff, mono in doc["terms"]:
            m = tuple(sorted((str(v), int(e)) for v, e in mono))
            terms[m] = parse(coeff)
        return Eq(MPoly(terms))
    if node == "And":
        return And(tuple(formula_from_json(c, parse) for c in doc["children"]))
    if node == "Or":
        return Or(tuple(formula_from_json(c, parse) for c in doc["children"]))
    if node == "Exists":
        return Exists(tuple(doc["vars"]), formula_from_json(doc["child"], parse))
    raise DefinitionError(f"unknown formula node {node!r}")


def format_formula(tree, fmt: Callable, indent: int = 0) -> str:
    """Indented plain-text rendering, one node per line."""
    pad = "  " * indent
    if isinstance(tree, Eq):
        parts = []
        for m, c in tree.poly.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            coeff = fmt(c)
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif any(ch in coeff for ch in "+-/;"):
                parts.append(f"({coeff})*{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return f"{pad}{' + '.join(parts) or '0'} = 0"
    if isinstance(tree, (And, Or)):
        head = f"{pad}{type(tree).__name__.upper()}"
        return "\n".join([head] + [format_formula(c, fmt, indent + 1) for c in tree.children])
    if isinstance(tree, Exists):
        return f"{pad}EXISTS {', '.join(tree.variables)}:\n" + format_formula(tree.child, fmt, indent + 1)
    raise TypeError(f"not a formula node: {tree!r}")


def formula_stats(tree) -> dict:
    """Counts of nodes by kind, and the width of every Or node."""
    stats = {"Eq": 0, "And": 0, "Or": 0, "Exists": 0, "or_widths": []}

    def walk(n):
        stats[type(n).__name__] += 1
        if isinstance(n, Or):
            stats["or_widths"].append(len(n.children))
        if isinstance(n, (And, Or)):
            for c in n.children:
                walk(c)
        elif isinstance(n, Exists):
            walk(n.child)

    walk(tree)
    return stats


# ---------------------------------------------------------------------------
# the definition


@dataclass(frozen=True)
class CopyData:
    """One ``R_p cap R_h`` block."""

    helper: Place
    p: Element
    q: Element
    a: Element
    b: Element
    r: int
    coset_reps: tuple
    modulus: object  # product of pi^(r+1) over {p, h}: Poly or int

    @property
    def pq(self) -> Element:
        return self.p * self.q

    @property
    def scale(self) -> Element:
        return self.pq ** self.r

    @property
    def norm_form(self) -> tuple:
        """Coefficients of ``<a, b, -ab>``."""
        return (self.a, self.b, -(self.a * self.b))


@dataclass
class IntegralityDefinition:
    field: FieldSpec
    target: Place
    helpers: tuple
    copies: tuple
    _formula: object = dc_field(default=None, repr=False, compare=False)

    @property
    def formula(self):
        if self._formula is None:
            self._formula = emit_formula(self)
        return self._formula


def _check_target(field: FieldSpec, place: Place) -> None:
    if not place.is_finite:
        raise PlaceError(f"target place {place} must be finite (apply t -> 1/t first)")
    if isinstance(field, FunctionField) and field.characteristic == 2:
        raise PlaceError("membership decisions in characteristic 2 are not supported")
    if place.residue_characteristic() == 2:
        raise PlaceError("dyadic target places are not supported")


def _coset_reps(field: FieldSpec, modulus) -> list:
    """All residues modulo ``modulus`` (least degree / least nonnegative)."""
    if isinstance(field, FunctionField):
        return [RatFunc(f) for f in polys_up_to(field.F, modulus.deg - 1)]
    return [Fraction(n) for n in range(modulus)]


def _coset_count(field: FieldSpec, modulus) -> int:
    if isinstance(field, FunctionField):
        return field.F.size ** modulus.deg
    return modulus


def build_copy(field: FieldSpec, target: Place, helper: Place, coset_cap: int = DEFAULT_COSET_CAP, ram_bound: int | None = None) -> CopyData:
    p = approximate(field, [Target.exactly(target, 1), Target.exactly(helper, 0)])
    q = approximate(field, [Target.exactly(target, 0), Target.exactly(helper, 1)])
    a, b = find_ramified_algebra(field, target, helper, ram_bound)
    order = maximal_order(field, a, b, [target, helper])
    r = max(coordinate_exponent(order, target), coordinate_exponent(order, helper))
    modulus = target.pi ** (r + 1) * helper.pi ** (r + 1)
    n = _coset_count(field, modulus)
    if n > coset_cap:
        raise CosetCapExceeded(f"{n} coset representatives exceed the cap {coset_cap}")
    reps = tuple(_coset_reps(field, modulus))
    return CopyData(helper, p, q, a, b, r, reps, modulus)


def verify_copy(field: FieldSpec, target: Place, c: CopyData) -> None:
    """Re-check every invariant of one copy; raises AssertionError."""
    h = c.helper
    if not (ord(target, c.p) == 1 and ord(h, c.p) == 0 and ord(target, c.q) == 0 and ord(h, c.q) == 1):
        raise AssertionError("valuation conditions on p, q fail")
    if tuple(sorted((target, h))) != ram_set(field, c.a, c.b).ram:
        raise AssertionError("algebra is not ramified exactly at the two places")
    if c.r < 0:
        raise AssertionError("negative exponent r")
    keys = {_residue_key(field, s, c.modulus) for s in c.coset_reps}
    if len(keys) != len(c.coset_reps) or len(keys) != _coset_count(field, c.modulus):
        raise AssertionError("coset representatives are not a complete residue system")


def build_definition(
    field: FieldSpec,
    target: Place,
    coset_cap: int = DEFAULT_COSET_CAP,
    ram_bound: int | None = None,
) -> IntegralityDefinition:
    """Assemble and verify the definition of ``R_target``."""
    _check_target(field, target)
    helpers = tuple(helper_places(field, [target], 2))
    copies = tuple(build_copy(field, target, h, coset_cap, ram_bound) for h in helpers)
    for c in copies:
        verify_copy(field, target, c)
    return IntegralityDefinition(field, target, helpers, copies)


# ---------------------------------------------------------------------------
# membership


def _residue_key(field: FieldSpec, x: Element, modulus):
    """``x`` modulo ``modulus`` when ``x`` is integral at its prime factors, else None."""
    if isinstance(field, FunctionField):
        if not poly_gcd(x.den, modulus).is_one():
            return None
        return (x.num * inverse_mod(x.den, modulus) % modulus).c
    x = Fraction(x)
    if math.gcd(x.denominator, modulus) != 1:
        return None
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def t_membership(defn: IntegralityDefinition, x1: Element, copy: int = 0, trace: list | None = None) -> bool:
    """``x1 in T`` for the given copy."""
    c = defn.copies[copy]
    value = x1 * x1 - c.pq
    f = DiagForm(defn.field, c.norm_form)
    return global_represents(f, value, first=(defn.target, c.helper), trace=trace)


@dataclass
class CopyVerdict:
    element: Element
    accepted: bool
    coset_index: int | None = None
    x1: Element | None = None
    local: list = dc_field(default_factory=list)
    tried: int = 0


def rpq_membership(defn: IntegralityDefinition, x: Element, copy: int = 0, detail: CopyVerdict | None = None) -> bool:
    """``x in R_p cap R_h`` through the coset disjunction; the residue-matched
    representative is tried first."""
    c = defn.copies[copy]
    key = _residue_key(defn.field, x, c.modulus)
    order = list(range(len(c.coset_reps)))
    if key is not None:
        first = next(n for n, s in enumerate(c.coset_reps) if _residue_key(defn.field, s, c.modulus) == key)
        order.remove(first)
        order.insert(0, first)
    scale = c.scale
    tried = 0
    for n in order:
        x1 = (x - c.coset_reps[n]) / scale
        local: list = []
        tried += 1
        if t_membership(defn, x1, copy, trace=local):
            if detail is not None:
                detail.accepted, detail.coset_index, detail.x1 = True, n, x1
                detail.local, detail.tried = local, tried
            return True
    if detail is not None:
        detail.accepted, detail.tried = False, tried
    return False


@dataclass
class DecideTrace:
    """Witness trace of :func:`decide`: the split ``x = y + z`` and both
    coset-disjunction verdicts with their local checks."""

    x: Element
    y: Element
    z: Element
    verdicts: tuple


def split(defn: IntegralityDefinition, x: Element) -> tuple[Element, Element]:
    """``x = y + z`` with ``y`` integral at ``p`` and ``q``, ``x - y`` integral at ``l``."""
    p_, q_, l_ = defn.target, defn.helpers[0], defn.helpers[1]
    y = approximate(
        defn.field,
        [Target.at_least(p_, 0), Target.at_least(q_, 0), Target.close(l_, x, 0)],
    )
    return y, x - y


def decide(defn: IntegralityDefinition, x: Element) -> tuple[bool, DecideTrace]:
    """``ord_p x >= 0`` decided through the definition only."""
    y, z = split(defn, x)
    v1, v2 = CopyVerdict(y, False), CopyVerdict(z, False)
    ok1 = rpq_membership(defn, y, 0, v1)
    ok2 = rpq_membership(defn, z, 1, v2)
    return ok1 and ok2, DecideTrace(x, y, z, (v1, v2))


def witness_assignment(defn: IntegralityDefinition, x: Element, bound: int = 3) -> dict | None:
    """Values for every variable of the formula at ``x``, found by bounded
    search; ``None`` when ``decide`` rejects or a search comes up empty."""
    ok, tr = decide(defn, x)
    if not ok:
        return None
    env = {"x": x, "y": tr.y, "z": tr.z}
    for k, (c, v) in enumerate(zip(defn.copies, tr.verdicts), start=1):
        f = DiagForm(defn.field, c.norm_form)
        w = witness_search(f, v.x1 * v.x1 - c.pq, bound)
        if w is None:
            return None
        env[f"x1_{k}"] = v.x1
        env[f"x2_{k}"], env[f"x3_{k}"], env[f"x4_{k}"] = w
    return env


# ---------------------------------------------------------------------------
# formula emission


def _norm_poly(names: Sequence[str], a, b, one) -> MPoly:
    x1, x2, x3, x4 = (MPoly.var(n, one) for n in names)
    return x1 * x1 - x2 * x2 * a - x3 * x3 * b + x4 * x4 * (a * b)


def _copy_formula(c: CopyData, k: int, arg: str, one) -> object:
    names = [f"x{m}_{k}" for m in range(1, 5)]
    eq_norm = Eq(_norm_poly(names, c.a, c.b, one) - MPoly.const(c.pq))
    Y = MPoly.var(arg, one)
    X1 = MPoly.var(names[0], one) * c.scale
    cosets = Or(tuple(Eq(Y - X1 - MPoly.const(s)) for s in c.coset_reps))
    return Exists(tuple(names), And((eq_norm, cosets)))


def emit_formula(defn: IntegralityDefinition):
    """Tree for ``x in R_p``: there are ``y, z`` with ``x = y + z``, ``y`` in
    the first copy and ``z`` in the second; each copy is the norm equation
    plus the coset disjunction."""
    one = defn.field.one()
    X, Y, Z = (MPoly.var(n, one) for n in ("x", "y", "z"))
    body = And((Eq(X - Y - Z), _copy_formula(defn.copies[0], 1, "y", one), _copy_formula(defn.copies[1], 2, "z", one)))
    return Exists(("y", "z"), body)


def emit_formula_char2(field: FunctionField, a, b, p, q):
    """Characteristic-2 tree for ``T``: the free variable is the trace
    coordinate ``x3`` and ``x1, x2, x4`` are bound."""
    if not isinstance(field, FunctionField) or field.characteristic != 2:
        raise DefinitionError("the characteristic-2 formula needs a field of characteristic 2")
    one = field.one()
    x1, x2, x3, x4 = (MPoly.var(n, one) for n in ("x1", "x2", "x3", "x4"))
    nr = x1 * x1 + x1 * x3 + x3 * x3 * b + (x2 * x2 + x2 * x4 + x4 * x4 * b) * a
    return Exists(("x1", "x2", "x4"), Eq(nr - MPoly.const(p * q)))


def decide_char2(*_args, **_kwargs):
    raise DefinitionError("membership decisions in characteristic 2 are not supported")


# ---------------------------------------------------------------------------
# serialization


def _modulus_digits(field: FieldSpec):
    if isinstance(field, FunctionField) and not field.F.is_prime_field:
        return list(field.F.modulus)
    return None


def definition_to_json(defn: IntegralityDefinition) -> dict:
    f = defn.field
    cs = defn.copies
    return {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "field": f.name,
        "field_modulus": _modulus_digits(f),
        "target_place": str(defn.target),
        "helper_places": [str(h) for h in defn.helpers],
        "p": [f.fmt(c.p) for c in cs],
        "q": [f.fmt(c.q) for c in cs],
        "a": [f.fmt(c.a) for c in cs],
        "b": [f.fmt(c.b) for c in cs],
        "r": [c.r for c in cs],
        "coset_reps": [[f.fmt(s) for s in c.coset_reps] for c in cs],
        "formula": formula_to_json(defn.formula, f.fmt),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def definition_from_json(doc: dict, verify: bool = True) -> IntegralityDefinition:
    if doc.get("schema") != SCHEMA_NAME:
        raise DefinitionError("not a definition artifact")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DefinitionError(f"unsupported schema version {doc.get('schema_version')}")
    field = parse_field(doc["field"])
    if _modulus_digits(field) != doc.get("field_modulus"):
        raise DefinitionError("field modulus differs from this installation's model of F_q")
    target = parse_place(doc["target_place"], field)
    helpers = tuple(parse_place(h, field) for h in doc["helper_places"])
    copies = []
    for k, h in enumerate(helpers):
        r = int(doc["r"][k])
        copies.append(
            CopyData(
                h,
                field.parse(doc["p"][k]),
                field.parse(doc["q"][k]),
                field.parse(doc["a"][k]),
                field.parse(doc["b"][k]),
                r,
                tuple(field.parse(s) for s in doc["coset_reps"][k]),
                target.pi ** (r + 1) * h.pi ** (r + 1),
            )
        )
    formula = formula_from_json(doc["formula"], field.parse)
    defn = IntegralityDefinition(field, target, helpers, tuple(copies), formula)
    if verify:
        _check_target(field, target)
        for c in defn.copies:
            verify_copy(field, target, c)
        if formula_to_json(emit_formula(defn), field.fmt) != doc["formula"]:
            raise DefinitionError("stored formula does not match the stored data")
    return defn


def load_schema(name: str = "definition") -> dict:
    from importlib import resources

    text = resources.files("integrality").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict, name: str = "definition") -> None:
    import jsonschema

    jsonschema.validate(doc, load_schema(name))
