import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from integrality.diophdef import DefinitionError, evaluate_formula, formula_stats, validate
from integrality.exactalg import GF, LiteralError, RatFunc
from integrality.harness import enumerate_elements
from integrality.orders import determinant
from integrality.perfectclosure import (
    PerfElement,
    build_perf_definition,
    decide_perf,
    dumps,
    enumerate_perf,
    frobenius,
    integral_basis,
    level_place,
    local_square_perf,
    operf_membership,
    ord_perf,
    parse_perf,
    perf_definition_from_json,
    perf_definition_to_json,
    perf_witness_assignment,
    perf_witness_search,
    pth_root,
    residue_pair,
    residue_perf,
    t_perf_membership,
)
from integrality.places import FunctionField, PlaceError, Rationals, ord, parse_place, residue_field
from integrality.quaternion import QuatAlgebra, reduced_norm, reduced_trace, trace_form_matrix
from strategies import perf_elements

F3 = FunctionField(3)
T = parse_place("finite:t", F3)


def perf(text, q=3):
    return parse_perf(text, GF(q))


class TestArithmetic:
    def test_examples(self):
        s = perf("level=1; s")
        assert (s * s.__pow__(2)) == PerfElement.base(F3.t())
        assert (s * s * s).level == 0
        assert s ** 3 == perf("t")
        assert frobenius(s) == perf("t")

    def test_canonical_level(self):
        x = perf("level=2; s^9+2")
        assert x.level == 0 and x == perf("t+2")
        # s^3 at level 2 is t^(1/3)
        y = perf("level=2; s^9+2*s^3")
        assert y.level == 1 and y == perf("level=1; s^3+2*s")
        assert perf("level=2; s^3").level == 1

    @given(perf_elements(), perf_elements())
    def test_result_level_bounded(self, x, y):
        for z in (x + y, x - y, x * y):
            assert z.level <= max(x.level, y.level)

    @given(perf_elements(), perf_elements(), perf_elements(nonzero=True))
    def test_field_ops(self, x, y, z):
        assert (x + y) - y == x
        assert (x * z) / z == x
        assert x * (y + z) == x * y + x * z

    @given(perf_elements(q=9))
    def test_literal_round_trip(self, x):
        assert parse_perf(str(x), GF(9)) == x

    def test_literal_errors(self):
        with pytest.raises(LiteralError) as exc:
            perf("level=1; s+*2")
        assert exc.value.pos == 11
        with pytest.raises(LiteralError):
            perf("level=1; t")


class TestValuation:
    def test_examples(self):
        assert ord_perf(T, perf("level=1; s")) == Fraction(1, 3)
        assert ord_perf(T, perf("t")) == 1
        assert ord_perf(T, perf("level=2; 1/s^5")) == Fraction(-5, 9)
        with pytest.raises(ValueError):
            ord_perf(T, perf("0"))

    @given(perf_elements(nonzero=True), perf_elements(nonzero=True))
    def test_additive(self, x, y):
        for v in (T, parse_place("finite:t^2+1", F3)):
            assert ord_perf(v, x * y) == ord_perf(v, x) + ord_perf(v, y)
            assert ord_perf(v, frobenius(x)) == 3 * ord_perf(v, x)

    @given(perf_elements(nonzero=True))
    def test_pth_root(self, x):
        r = pth_root(x)
        assert frobenius(r) == x
        assert pth_root(frobenius(x)) == x
        assert r.level <= x.level + 1
        assert ord_perf(T, r) == ord_perf(T, x) / 3

    def test_pth_root_examples(self):
        assert pth_root(perf("t")) == perf("level=1; s")
        F9 = GF(9)
        for c in F9.elements():
            r = pth_root(PerfElement(0, RatFunc.const(F9, c)))
            assert r.level == 0 and r.rep.num.c[:1] in ((), (F9.pth_root(c),))

    def test_residue(self):
        x = perf("level=1; (s+1)/(s+2)")
        # x^3 = (t+1)/(t+2) has residue 2 at (t); the cube root of 2 in F_3 is 2
        assert residue_perf(T, x) == 2


class TestSquares:
    def test_examples(self):
        assert not local_square_perf(T, perf("t"))
        assert local_square_perf(T, perf("level=1; s^2"))
        assert not local_square_perf(T, perf("level=1; 2*s^2"))
        with pytest.raises(ValueError):
            local_square_perf(T, perf("0"))

    @given(perf_elements(nonzero=True), perf_elements(nonzero=True))
    def test_square_classes(self, x, u):
        for v in (T, parse_place("finite:t+1", F3), parse_place("finite:t^2+1", F3)):
            assert local_square_perf(v, x * x)
            assert local_square_perf(v, u * x * x) == local_square_perf(v, u)

    @given(perf_elements(nonzero=True))
    def test_parity_rule(self, x):
        o = ord_perf(T, x)
        if o.numerator % 2:
            assert not local_square_perf(T, x)


class TestBasis:
    @pytest.mark.parametrize("q,helper", [(3, "finite:t+1"), (3, "finite:t^2+1"), (5, "finite:t+3")])
    def test_basis(self, q, helper):
        F = FunctionField(q)
        v1, v2 = parse_place("finite:t", F), parse_place(helper, F)
        from integrality.symbols import find_ramified_algebra

        a, b = find_ramified_algebra(F, v1, v2)
        basis = integral_basis(F, v1, v2, a, b)
        alg = QuatAlgebra(a, b)
        els = [alg.element(c) for c in basis]
        assert reduced_trace(els[0]) == F(2)
        assert all(reduced_trace(e) == F.zero() for e in els[1:])
        disc = determinant(trace_form_matrix(els))
        assert ord(v1, disc) == 2 and ord(v2, disc) == 2
        # index bookkeeping: disc(basis) = det(C)^2 disc(1, i, j, ij)
        std = determinant(trace_form_matrix(alg.basis()))
        C = determinant([list(c) for c in basis])
        assert disc == C * C * std
        for v in (v1, v2):
            assert 2 * ord(v, C) == 2 - ord(v, std)
        # the same basis stays integral over the level-i ring
        for level in (1, 2):
            lifted = [[PerfElement(0, x) for x in c] for c in basis]
            Ap = QuatAlgebra(PerfElement.base(a), PerfElement.base(b))
            for c in lifted:
                z = Ap.element(c)
                for w in (reduced_norm(z), reduced_trace(z)):
                    for v in (v1, v2):
                        lv = level_place(v, level)
                        if w:
                            assert ord(lv, w.at_level(level)) >= 0

    def test_requires_finite(self):
        with pytest.raises(PlaceError):
            integral_basis(F3, T, parse_place("infinite", F3), F3(2), F3.t())


class TestDefinition:
    def test_build(self, perf_def):
        d = perf_def
        for c in d.copies:
            assert len(c.alphas) == residue_field(d.target).size * residue_field(c.helper).size
        assert formula_stats(d.formula)["or_widths"] == [9, 9]

    def test_build_errors(self):
        with pytest.raises(PlaceError):
            build_perf_definition(FunctionField(2), parse_place("finite:t", FunctionField(2)))
        with pytest.raises(PlaceError):
            build_perf_definition(Rationals(), parse_place("prime:5", Rationals()))
        with pytest.raises(PlaceError):
            build_perf_definition(F3, parse_place("infinite", F3))

    def test_t_examples(self, perf_def):
        for k, c in enumerate(perf_def.copies):
            assert t_perf_membership(perf_def, perf("1"), k)
            assert t_perf_membership(perf_def, perf("-1"), k)
            assert t_perf_membership(perf_def, PerfElement.base(c.shift_element), k)
            assert not t_perf_membership(perf_def, perf("1/t"), k)

    def test_decide_examples(self, perf_def):
        assert decide_perf(perf_def, perf("level=1; s"))[0]
        assert not decide_perf(perf_def, perf("level=1; 1/s"))[0]
        assert decide_perf(perf_def, perf("level=2; 1/(s+1)"))[0]

    def test_t_inside_operf(self, perf_def):
        for k, c in enumerate(perf_def.copies):
            for x1 in enumerate_perf(F3, 2, 1):
                if t_perf_membership(perf_def, x1, k):
                    assert x1.is_zero() or all(ord_perf(v, x1) >= 0 for v in (perf_def.target, c.helper))

    def test_coset_covering(self, perf_def):
        rng = random.Random(2)
        k1 = residue_field(perf_def.target)
        pool = [y for y in enumerate_perf(F3, 2, 2) if residue_pair(perf_def, y) is not None]
        for y in rng.sample(pool, 60):
            c = perf_def.copies[0]
            i, j = residue_pair(perf_def, y)
            k2 = residue_field(c.helper)
            alpha = c.alpha(k1.sub(i, c.shifts[0]), k2.sub(j, c.shifts[1]))
            assert t_perf_membership(perf_def, y - PerfElement.base(alpha), 0)

    def test_negatives_have_no_witness(self, perf_def):
        rejected = [x for x in enumerate_perf(F3, 1, 1) if not t_perf_membership(perf_def, x, 0)]
        assert rejected
        for x1 in rejected[:25]:
            for level in (0, 1):
                assert perf_witness_search(perf_def, x1, 0, 1, level) is None

    def test_formula_on_witness(self, perf_def):
        zero = PerfElement.const(GF(3), 0)
        for text in ("level=1; s+1", "t", "level=1; s"):
            env = perf_witness_assignment(perf_def, perf(text), bound=2)
            assert env is not None
            assert evaluate_formula(perf_def.formula, env, zero)

    def test_json_round_trip(self, perf_def):
        doc = perf_definition_to_json(perf_def)
        validate(doc, "perf-definition")
        text = dumps(doc)
        again = perf_definition_from_json(json.loads(text))
        assert dumps(perf_definition_to_json(again)) == text
        for x in list(enumerate_perf(F3, 1, 1))[:40]:
            assert decide_perf(again, x)[0] == decide_perf(perf_def, x)[0]

    def test_json_tamper(self, perf_def):
        doc = perf_definition_to_json(perf_def)
        doc["norm_gram"][0][2][2] = "t"
        with pytest.raises((AssertionError, DefinitionError)):
            perf_definition_from_json(doc)

    def test_enumeration_levels(self):
        xs = list(enumerate_perf(F3, 1, 2))
        assert len(xs) == len(set(xs))
        assert {x.level for x in xs} == {0, 1, 2}
