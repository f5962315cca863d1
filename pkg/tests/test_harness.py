import random
from fractions import Fraction
from itertools import product

import pytest

from integrality.diophdef import validate
from integrality.exactalg import GF, Poly, RatFunc, polys_up_to
from integrality.harness import (
    InsufficientPrecision,
    SweepReport,
    agreement_sweep,
    count_elements,
    enumerate_elements,
    local_solvability_oracle,
    required_precision,
)
from integrality.places import FunctionField, Place, PlaceError, Rationals, parse_place
from integrality.symbols import hilbert_symbol
from strategies import random_ratfunc, random_rational


class TestEnumeration:
    def test_constants(self, f3):
        assert [str(x) for x in enumerate_elements(f3, 0)] == ["0", "1", "2"]

    def test_double_count(self, f3):
        # every pair (num, den) with deg <= 1, den nonzero, reduced to canonical form
        F = GF(3)
        direct = set()
        for num in polys_up_to(F, 1):
            for den in polys_up_to(F, 1):
                if not den.is_zero():
                    direct.add(RatFunc(num, den))
        got = list(enumerate_elements(f3, 1))
        assert len(got) == len(set(got)) == len(direct) == 27
        assert set(got) == direct

    def test_rationals(self, qq):
        got = list(enumerate_elements(qq, 2))
        want = {Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2)}
        assert len(got) == 7 and set(got) == want

    @pytest.mark.parametrize("bound", [1, 3, 10])
    def test_rationals_height(self, qq, bound):
        got = list(enumerate_elements(qq, bound))
        assert len(got) == len(set(got))
        assert all(max(abs(x.numerator), x.denominator) <= bound for x in got)
        direct = {Fraction(n, d) for n in range(-bound, bound + 1) for d in range(1, bound + 1)}
        assert set(got) == direct

    def test_height_two_f5(self):
        F = FunctionField(5)
        got = list(enumerate_elements(F, 2))
        assert len(got) == len(set(got))
        assert all(max(x.num.deg if not x.num.is_zero() else 0, x.den.deg) <= 2 for x in got)
        assert count_elements(F, 2) == len(got)

    def test_deterministic(self, f3):
        assert list(enumerate_elements(f3, 2)) == list(enumerate_elements(f3, 2))
        assert list(enumerate_elements(f3, -1)) == []


class TestOracle:
    def test_hyperbolic(self, f3, qq):
        v = parse_place("finite:t", f3)
        assert local_solvability_oracle(v, [f3(1), f3(-1)], precision=1)
        assert local_solvability_oracle(Place.prime(7), [Fraction(1), Fraction(-1)], precision=1)

    def test_anisotropic_norm_form(self):
        # the norm form of H(2, 5) at 5: 2 is a nonsquare mod 5
        v = Place.prime(5)
        cs = [Fraction(1), Fraction(-2), Fraction(-5), Fraction(10)]
        assert not local_solvability_oracle(v, cs)
        assert hilbert_symbol(v, Fraction(2), Fraction(5)) == -1

    def test_anisotropic_function_field(self, f3):
        v = parse_place("finite:t", f3)
        t = f3.t()
        cs = [f3(1), f3(1), t, t]
        assert not local_solvability_oracle(v, cs)

    def test_refuses_low_precision(self):
        v = Place.prime(5)
        cs = [Fraction(2), Fraction(5), Fraction(-1)]
        need = required_precision(v, cs)
        assert need == 3
        with pytest.raises(InsufficientPrecision):
            local_solvability_oracle(v, cs, precision=need - 1)
        assert local_solvability_oracle(v, cs, precision=need + 2) == local_solvability_oracle(v, cs)

    def test_representation(self, qq):
        # x^2 + y^2 = 3 has no solution over Q_3
        assert not local_solvability_oracle(Place.prime(3), [Fraction(1), Fraction(1)], Fraction(3))
        assert local_solvability_oracle(Place.prime(5), [Fraction(1), Fraction(1)], Fraction(3))

    def test_real_place(self):
        inf = Place.real()
        assert not local_solvability_oracle(inf, [Fraction(1), Fraction(2)])
        assert local_solvability_oracle(inf, [Fraction(1), Fraction(-2)])

    def test_errors(self, f3):
        with pytest.raises(ValueError):
            local_solvability_oracle(Place.prime(3), [Fraction(0), Fraction(1)])
        F2 = FunctionField(2)
        with pytest.raises(PlaceError):
            local_solvability_oracle(parse_place("finite:t", F2), [F2(1), F2.t()])

    def test_agrees_with_symbol_sample(self, f3):
        rng = random.Random(11)
        places = [parse_place(s, f3) for s in ("finite:t", "finite:t+1", "finite:t^2+1", "infinite")]
        for _ in range(40):
            a, b = random_ratfunc(rng, f3.F, 2), random_ratfunc(rng, f3.F, 2)
            v = rng.choice(places)
            assert local_solvability_oracle(v, [a, b, f3(-1)]) == (hilbert_symbol(v, a, b) == 1)
        for _ in range(40):
            a, b = random_rational(rng, 30), random_rational(rng, 30)
            v = Place.prime(rng.choice([2, 3, 5, 7]))
            assert local_solvability_oracle(v, [a, b, Fraction(-1)]) == (hilbert_symbol(v, a, b) == 1)


class TestSweep:
    def test_report_shape(self, f3_def):
        r = agreement_sweep(f3_def, 1)
        validate(r.to_json(), "sweep-report")
        assert r.passed and r.tested == count_elements(f3_def.field, 1)
        assert r.to_json()["config"] == {"kind": "global", "field": "F3t", "place": "finite:t", "bound": 1}

    def test_reproducible(self, f3_def, q5_def, perf_def):
        assert agreement_sweep(f3_def, 1).dumps() == agreement_sweep(f3_def, 1).dumps()
        assert agreement_sweep(q5_def, 6).dumps() == agreement_sweep(q5_def, 6).dumps()
        a, b = agreement_sweep(perf_def, 1, 1), agreement_sweep(perf_def, 1, 1)
        assert a.dumps() == b.dumps()
        validate(a.to_json(), "sweep-report")

    def test_failing_report(self):
        r = SweepReport({"kind": "global", "field": "Q", "place": "prime:5", "bound": 0})
        r.tested, r.agreed, r.disagreed = 1, 0, 1
        r.disagreements.append({"element": "0", "definition": False, "valuation": True})
        assert not r.passed
        validate(r.to_json(), "sweep-report")

    def test_rejects_other_inputs(self):
        with pytest.raises(TypeError):
            agreement_sweep(object(), 1)
