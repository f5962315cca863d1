import json
import random
from fractions import Fraction

import pytest

from integrality.diophdef import (
    CosetCapExceeded,
    DefinitionError,
    _residue_key,
    build_definition,
    decide,
    decide_char2,
    definition_from_json,
    definition_to_json,
    dumps,
    emit_formula_char2,
    evaluate_formula,
    format_formula,
    formula_stats,
    rpq_membership,
    split,
    t_membership,
    validate,
    witness_assignment,
)
from integrality.harness import enumerate_elements
from integrality.places import FunctionField, Place, PlaceError, Rationals, ord, parse_place
from integrality.quadforms import DiagForm, witness_search
from integrality.quaternion import QuatAlgebra, reduced_norm

F3 = FunctionField(3)
Q = Rationals()


def test_build_f3(f3_def):
    d = f3_def
    assert d.helpers[0] == parse_place("finite:t+1", F3)
    for c in d.copies:
        assert (ord(d.target, c.p), ord(c.helper, c.p)) == (1, 0)
        assert (ord(d.target, c.q), ord(c.helper, c.q)) == (0, 1)


def test_build_q(q5_def):
    assert q5_def.helpers == (Place.prime(3), Place.prime(7))


def test_build_errors():
    with pytest.raises(PlaceError):
        build_definition(F3, Place.infinite())
    with pytest.raises(PlaceError):
        build_definition(Q, Place.prime(2))
    with pytest.raises(PlaceError):
        build_definition(FunctionField(2), parse_place("finite:t", FunctionField(2)))
    with pytest.raises(CosetCapExceeded):
        build_definition(F3, parse_place("finite:t", F3), coset_cap=4)


def test_t_membership_examples(f3_def, q5_def):
    for d in (f3_def, q5_def):
        for k, c in enumerate(d.copies):
            assert t_membership(d, c.pq, k)
            p = c.p
            assert not t_membership(d, 1 / p ** (c.r + 1), k)


def test_t_membership_zero_vs_witness(f3_def):
    for k, c in enumerate(f3_def.copies):
        f = DiagForm(F3, c.norm_form)
        w = witness_search(f, -c.pq, 3)
        assert t_membership(f3_def, F3.zero(), k)
        assert w is not None and f(w) == -c.pq


def test_rpq_examples(f3_def, q5_def):
    for d in (f3_def, q5_def):
        c = d.copies[0]
        assert rpq_membership(d, d.field.zero())
        assert not rpq_membership(d, 1 / c.p)


def test_decide_examples(f3_def):
    assert decide(f3_def, F3.t())[0]
    assert not decide(f3_def, F3("1/t"))[0]


def test_split(f3_def, q5_def):
    rng = random.Random(3)
    for d in (f3_def, q5_def):
        els = list(enumerate_elements(d.field, 3 if d.field == F3 else 30))
        for x in rng.sample(els, 40):
            y, z = split(d, x)
            assert y + z == x
            assert ord(d.target, y) >= 0 and ord(d.helpers[0], y) >= 0
            assert ord(d.helpers[1], z) >= 0


def test_soundness_of_s(f3_def):
    """Accepted x1 have (pq)^r x1 integral at both places."""
    for k, c in enumerate(f3_def.copies):
        for x1 in enumerate_elements(F3, 2):
            if t_membership(f3_def, x1, k):
                s = c.scale * x1
                assert ord(f3_def.target, s) >= 0 and ord(c.helper, s) >= 0


def test_completeness_seed(q5_def):
    for k, c in enumerate(q5_def.copies):
        for x in enumerate_elements(Q, 12):
            x1 = c.p * c.q * x
            if ord(q5_def.target, x1) >= 1 and ord(c.helper, x1) >= 1:
                assert t_membership(q5_def, x1, k)


def test_cosets_disjoint_and_covering(f3_def):
    for c in f3_def.copies:
        keys = [_residue_key(F3, s, c.modulus) for s in c.coset_reps]
        assert len(set(keys)) == len(keys)
        for y in enumerate_elements(F3, 2):
            if ord(f3_def.target, y) >= 0 and ord(c.helper, y) >= 0:
                assert _residue_key(F3, y, c.modulus) in set(keys)


def test_formula_shape(f3_def):
    stats = formula_stats(f3_def.formula)
    assert stats["or_widths"] == [len(c.coset_reps) for c in f3_def.copies]
    assert stats["Exists"] == 3
    text = format_formula(f3_def.formula, F3.fmt)
    assert text.startswith("EXISTS y, z:")


def test_formula_evaluates_on_witness(f3_def, q5_def):
    # over Q the second copy needs x2 divisible by 35, hence the larger bound
    cases = [(f3_def, F3("(t^2+1)/(t+2)"), 3), (f3_def, F3.t(), 3), (q5_def, Fraction(3, 7), 40), (q5_def, Fraction(10), 40)]
    for d, x, bound in cases:
        env = witness_assignment(d, x, bound=bound)
        assert env is not None
        assert evaluate_formula(d.formula, env, d.field.zero())
        env["x"] = env["x"] + 1
        assert not evaluate_formula(d.formula, env, d.field.zero())


@pytest.mark.parametrize("which", ["f3_def", "q5_def"])
def test_json_round_trip(which, request):
    d = request.getfixturevalue(which)
    doc = definition_to_json(d)
    validate(doc)
    text = dumps(doc)
    again = definition_from_json(json.loads(text))
    assert dumps(definition_to_json(again)) == text
    for x in list(enumerate_elements(d.field, 1))[:30]:
        assert decide(again, x)[0] == decide(d, x)[0]


def test_json_tamper_detected(f3_def):
    doc = definition_to_json(f3_def)
    doc["b"][0] = "t^2+2"
    with pytest.raises((AssertionError, DefinitionError)):
        definition_from_json(doc)
    doc = definition_to_json(f3_def)
    doc["schema_version"] = 9
    with pytest.raises(DefinitionError):
        definition_from_json(doc)


def test_char2_formula():
    F2 = FunctionField(2)
    a, b, p, q = F2("t"), F2("t^2+t+1"), F2("t"), F2("t+1")
    tree = emit_formula_char2(F2, a, b, p, q)
    assert tree.variables == ("x1", "x2", "x4")
    poly = tree.child.poly
    assert ((("x1", 1), ("x3", 1)), F2.one()) in poly.terms.items()
    alg = QuatAlgebra(a, b)
    rng = random.Random(5)
    els = list(enumerate_elements(F2, 2))
    for _ in range(50):
        xs = [rng.choice(els) for _ in range(4)]
        env = dict(zip(("x1", "x2", "x3", "x4"), xs))
        val = poly.evaluate(env, F2.zero())
        assert val == reduced_norm(alg.element(xs)) - p * q
    with pytest.raises(DefinitionError):
        decide_char2(F2, a)
    with pytest.raises(DefinitionError):
        emit_formula_char2(F3, a, b, p, q)


@pytest.mark.slow
@pytest.mark.parametrize("field,place,bound", [
    (FunctionField(5), "finite:t", 1),
    (FunctionField(3), "finite:t^2+1", 1),
    (FunctionField(9), "finite:t", 1),
    (Rationals(), "prime:3", 20),
    (Rationals(), "prime:13", 20),
])
def test_other_targets_agree(field, place, bound):
    from integrality.harness import agreement_sweep

    d = build_definition(field, parse_place(place, field))
    rep = agreement_sweep(d, bound)
    assert rep.passed, rep.disagreements[:5]
