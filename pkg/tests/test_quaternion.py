from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from integrality.places import FunctionField
from integrality.quaternion import (
    CHAR2,
    ODD,
    QuatAlgebra,
    char_poly_check,
    conjugate,
    quat_mul,
    reduced_norm,
    reduced_trace,
    rescale,
)
from strategies import ratfuncs, rationals

F3 = FunctionField(3)
F2 = FunctionField(2)


def test_odd_relations():
    A = QuatAlgebra(F3("t"), F3("t+1"))
    one, i, j, k = A.basis()
    assert quat_mul(i, j) == k
    assert quat_mul(j, i) == -k
    assert i * i == A.scalar(A.a)
    assert j * j == A.scalar(A.b)
    assert reduced_trace(one) == F3(2)
    assert reduced_trace(i) == F3(0)
    assert reduced_norm(one) == F3(1)
    assert reduced_norm(i) == -A.a


def test_char2_relations():
    A = QuatAlgebra(F2("t"), F2("t^2+1"))
    assert A.presentation == CHAR2
    one, u, v, uv = A.basis()
    assert v * v == v + A.scalar(A.b)
    assert u * u == A.scalar(A.a)
    assert v * u == uv + u
    assert reduced_trace(one + u) == F2(0)
    assert reduced_trace(v) == F2(1)


def test_presentation_errors():
    with pytest.raises(ValueError):
        QuatAlgebra(F2("t"), F2("1"), ODD)
    with pytest.raises(ValueError):
        QuatAlgebra(F3("t"), F3("1"), CHAR2)
    with pytest.raises(ValueError):
        QuatAlgebra(F3("0"), F3("1"))
    A, B = QuatAlgebra(F3("t"), F3("1")), QuatAlgebra(F3("t"), F3("2"))
    with pytest.raises(ValueError):
        A.basis()[1] * B.basis()[1]


@pytest.mark.parametrize("a,b", [("t", "t+1"), ("2", "t^2+t")])
def test_associative_on_basis(a, b):
    A = QuatAlgebra(F3(a), F3(b))
    for x, y, z in product(A.basis(), repeat=3):
        assert (x * y) * z == x * (y * z)


def test_associative_on_basis_char2():
    A = QuatAlgebra(F2("t+1"), F2("t"))
    for x, y, z in product(A.basis(), repeat=3):
        assert (x * y) * z == x * (y * z)


nz3 = ratfuncs(3, 2, nonzero=True)
any3 = ratfuncs(3, 2)
nz2 = ratfuncs(2, 2, nonzero=True)
any2 = ratfuncs(2, 2)


@given(nz3, nz3, st.lists(any3, min_size=4, max_size=4), st.lists(any3, min_size=4, max_size=4))
def test_norm_multiplicative_odd(a, b, xs, ys):
    A = QuatAlgebra(a, b)
    x, y = A.element(xs), A.element(ys)
    assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)
    assert reduced_trace(x) == 2 * xs[0]
    assert char_poly_check(x)
    assert (x * conjugate(x)) == A.scalar(reduced_norm(x))


@given(nz2, nz2, st.lists(any2, min_size=4, max_size=4), st.lists(any2, min_size=4, max_size=4))
def test_norm_multiplicative_char2(a, b, xs, ys):
    A = QuatAlgebra(a, b)
    x, y = A.element(xs), A.element(ys)
    assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)
    assert reduced_trace(x) == xs[2]
    assert char_poly_check(x)


@given(rationals(9, True), rationals(9, True), st.lists(rationals(9), min_size=4, max_size=4), st.lists(rationals(9), min_size=4, max_size=4), st.lists(rationals(9), min_size=4, max_size=4))
def test_associative_q(a, b, xs, ys, zs):
    A = QuatAlgebra(a, b)
    x, y, z = A.element(xs), A.element(ys), A.element(zs)
    assert (x * y) * z == x * (y * z)
    assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)


@given(nz3, nz3, nz3, nz3, st.lists(any3, min_size=4, max_size=4))
def test_rescale_preserves_norm(a, b, s, r, xs):
    x = QuatAlgebra(a, b).element(xs)
    y = rescale(x, s, r)
    assert y.alg == QuatAlgebra(a * s * s, b * r * r)
    assert reduced_norm(y) == reduced_norm(x)
    assert reduced_trace(y) == reduced_trace(x)


def test_quaternion_coords_over_q():
    A = QuatAlgebra(Fraction(-1), Fraction(-1))
    x = A.element([Fraction(1), Fraction(1), Fraction(1), Fraction(1)])
    assert reduced_norm(x) == 4
