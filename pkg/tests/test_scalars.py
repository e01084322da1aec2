import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prelie_pbw.scalars import (
    RingMismatch,
    RingSpec,
    Scalar,
    UnsupportedRing,
    add,
    fp_basis,
    mul,
)

RINGS = [
    RingSpec.rational(),
    RingSpec.prime_field(2),
    RingSpec.prime_field(5),
    RingSpec.truncated(2, ("alpha", "beta", "gamma")),
    RingSpec.truncated(3, ("alpha", "beta", "gamma")),
    RingSpec.truncated(5, ("a", "b")),
]


def s(ring, text):
    return ring.scalar(text)


def test_rational_sum():
    Q = RingSpec.rational()
    assert add(s(Q, "1/2"), s(Q, "1/3")) == s(Q, "5/6")


def test_truncated_sum_collects_like_monomials():
    R = RingSpec.truncated(3, ("alpha", "beta", "gamma"))
    assert add(s(R, "alpha + beta"), s(R, "beta")) == s(R, "alpha + 2*beta")


def test_one_plus_one_vanishes_in_characteristic_two():
    F2 = RingSpec.prime_field(2)
    assert add(s(F2, "1"), s(F2, "1")).is_zero()


def test_square_of_variable_vanishes(F2abc):
    a = s(F2abc, "alpha")
    assert mul(a, a).is_zero()


def test_distinct_variables_multiply(F2abc):
    prod = mul(s(F2abc, "beta"), s(F2abc, "gamma"))
    assert str(prod) == "beta*gamma"
    assert prod == s(F2abc, "beta*gamma")


def test_rational_product():
    Q = RingSpec.rational()
    assert mul(s(Q, "2/3"), s(Q, "3/4")) == s(Q, "1/2")


def test_mixed_rings_raise():
    with pytest.raises(RingMismatch):
        add(s(RingSpec.prime_field(2), "1"), s(RingSpec.prime_field(3), "1"))
    with pytest.raises(RingMismatch):
        mul(s(RingSpec.rational(), "1"), s(RingSpec.prime_field(3), "1"))


def test_fp_basis_order_for_three_variables(F2abc):
    names = [str(m) for m in fp_basis(F2abc)]
    assert names == [
        "1", "gamma", "beta", "beta*gamma",
        "alpha", "alpha*gamma", "alpha*beta", "alpha*beta*gamma",
    ]


def test_fp_basis_small_cases():
    assert [str(m) for m in fp_basis(RingSpec.prime_field(5))] == ["1"]
    assert [str(m) for m in fp_basis(RingSpec.truncated(3, ("alpha",)))] == ["1", "alpha", "alpha^2"]
    with pytest.raises(UnsupportedRing):
        fp_basis(RingSpec.rational())


def test_fp_basis_length():
    assert len(fp_basis(RingSpec.truncated(3, ("a", "b")))) == 9


def test_composite_modulus_rejected():
    with pytest.raises(ValueError):
        RingSpec.prime_field(6)
    with pytest.raises(ValueError):
        RingSpec.truncated(4, ("a",))


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_ring_axioms_on_random_triples(ring):
    rng = random.Random(1234)
    zero, one = Scalar(ring, ring.zero), Scalar(ring, ring.one)
    for _ in range(1000):
        a, b, c = (Scalar(ring, ring.random(rng)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + zero == a
        assert a * one == a
        assert (a + (-a)).is_zero()


@pytest.mark.parametrize("ring", [r for r in RINGS if r.variables], ids=str)
def test_maximal_ideal_is_nilpotent(ring):
    rng = random.Random(7)
    for _ in range(200):
        x = Scalar(ring, ring.random(rng, constant=False))
        assert (x ** ring.p).is_zero()


def test_units_of_truncated_ring_invert():
    R = RingSpec.truncated(3, ("a", "b"))
    rng = random.Random(3)
    for _ in range(100):
        u = Scalar(R, R.random(rng, constant=False)) + 1
        assert u * u.inverse() == Scalar(R, R.one)


def test_canonical_forms_serialize_identically():
    R = RingSpec.truncated(3, ("a", "b"))
    assert str(s(R, "a*b + 2*a + a")) == str(s(R, "a*b"))
    Q = RingSpec.rational()
    assert s(Q, "2/4").value == Fraction(1, 2)


@given(st.integers(-50, 50), st.integers(1, 50), st.integers(-50, 50), st.integers(1, 50))
def test_rational_addition_matches_fractions(a, b, c, d):
    Q = RingSpec.rational()
    lhs = Scalar(Q, Fraction(a, b)) + Scalar(Q, Fraction(c, d))
    assert lhs.value == Fraction(a, b) + Fraction(c, d)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_prime_field_product_reduces(a, b):
    F7 = RingSpec.prime_field(7)
    assert (F7.scalar(a) * F7.scalar(b)).value == (a * b) % 7


def test_ring_text_round_trip():
    for ring in RINGS:
        assert RingSpec.parse(str(ring)) == ring
