import random

import pytest

from prelie_pbw.freemod import (
    DimensionMismatch,
    FpVectorSpace,
    LinComb,
    UnknownBasisKey,
    flatten_to_fp,
    lincomb_add,
    lincomb_scale,
    span_membership,
    sub_multisets,
    sym_product,
    tensor,
    unflatten_from_fp,
    unshuffles,
)
from prelie_pbw.scalars import RingMismatch, RingSpec


def test_opposite_terms_cancel(Q):
    a = LinComb.basis(Q, "t1", Q.from_int(2))
    b = LinComb.basis(Q, "t1", Q.from_int(-2))
    assert lincomb_add(a, b).is_zero()
    assert len(lincomb_add(a, b)) == 0


def test_scaling_is_termwise(Q):
    x = LinComb.from_pairs(Q, [("t1", Q.one), ("t2", Q.one)])
    assert lincomb_scale(x, 3) == LinComb.from_pairs(Q, [("t1", Q.from_int(3)), ("t2", Q.from_int(3))])


def test_scaling_reduces_mod_three():
    F3 = RingSpec.prime_field(3)
    x = LinComb.basis(F3, "t1", 2)
    assert lincomb_scale(x, 2) == LinComb.basis(F3, "t1")


def test_scaling_by_zero_purges_terms():
    F3 = RingSpec.prime_field(3)
    assert lincomb_scale(LinComb.basis(F3, "t1"), 3).is_zero()


def test_adding_across_rings_raises(Q):
    with pytest.raises(RingMismatch):
        LinComb.basis(Q, "a") + LinComb.basis(RingSpec.prime_field(2), "a")


def test_flatten_single_monomial(F2abc):
    x = LinComb.basis(F2abc, "e1", F2abc.parse_scalar("beta*gamma"))
    vec = flatten_to_fp(x, ["e1", "e2"])
    assert len(vec) == 16
    assert vec == [0, 0, 0, 1] + [0] * 12


def test_flatten_zero(F2abc):
    assert flatten_to_fp(LinComb.zero(F2abc), ["e1", "e2"]) == [0] * 16


def test_flatten_unit_plus_alpha(F2abc):
    x = LinComb.basis(F2abc, "e2", F2abc.parse_scalar("1 + alpha"))
    vec = flatten_to_fp(x, ["e1", "e2"])
    assert vec[:8] == [0] * 8
    assert vec[8:] == [1, 0, 0, 0, 1, 0, 0, 0]


def test_flatten_unknown_key(F2abc):
    with pytest.raises(UnknownBasisKey):
        flatten_to_fp(LinComb.basis(F2abc, "e3"), ["e1", "e2"])


def random_element(ring, rng, keys):
    return LinComb.from_pairs(ring, [(k, ring.random(rng)) for k in keys if rng.random() < 0.7])


@pytest.mark.parametrize("ring", [RingSpec.truncated(2, ("alpha", "beta", "gamma")), RingSpec.truncated(3, ("a", "b")), RingSpec.prime_field(5)], ids=str)
def test_flatten_is_linear_and_invertible(ring):
    rng = random.Random(99)
    keys = ["e1", "e2", "e3"]
    p = ring.p
    for _ in range(500):
        a, b = random_element(ring, rng, keys), random_element(ring, rng, keys)
        fa, fb = flatten_to_fp(a, keys), flatten_to_fp(b, keys)
        assert flatten_to_fp(a + b, keys) == [(x + y) % p for x, y in zip(fa, fb)]
        assert unflatten_from_fp(ring, fa, keys) == a


def test_unit_vectors_span_diagonal():
    S = FpVectorSpace(2, 2, [[1, 0], [0, 1]])
    assert span_membership(S, [1, 1])


def test_diagonal_excludes_unit_vector():
    S = FpVectorSpace(2, 2, [[1, 1]])
    assert not span_membership(S, [1, 0])


def test_membership_dimension_checked():
    S = FpVectorSpace(3, 2, [[1, 1]])
    with pytest.raises(DimensionMismatch):
        span_membership(S, [1, 0, 0])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_adding_a_vector_makes_it_a_member(p):
    rng = random.Random(p)
    for _ in range(100):
        n = rng.randint(2, 8)
        gens = [[rng.randrange(p) for _ in range(n)] for _ in range(rng.randint(0, n))]
        v = [rng.randrange(p) for _ in range(n)]
        S = FpVectorSpace(p, n, gens)
        before = S.rank
        S.add(v)
        assert span_membership(S, v)
        assert S.rank in (before, before + 1)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_row_reduction_is_idempotent(p):
    rng = random.Random(10 + p)
    for _ in range(50):
        n = rng.randint(1, 9)
        S = FpVectorSpace(p, n, [[rng.randrange(p) for _ in range(n)] for _ in range(6)])
        again = FpVectorSpace(p, n, S.basis())
        assert again.basis() == S.basis()


def test_rank_of_dependent_rows():
    S = FpVectorSpace(3, 3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    assert S.rank == 2


def test_tensor_concatenates_keys(Q):
    x = LinComb.from_pairs(Q, [(("a",), Q.one), (("b",), Q.from_int(2))])
    y = LinComb.basis(Q, ("c",), Q.from_int(3))
    t = tensor(x, y)
    assert t.coeff((("a",), ("c",))) == 3
    assert t.coeff((("b",), ("c",))) == 6


def test_sym_product_sorts_factors():
    assert sym_product((1, 3), (2,)) == (1, 2, 3)


def test_sub_multisets_count_multiplicities():
    splits = {(a, b): n for a, b, n in sub_multisets((1, 1, 2))}
    assert splits[((1,), (1, 2))] == 2
    assert splits[((), (1, 1, 2))] == 1
    assert sum(splits.values()) == 2 ** 3


def test_unshuffles_cover_all_subsets():
    assert len(list(unshuffles("abc"))) == 8


def test_json_round_trip(F2abc):
    x = LinComb.from_pairs(F2abc, [("e1", F2abc.parse_scalar("beta*gamma + 1")), ("e2", F2abc.one)])
    assert LinComb.from_json(x.to_json()) == x
