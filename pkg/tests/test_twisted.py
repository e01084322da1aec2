import itertools
import math
import random

import pytest

from prelie_pbw.freemod import LinComb
from prelie_pbw.prelie import (
    LieAlgebra,
    check_jacobi,
    find_non_jacobi,
    nilpotent_square,
    non_prelie_control,
    random_table,
    truncated_free_prelie,
    upper_triangular_2x2,
    zero_algebra,
)
from prelie_pbw.scalars import RingSpec
from prelie_pbw.twisted import (
    SWAP12,
    CapExceeded,
    MatrixSModule,
    NotAnSModule,
    NotTwistedPreLie,
    SizeMismatch,
    TwistedBilinearOp,
    TwistedSym,
    beta,
    block_perm_expand,
    check_equivariance,
    check_pltwlie_equivalence,
    check_twisted_axiom,
    check_word_poisson,
    compose,
    degree_zero_matches_sym,
    identity,
    lie_in_degree_zero,
    permuted_sizes,
    random_smodule,
    random_two_step,
    smod_tensor,
    suspend_bracket,
    suspended_twisted,
    twisted_coproduct,
    twisted_star,
    unit_smodule,
    verify_twisted_coproduct,
    verify_twisted_star,
)

F2, F3, F5 = (RingSpec.prime_field(p) for p in (2, 3, 5))


def test_swap_of_one_and_two_letters():
    # letter 1 goes to 3, letters 2 and 3 move down (0-based below)
    assert block_perm_expand(SWAP12, (1, 2)) == (2, 0, 1)


def test_swap_of_two_pairs():
    assert block_perm_expand(SWAP12, (2, 2)) == (2, 3, 0, 1)


@pytest.mark.parametrize("sizes", [(0,), (3,), (1, 2, 0), (2, 2, 1, 3)])
def test_identity_block_permutation(sizes):
    assert block_perm_expand(identity(len(sizes)), sizes) == identity(sum(sizes))


def test_block_size_mismatch():
    with pytest.raises(SizeMismatch):
        block_perm_expand((1, 0), (1, 2, 3))
    with pytest.raises(SizeMismatch):
        block_perm_expand((0, 0), (1, 1))


def test_block_expansion_respects_composition():
    rng = random.Random(77)
    for _ in range(500):
        k = rng.randint(1, 5)
        s = tuple(rng.sample(range(k), k))
        t = tuple(rng.sample(range(k), k))
        sizes = tuple(rng.randint(0, 3) for _ in range(k))
        lhs = block_perm_expand(compose(s, t), sizes)
        rhs = compose(block_perm_expand(s, permuted_sizes(t, sizes)), block_perm_expand(t, sizes))
        assert lhs == rhs


def test_tensor_of_two_degree_one_modules():
    g = MatrixSModule.trivial(F3, {1: 2})
    h = MatrixSModule.trivial(F3, {1: 3})
    assert smod_tensor(g, h).dimension(2) == 2 * 2 * 3


def test_tensor_with_unit_keeps_dimensions():
    rng = random.Random(4)
    for _ in range(5):
        g = random_smodule(F5, rng)
        T = smod_tensor(g, unit_smodule(F5))
        assert all(T.dimension(m) == g.dimension(m) for m in range(g.max_degree + 1))


@pytest.mark.parametrize("ring", [F2, F3, F5], ids=str)
def test_tensor_dimension_counts_shuffles(ring):
    rng = random.Random(ring.p)
    for _ in range(4):
        g, h = random_smodule(ring, rng), random_smodule(ring, rng)
        T = smod_tensor(g, h)
        assert T.check_coxeter()[0]
        for n in range(g.max_degree + h.max_degree + 1):
            want = sum(math.comb(n, i) * g.dimension(i) * h.dimension(n - i) for i in range(n + 1))
            assert T.dimension(n) == want


@pytest.mark.parametrize("ring", [F2, F3, F5], ids=str)
def test_braiding_twice_is_identity(ring):
    rng = random.Random(10 * ring.p)
    for _ in range(4):
        g, h = random_smodule(ring, rng), random_smodule(ring, rng)
        T, back = smod_tensor(g, h), smod_tensor(h, g)
        for key in T.all_keys():
            v = LinComb.basis(ring, key)
            assert beta(back, beta(T, v)) == v


def test_bad_transposition_matrix_rejected():
    # (0 1) acting as the zero map does not square to the identity
    with pytest.raises(NotAnSModule):
        MatrixSModule(F3, {2: (["y"], [{}])})


def test_smodule_json_round_trip():
    M = random_smodule(F5, random.Random(9))
    again = MatrixSModule.from_json(M.to_json())
    assert again.to_json() == M.to_json()


def test_zero_bracket_is_twisted_lie():
    M = MatrixSModule.trivial(F3, {1: 1, 2: 1})
    op = TwistedBilinearOp(M, M, M, lambda x, y: {})
    assert check_twisted_axiom(op, "lie")[0]


@pytest.mark.parametrize("make", [lambda r: LieAlgebra.from_prelie(upper_triangular_2x2(r)), lambda r: find_non_jacobi(r, 3)[0]])
def test_degree_zero_jacobi_matches_classical(make):
    L = make(F5)
    assert check_twisted_axiom(lie_in_degree_zero(L), "lie")[0] == check_jacobi(L)[0]


def test_suspended_bracket_of_prelie_is_twisted_lie():
    for A in (nilpotent_square(F5), upper_triangular_2x2(F3), truncated_free_prelie(F2, 3)):
        op = suspend_bracket(A, 2)
        assert check_equivariance(op)[0]
        assert check_twisted_axiom(op, "lie")[0]


def test_suspended_bracket_on_generators(Q):
    A = upper_triangular_2x2(Q)
    op = suspend_bracket(A, 2)
    x, y = (0, 0, 0), (0, 0, 1)  # E11 and E12 with no t on either side
    got = op(LinComb.basis(Q, x), LinComb.basis(Q, y))
    # (E11 o E12) t - t (E12 o E11) = E12 t - 0
    assert got == LinComb.basis(Q, (0, 1, 1))


def test_t_factors_out_of_bracket(Q):
    A = upper_triangular_2x2(Q)
    op = suspend_bracket(A, 3)
    for i, j in itertools.product(range(3), repeat=2):
        plain = op.keys((0, 0, i), (0, 0, j))
        shifted = op.keys((1, 0, i), (0, 0, j))
        assert shifted == {(a + 1, b, k): c for (a, b, k), c in plain.items()}


def test_zero_product_gives_zero_bracket():
    op = suspend_bracket(zero_algebra(F3, 2), 2)
    assert all(not op.keys(u, v) for u in op.left.all_keys(1) for v in op.left.all_keys(1))


def test_bracket_beyond_truncation():
    op = suspend_bracket(nilpotent_square(F5), 1)
    with pytest.raises(CapExceeded):
        op.keys((1, 0, 0), (0, 0, 0))


def test_equivalence_on_zero_product():
    agree, info = check_pltwlie_equivalence(zero_algebra(F2, 2))
    assert agree and info["prelie"] and info["twisted_lie"]


def test_equivalence_on_nilpotent_square():
    agree, info = check_pltwlie_equivalence(nilpotent_square(F5))
    assert agree and info["prelie"] and info["twisted_lie"]


def test_equivalence_on_random_broken_product():
    rng = random.Random(5)
    while True:
        A = random_table(F3, 2, rng)
        agree, info = check_pltwlie_equivalence(A)
        if not info["prelie"]:
            break
    assert agree and not info["twisted_lie"]


def test_equivalence_on_control():
    agree, info = check_pltwlie_equivalence(non_prelie_control())
    assert agree and not info["prelie"]


def test_word_poisson_identities():
    rep = check_word_poisson(nilpotent_square(F3), 3)
    assert rep.passed, [c.line() for c in rep.checks]


@pytest.fixture
def two_gens():
    M = MatrixSModule.trivial(F5, {1: 2})
    return TwistedSym(M, lambda x, y: {})


def test_coproduct_of_generator(two_gens):
    m = two_gens.concat([(1, 0)])
    assert twisted_coproduct(two_gens, m) == {((), m): 1, (m, ()): 1}


def test_coproduct_of_two_generators(two_gens):
    T = two_gens
    m = T.concat([(1, 0), (1, 1)])
    a, b = m
    want = {((), m): 1, ((a,), (b,)): 1, ((b,), (a,)): 1, (m, ()): 1}
    assert twisted_coproduct(T, m) == want


def test_counit_laws_in_positive_degree(two_gens):
    T = two_gens
    for keys in [[(1, 0)], [(1, 0), (1, 1)], [(1, 1), (1, 1), (1, 0)]]:
        m = T.concat(keys)
        assert m != ()
        delta = twisted_coproduct(T, m)
        assert {k: c for k, c in delta.items() if k[0] == ()} == {((), m): 1}
        assert {k: c for k, c in delta.items() if k[1] == ()} == {(m, ()): 1}


def test_generators_multiply_with_correction():
    rng = random.Random(3)
    T = random_two_step(F5, rng)
    x1, x2 = (1, 0), (1, 1)
    a, b = T.concat([x1]), T.concat([x2])
    got = twisted_star(T, LinComb.basis(F5, a), LinComb.basis(F5, b))
    want = LinComb.basis(F5, T.multiply(a, b)) + LinComb.from_pairs(
        F5, [(((((0, 1)), k),), c) for k, c in T.op(x1, x2).items()]
    )
    assert got == want


def test_zero_operation_gives_commutative_product(two_gens):
    T = two_gens
    a, b = T.concat([(1, 0)]), T.concat([(1, 1)])
    ab = twisted_star(T, LinComb.basis(F5, a), LinComb.basis(F5, b))
    assert ab == LinComb.basis(F5, T.multiply(a, b))


def test_star_cap_enforced(two_gens):
    a = two_gens.concat([(1, 0), (1, 1)])
    with pytest.raises(CapExceeded):
        twisted_star(two_gens, LinComb.basis(F5, a), LinComb.basis(F5, a), cap=3)


@pytest.mark.parametrize("ring", [RingSpec.rational(), F2, F5], ids=str)
def test_degree_zero_star_is_ordinary_star(ring):
    assert degree_zero_matches_sym(upper_triangular_2x2(ring), 4)[0]
    assert degree_zero_matches_sym(nilpotent_square(ring), 4)[0]


@pytest.mark.parametrize(
    "T",
    [
        random_two_step(F5, random.Random(0)),
        random_two_step(F3, random.Random(1), 2, 1),
        suspended_twisted(truncated_free_prelie(F5, 1), 1),
        suspended_twisted(zero_algebra(F3, 1), 1),
    ],
    ids=["two_step_F5", "two_step_F3", "suspended_free_F5", "suspended_zero_F3"],
)
def test_twisted_star_conditions_to_weight_four(T):
    for rep in (verify_twisted_coproduct(T, 4), verify_twisted_star(T, 4)):
        assert rep.passed, [c.line() for c in rep.checks]


def test_suspended_broken_product_is_rejected():
    with pytest.raises(NotTwistedPreLie):
        suspended_twisted(non_prelie_control(), 2)
