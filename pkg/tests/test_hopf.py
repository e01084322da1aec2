import itertools
import random

import pytest

from prelie_pbw.freemod import LinComb, bilinear
from prelie_pbw.hopf import (
    NonHomogeneousInput,
    SymAlgebra,
    circ_agrees_with_star,
    circ_ext,
    circ_from_star,
    ck_forest_product,
    coproduct,
    sample_monomials,
    star,
    star_equals_ck,
    sym_multiply,
    verify_star_theorem,
)
from prelie_pbw.prelie import (
    FreePreLie,
    chain,
    corolla,
    graft,
    leaf,
    nilpotent_square,
    non_prelie_control,
    random_prelie,
    truncated_free_prelie,
    upper_triangular_2x2,
    zero_algebra,
)
from prelie_pbw.scalars import RingSpec

X, Y, Z = leaf("x"), leaf("y"), leaf("z")
DOT, L2, L3, C2 = leaf(), chain(2), chain(3), corolla(2)


@pytest.fixture
def S3(Q):
    return SymAlgebra(FreePreLie(Q, ("x", "y", "z")))


def lift(S, e, extra=()):
    """Embed a tree combination of g into Sym g, multiplied by the forest ``extra``."""
    return LinComb.from_pairs(S.ring, [(tuple(sorted((t,) + tuple(extra))), c) for t, c in e.items()])


def test_multiply_by_unit(S3):
    x = S3.generator(X)
    assert sym_multiply(S3, x, S3.one()) == x


def test_multiply_is_multiset_union(Q):
    S = SymAlgebra(nilpotent_square(Q))
    assert sym_multiply(S, S.monomial([0]), S.monomial([0, 1])) == S.monomial([0, 0, 1])


def test_forest_product(Q):
    S = SymAlgebra(FreePreLie(Q))
    assert sym_multiply(S, S.generator(DOT), S.generator(L2)) == S.monomial([DOT, L2])


def pair(S, a, b, c=1):
    return LinComb.basis(S.ring, (tuple(sorted(a)), tuple(sorted(b))), S.ring.from_int(c))


def test_generators_are_primitive(S3):
    assert coproduct(S3, S3.generator(X)) == pair(S3, [X], []) + pair(S3, [], [X])


def test_coproduct_of_two_distinct_generators(S3):
    got = coproduct(S3, S3.monomial([X, Y]))
    want = pair(S3, [X, Y], []) + pair(S3, [X], [Y]) + pair(S3, [Y], [X]) + pair(S3, [], [X, Y])
    assert got == want


def test_coproduct_of_square(S3):
    got = coproduct(S3, S3.monomial([X, X]))
    assert got == pair(S3, [X, X], []) + pair(S3, [X], [X], 2) + pair(S3, [], [X, X])


def test_coproduct_is_coassociative_and_cocommutative(Q):
    S = SymAlgebra(nilpotent_square(Q))
    for m in sample_monomials(S.algebra, 6):
        d = coproduct(S, S.monomial(m))
        swapped = d.map_keys(lambda k: (k[1], k[0]))
        assert swapped == d
        # (D x 1) D and (1 x D) D as combinations of monomial triples
        lhs = LinComb.from_pairs(Q, [((a1, a2, b), c * c1) for (a, b), c in d.items() for (a1, a2), c1 in coproduct(S, S.monomial(a)).items()])
        rhs = LinComb.from_pairs(Q, [((a, b1, b2), c * c2) for (a, b), c in d.items() for (b1, b2), c2 in coproduct(S, S.monomial(b)).items()])
        assert lhs == rhs


def test_circ_with_unit_right_factor(S3):
    a = S3.monomial([X, Y])
    assert circ_ext(S3, a, S3.one()) == a


def test_product_circ_generator_splits(S3, Q):
    got = circ_ext(S3, S3.monomial([X, Y]), S3.generator(Z))
    want = lift(S3, graft(X, Z), [Y]) + lift(S3, graft(Y, Z), [X])
    assert got == want


def test_generator_circ_product_peels(S3):
    F = S3.algebra
    x, y, z = (F.basis_element(t) for t in (X, Y, Z))
    xy = bilinear(x, y, F.product_keys)
    yz = bilinear(y, z, F.product_keys)
    want = lift(S3, bilinear(xy, z, F.product_keys)) - lift(S3, bilinear(x, yz, F.product_keys))
    assert circ_ext(S3, S3.generator(X), S3.monomial([Y, Z])) == want


def test_degree_one_star_adds_product(S3):
    got = star(S3, S3.generator(X), S3.generator(Y))
    assert got == S3.monomial([X, Y]) + lift(S3, graft(X, Y))


def test_star_with_unit(S3):
    a = S3.monomial([X, Y, Y])
    assert star(S3, a, S3.one()) == a
    assert star(S3, S3.one(), a) == a


def test_star_of_two_leaves(Q):
    S = SymAlgebra(FreePreLie(Q))
    assert star(S, S.generator(DOT), S.generator(DOT)) == S.monomial([DOT, DOT]) + S.generator(L2)


def forest(Q, *pairs):
    return LinComb.from_pairs(Q, [(tuple(sorted(f)), Q.from_int(c)) for f, c in pairs])


def test_forest_product_of_two_leaves(Q):
    assert ck_forest_product([DOT], [DOT]) == forest(Q, ([DOT, DOT], 1), ([L2], 1))


def test_forest_product_unit(Q):
    assert ck_forest_product([], [DOT, L2]) == forest(Q, ([DOT, L2], 1))


def test_forest_product_chain_and_leaf(Q):
    assert ck_forest_product([L2], [DOT]) == forest(Q, ([L2, DOT], 1), ([L3], 1), ([C2], 1))


def test_star_matches_forest_product_to_five_vertices():
    assert star_equals_ck(5) == (True, None)
    assert star_equals_ck(4, ("x", "y"))[0]


def test_circ_recovered_from_star_in_degree_one(S3):
    got = circ_from_star(S3.star, S3.generator(X), S3.generator(Y))
    assert got == lift(S3, graft(X, Y))


def test_circ_recovered_with_unit(S3):
    a = S3.monomial([X, Y])
    assert circ_from_star(S3.star, a, S3.one()) == a


def test_circ_from_star_needs_homogeneous_input(S3):
    with pytest.raises(NonHomogeneousInput):
        circ_from_star(S3.star, S3.generator(X) + S3.monomial([X, Y]), S3.generator(Z))


def test_circ_routes_agree_on_free_algebra(Q):
    S = SymAlgebra(FreePreLie(Q))
    monos = sample_monomials(S.algebra, 5)
    assert circ_agrees_with_star(S, monos, lambda m: sum(t.size for t in m), 5)[0]


def test_star_product_conditions_on_free_algebra(Q):
    rep = verify_star_theorem(FreePreLie(Q), 5)
    assert rep.passed, rep


def test_zero_product_gives_commutative_star(Q):
    A = zero_algebra(Q, 2)
    S = SymAlgebra(A)
    for a, b in itertools.product(sample_monomials(A, 3), repeat=2):
        assert star(S, S.monomial(a), S.monomial(b)) == sym_multiply(S, S.monomial(a), S.monomial(b))
    assert verify_star_theorem(A, 4).passed


@pytest.mark.parametrize(
    "A",
    [
        upper_triangular_2x2(RingSpec.rational()),
        random_prelie(RingSpec.prime_field(2), truncated_free_prelie(RingSpec.prime_field(2), 3), random.Random(1)),
        random_prelie(RingSpec.prime_field(5), nilpotent_square(RingSpec.prime_field(5)), random.Random(2)),
    ],
    ids=["upper_triangular_Q", "truncated_free_F2", "nilpotent_square_F5"],
)
def test_star_product_conditions_on_structure_algebras(A):
    rep = verify_star_theorem(A, 4)
    assert rep.passed, [c.line() for c in rep.checks]


def test_broken_table_breaks_associativity():
    rep = verify_star_theorem(non_prelie_control(), 3)
    by_name = {c.name: c for c in rep.checks}
    assert not by_name["associativity"].passed
