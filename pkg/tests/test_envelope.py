import itertools

import pytest

from prelie_pbw.envelope import (
    T,
    CapExceeded,
    GhatAlgebra,
    SymmetryViolation,
    UEnvelope,
    build_phi,
    check_pbw_action,
    check_xx_condition,
    ghat_star,
    is_normal,
    pbw_action_failures,
    projection_matches_sym,
    ue_multiply,
    verify_ghat_theorem,
    verify_phi,
)
from prelie_pbw.freemod import LinComb
from prelie_pbw.prelie import (
    FreePreLie,
    LieAlgebra,
    NotALieAlgebra,
    find_non_jacobi,
    graft,
    leaf,
    nilpotent_square,
    non_prelie_control,
    truncated_free_prelie,
    upper_triangular_2x2,
    zero_algebra,
)
from prelie_pbw.scalars import RingSpec, UnsupportedRing

X, Y = leaf("x"), leaf("y")


def nonabelian(ring):
    """{e1, e2} = e1."""
    return LieAlgebra(ring, ["e1", "e2"], {(0, 1): {0: ring.one}, (1, 0): {0: ring.neg(ring.one)}})


def words(ring, *pairs):
    return LinComb.from_pairs(ring, [(tuple(w), ring.from_int(c)) for w, c in pairs])


def test_abelian_reorders_freely(Q):
    U = UEnvelope(LieAlgebra(Q, ["e1", "e2"], {}))
    assert U.multiply(U.generator(1), U.generator(0)) == words(Q, ((0, 1), 1))


def test_descent_rewrites_with_bracket(Q):
    got = ue_multiply(nonabelian(Q), words(Q, ((1,), 1)), words(Q, ((0,), 1)))
    assert got == words(Q, ((0, 1), 1), ((0,), -1))


def test_unit_is_neutral(Q):
    U = UEnvelope(nonabelian(Q))
    u = words(Q, ((0, 1), 2), ((1,), 1))
    assert U.multiply(u, U.one()) == u


def test_non_lie_input_rejected():
    L, _ = find_non_jacobi(RingSpec.prime_field(5), 3)
    with pytest.raises(NotALieAlgebra):
        UEnvelope(L)


@pytest.mark.parametrize("ring", [RingSpec.rational(), RingSpec.prime_field(5)], ids=str)
def test_rewriting_is_confluent(ring):
    for L in (nonabelian(ring), LieAlgebra.from_prelie(upper_triangular_2x2(ring))):
        U = UEnvelope(L)
        letters = range(L.dim)
        ws = [w for n in range(5) for w in itertools.product(letters, repeat=n)]
        for u, v, w in itertools.product(ws, repeat=3):
            if len(u) + len(v) + len(w) > 4:
                continue
            a, b, c = (LinComb.basis(ring, x) for x in (u, v, w))
            assert U.multiply(U.multiply(a, b), c) == U.multiply(a, U.multiply(b, c))
        for w in ws:
            assert all(is_normal(k) for k in U.normal_form(w))


def test_phi_low_degrees(Q):
    A = nilpotent_square(Q)
    phi = build_phi(A, 3)
    assert phi.of_monomial(()) == words(Q, ((), 1))
    assert phi.of_monomial((0,)) == words(Q, ((0,), 1))
    # Phi(e1 e1) = e1 e1 - e1 o e1 = e1 e1 - e2
    assert phi.of_monomial((0, 0)) == words(Q, ((0, 0), 1), ((1,), -1))


def test_phi_degree_two_recursion(Q):
    A = upper_triangular_2x2(Q)
    phi = build_phi(A, 2)
    U = phi.envelope
    for x, y in itertools.product(range(3), repeat=2):
        want = U.multiply(phi.of_monomial((x,)), words(Q, ((y,), 1))) - LinComb.from_pairs(
            Q, [((k,), c) for k, c in A.product_keys(x, y).items()]
        )
        assert phi.of_monomial((x, y)) == want


def test_phi_checks_on_nilpotent_square(Q):
    assert verify_phi(nilpotent_square(Q), 4).passed


def test_phi_is_triangular_on_truncated_free(Q):
    A = truncated_free_prelie(RingSpec.prime_field(2), 3)
    phi = build_phi(A, 3)
    for m in itertools.combinations_with_replacement(range(A.dim), 3):
        img = phi.of_monomial(m)
        assert img.filter(lambda w: len(w) == 3) == LinComb.basis(A.ring, m)
        assert all(len(w) <= 3 for w in img)
    assert verify_phi(A, 3).passed


def test_phi_is_canonical_map_for_zero_product(Q):
    A = zero_algebra(Q, 2)
    phi = build_phi(A, 3)
    for m in itertools.combinations_with_replacement(range(2), 3):
        assert phi.of_monomial(m) == LinComb.basis(Q, m)
    assert verify_phi(A, 3).passed


def test_phi_rejects_non_prelie():
    with pytest.raises(SymmetryViolation):
        build_phi(non_prelie_control(), 3)


def test_phi_cap_enforced(Q):
    phi = build_phi(nilpotent_square(Q), 2)
    with pytest.raises(CapExceeded):
        phi.of_monomial((0, 0, 0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_transposition_action_relations(Q, n):
    assert check_pbw_action(LieAlgebra(Q, ["e1", "e2"], {}), n)
    assert check_pbw_action(nonabelian(Q), n)
    assert check_pbw_action(nonabelian(RingSpec.prime_field(5)), n)


def test_non_jacobi_breaks_braid_relation():
    L, _ = find_non_jacobi(RingSpec.prime_field(5), 3)
    failures = pbw_action_failures(L, 3)
    assert failures
    assert {name for name, _, _ in failures} == {"braid"}


def test_self_bracket_condition():
    F2 = RingSpec.prime_field(2)
    assert check_xx_condition(LieAlgebra(F2, ["e1", "e2"], {(0, 1): {0: 1}, (1, 0): {0: 1}}))
    assert not check_xx_condition(LieAlgebra(F2, ["e1", "e2"], {(0, 0): {1: 1}}))
    assert check_xx_condition(nonabelian(RingSpec.prime_field(5)))
    with pytest.raises(UnsupportedRing):
        check_xx_condition(nonabelian(RingSpec.rational()))


@pytest.fixture
def G(Q):
    return GhatAlgebra(FreePreLie(Q, ("x", "y")))


def tree_words(Q, e, tail):
    return LinComb.from_pairs(Q, [((t,) + tuple(tail), c) for t, c in e.items()])


def test_degree_one_product_gains_t(Q, G):
    got = G.star(words(Q, ((X,), 1)), words(Q, ((Y,), 1)))
    assert got == words(Q, ((X, Y), 1)) + tree_words(Q, graft(X, Y), [T])


def test_t_multiplies_by_concatenation(Q, G):
    f = words(Q, ((X, Y), 1), ((Y,), 3))
    t = words(Q, ((T,), 1))
    assert G.star(f, t) == words(Q, ((X, Y, T), 1), ((Y, T), 3))
    assert G.star(t, f) == words(Q, ((T, X, Y), 1), ((T, Y), 3))


def test_commutator_carries_bracket_times_t(Q, G):
    x, y = words(Q, ((X,), 1)), words(Q, ((Y,), 1))
    got = G.star(x, y) - G.star(y, x)
    want = words(Q, ((X, Y), 1), ((Y, X), -1)) + tree_words(Q, graft(X, Y) - graft(Y, X), [T])
    assert got == want


def test_module_level_star_respects_cap(Q):
    F = FreePreLie(Q, ("x",))
    with pytest.raises(CapExceeded):
        ghat_star(F, words(Q, ((X, X), 1)), words(Q, ((X, X), 1)), cap=3)


def test_word_star_conditions_on_free_algebra(Q):
    rep = verify_ghat_theorem(FreePreLie(Q, ("x",)), 4)
    assert rep.passed, [c.line() for c in rep.checks]


def test_zero_product_star_is_concatenation(Q):
    A = zero_algebra(Q, 2)
    G = GhatAlgebra(A)
    for u, v in itertools.product([(0,), (1, 0), (T, 1)], repeat=2):
        assert G.star(words(Q, (u, 1)), words(Q, (v, 1))) == words(Q, (u + v, 1))
    assert verify_ghat_theorem(A, 3).passed


def test_broken_table_fails_equivariance():
    rep = verify_ghat_theorem(non_prelie_control(), 3)
    by_name = {c.name: c for c in rep.checks}
    assert not by_name["equivariance"].passed
    assert not rep.passed


@pytest.mark.parametrize("ring", [RingSpec.rational(), RingSpec.prime_field(5)], ids=str)
def test_projection_recovers_commutative_star(ring):
    assert projection_matches_sym(nilpotent_square(ring), 4)[0]
    assert projection_matches_sym(FreePreLie(ring, ("x",)), 4)[0]
