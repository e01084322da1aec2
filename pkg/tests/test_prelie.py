import random

import pytest

from prelie_pbw.freemod import LinComb
from prelie_pbw.prelie import (
    BasisMismatch,
    FreePreLie,
    LieAlgebra,
    NotPreLie,
    StructurePreLie,
    Tree,
    TreeSyntaxError,
    chain,
    check_jacobi,
    check_prelie_axiom,
    commutator_bracket,
    corolla,
    find_non_jacobi,
    graft,
    leaf,
    nilpotent_square,
    non_prelie_control,
    prelie_product,
    random_tree,
    tree,
    trees_of_size,
    truncated_free_prelie,
    upper_triangular_2x2,
)
from prelie_pbw.scalars import RingSpec

DOT, L2, L3, C2 = leaf(), chain(2), chain(3), corolla(2)


def combo(ring, *pairs):
    return LinComb.from_pairs(ring, [(k, ring.from_int(c)) for k, c in pairs])


def test_grafting_two_leaves_gives_chain(Q):
    assert graft(DOT, DOT) == combo(Q, (L2, 1))


def test_grafting_leaf_onto_chain_hits_both_vertices(Q):
    assert graft(L2, DOT) == combo(Q, (L3, 1), (C2, 1))


def test_grafting_chain_onto_leaf(Q):
    assert graft(DOT, L2) == combo(Q, (L3, 1))


def test_symmetric_sites_give_multiplicity(Q):
    # both leaves of the cherry are equivalent grafting sites
    out = graft(C2, DOT)
    assert out.coeff(tree("x[x,x[x]]")) == 2
    assert out.coeff(tree("x[x,x,x]")) == 1


def test_structure_constant_product(Q):
    A = nilpotent_square(Q)
    e1, e2 = A.basis_element(0), A.basis_element(1)
    assert prelie_product(A, e1, e1) == e2
    assert prelie_product(A, e1, e2).is_zero()
    assert prelie_product(A, e2, e1).is_zero()
    assert prelie_product(A, e1, LinComb.zero(Q)).is_zero()


def test_free_product_is_grafting(Q):
    F = FreePreLie(Q)
    assert prelie_product(F, F.basis_element(DOT), F.basis_element(DOT)) == combo(Q, (L2, 1))


def test_foreign_key_rejected(Q):
    A = nilpotent_square(Q)
    with pytest.raises(BasisMismatch):
        prelie_product(A, LinComb.basis(Q, 5), A.basis_element(0))
    with pytest.raises(BasisMismatch):
        prelie_product(A, A.basis_element(0), LinComb.basis(RingSpec.prime_field(2), 0))


def test_grafting_satisfies_prelie_identity_to_six_vertices(Q):
    assert check_prelie_axiom(FreePreLie(Q), degree_cap=6) == (True, None)


def test_grafting_two_labels_to_six_vertices(Q):
    assert check_prelie_axiom(FreePreLie(Q, ("x", "y")), degree_cap=6)[0]


def test_idempotent_line_is_prelie(Q):
    A = StructurePreLie(Q, ["e"], {(0, 0): {0: Q.one}})
    assert check_prelie_axiom(A)[0]


def test_broken_table_reports_triple():
    A = non_prelie_control()
    ok, bad = check_prelie_axiom(A)
    assert not ok
    x, y, z, diff = bad
    assert not diff.is_zero()
    with pytest.raises(NotPreLie):
        StructurePreLie(A.ring, A.names, A.table)


def test_bracket_of_element_with_itself(Q):
    F = FreePreLie(Q)
    x = combo(Q, (L2, 3), (DOT, 1))
    assert commutator_bracket(F, x, x).is_zero()


def test_bracket_leaf_with_chain(Q):
    F = FreePreLie(Q)
    assert commutator_bracket(F, F.basis_element(DOT), F.basis_element(L2)) == combo(Q, (C2, -1))


def test_bracket_in_nilpotent_example(Q):
    A = nilpotent_square(Q)
    assert commutator_bracket(A, A.basis_element(0), A.basis_element(1)).is_zero()


@pytest.mark.parametrize("ring", [RingSpec.rational(), RingSpec.prime_field(2), RingSpec.prime_field(5)], ids=str)
def test_commutator_satisfies_jacobi(ring):
    for A in (upper_triangular_2x2(ring), nilpotent_square(ring), truncated_free_prelie(ring, 3)):
        assert check_jacobi(LieAlgebra.from_prelie(A))[0]


def test_zero_bracket_is_lie(Q):
    assert check_jacobi(LieAlgebra(Q, ["a", "b"], {}))[0]


def test_random_antisymmetric_map_violates_jacobi():
    L, seed = find_non_jacobi(RingSpec.prime_field(5), 3, seed=0)
    assert seed == 0
    assert not check_jacobi(L)[0]
    assert L.is_antisymmetric()


def test_canonical_form_ignores_child_order():
    rng = random.Random(2024)
    for _ in range(1000):
        t = random_tree(rng, rng.randint(1, 8), ("x", "y"))

        def shuffled(node):
            kids = [shuffled(c) for c in node.children]
            rng.shuffle(kids)
            return Tree(node.label, kids)

        u = shuffled(t)
        assert u == t and u.key == t.key
        assert tree(t.key) == t
        assert Tree(t.label, t.children) == t


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_graft_terms_match_vertex_count(n):
    for t in trees_of_size(n, ("x", "y")):
        for s in trees_of_size(2, ("x", "y")):
            out = graft(t, s)
            assert sum(c for _, c in out.items()) == t.size
            assert all(g.size == t.size + s.size for g in out.keys())


def test_tree_counts_match_known_sequence():
    assert [len(trees_of_size(n)) for n in range(1, 7)] == [1, 1, 2, 4, 9, 20]


def test_tree_syntax():
    assert str(tree("x[y,x[y]]")) == "x[x[y],y]"
    with pytest.raises(TreeSyntaxError):
        tree("x[")
    with pytest.raises(TreeSyntaxError):
        tree("x[y,]")


def test_truncated_free_algebra_dimension(Q):
    assert truncated_free_prelie(Q, 3).dim == 4


def test_structure_json_round_trip():
    A = upper_triangular_2x2(RingSpec.prime_field(3))
    B = StructurePreLie.from_json(A.to_json())
    assert B.names == A.names and B.table == A.table
