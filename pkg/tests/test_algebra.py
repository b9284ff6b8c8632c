import itertools

import pytest

from siltingkit.algebra import (Arrow, NonAdmissible, NotFiniteDimensional, Quiver, Relation,
                                TrivialExtension, build_algebra, dihedral_algebra, dihedral_trivial_extension,
                                is_symmetric_algebra, kronecker_algebra, presentation_matches_trivial_extension,
                                swap_labels)
from siltingkit.linalg import Field


def count_nonzero_words(n):
    """Words in x, y from vertex i that avoid xx and yy and stay in 1..n."""
    total = 0
    for i in range(1, n + 1):
        for length in range(0, n - i + 1):
            for w in itertools.product("xy", repeat=length):
                if all(a != b for a, b in zip(w, w[1:])):
                    total += 1
    return total


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_dihedral_dimension_matches_word_count(n):
    A = dihedral_algebra(n)
    assert A.dim == count_nonzero_words(n) == n * n


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dihedral_pair_dimensions(n):
    A = dihedral_algebra(n)
    for s in A.vertices:
        for t in A.vertices:
            want = 1 if s == t else (2 if t > s else 0)
            assert A.dim_between(s, t) == want


def test_multiplication_is_associative():
    assert dihedral_algebra(4).check_associative()
    assert dihedral_trivial_extension(4).check_associative()
    assert TrivialExtension(dihedral_algebra(3)).check_associative()


def test_word_products():
    A = dihedral_algebra(4)
    x1, y2 = A.word(1, "x"), A.word(2, "y")
    assert A.mul(x1, y2) == A.word(1, "xy")
    assert A.mul(x1, A.word(2, "x")) == {}
    assert A.mul(A.word(2, "x"), x1) == {}
    assert A.nilpotency_degree == 3


def test_fp_field_same_dimension():
    assert dihedral_algebra(4, field=Field(3)).dim == 16


def test_swap_automorphism_is_involution():
    A = dihedral_algebra(4)
    eps = swap_labels(A)
    for b in range(A.dim):
        e = {b: 1}
        assert eps.apply(eps.apply(e)) == e
    assert eps.apply(A.word(1, "xy")) == A.word(1, "yx")
    assert eps.compose(eps).is_identity()
    for a in range(A.dim):
        for b in range(A.dim):
            assert eps.apply(A.mul({a: 1}, {b: 1})) == A.mul(eps.apply({a: 1}), eps.apply({b: 1}))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_trivial_extension_dimension_and_symmetry(n):
    T = TrivialExtension(dihedral_algebra(n))
    assert T.dim == 2 * n * n
    assert is_symmetric_algebra(T, T.socle_form)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_trivial_extension_presentation(n):
    A, T = dihedral_algebra(n), dihedral_trivial_extension(n)
    assert T.dim == 2 * n * n
    assert presentation_matches_trivial_extension(A, T)


def test_odd_trivial_extension_presentation_rejected():
    with pytest.raises(ValueError):
        dihedral_trivial_extension(3)


def test_kronecker():
    K = kronecker_algebra()
    assert K.dim == 4
    assert K.dim_between(1, 2) == 2 and K.dim_between(2, 1) == 0


def test_free_loop_is_not_finite_dimensional():
    q = Quiver(1, (Arrow(0, "a", 1, 1),))
    with pytest.raises(NotFiniteDimensional):
        build_algebra(q, [], length_cap=6)


def test_loop_with_square_zero():
    q = Quiver(1, (Arrow(0, "a", 1, 1),))
    A = build_algebra(q, [Relation(((1, q.path(1, ["a", "a"])),))])
    assert A.dim == 2


def test_short_and_inhomogeneous_relations_rejected():
    q = Quiver(2, (Arrow(0, "a", 1, 2), Arrow(1, "b", 2, 2)))
    with pytest.raises(NonAdmissible):
        build_algebra(q, [Relation(((1, q.path(1, ["a"])),))])
    with pytest.raises(NonAdmissible):
        build_algebra(q, [Relation(((1, q.path(1, ["a", "b"])), (1, q.path(1, ["a", "b", "b"]))))])


def test_automorphism_must_fix_vertices_and_relations():
    from siltingkit.algebra import AlgebraAutomorphism, RelationNotPreserved
    A = dihedral_algebra(3)
    q = A.quiver
    x1, x2 = q.arrow_by_label("x", 1).id, q.arrow_by_label("x", 2).id
    m = {a.id: a.id for a in q.arrows}
    m[x1], m[x2] = x2, x1
    with pytest.raises(ValueError):
        AlgebraAutomorphism(A, m)
    # only x^2 = 0 imposed: swapping x and y does not preserve the ideal
    q3 = dihedral_algebra(3).quiver
    B = build_algebra(q3, [Relation(((1, q3.path(1, ["x", "x"])),))])
    with pytest.raises(RelationNotPreserved):
        swap_labels(B)
