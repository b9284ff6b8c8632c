import itertools

import pytest

from siltingkit.algebra import dihedral_algebra, dihedral_trivial_extension, kronecker_algebra
from siltingkit.linalg import Mat
from siltingkit.modules import (Module, ResolutionTooLong, decompose, direct_sum, find_isomorphism,
                                global_dimension, hom_dim, hom_dim_via_presentation, hom_space, injective,
                                is_isomorphic, minimal_projective_resolution, projective, simple, twist_module)


def sample_modules(S):
    A = S.A
    out = [S.E, S.aE]
    for i in A.vertices:
        out += [simple(A, i), projective(A, i), injective(A, i)]
    return out


def test_projective_and_injective_dims(a4):
    A = a4.A
    for i in A.vertices:
        assert projective(A, i).dims == A.dim_vector_projective(i)
        assert injective(A, i).dims == A.dim_vector_injective(i)


def test_yoneda(a4):
    # Hom(e_iA, M) = M e_i
    for M in sample_modules(a4):
        for i in a4.A.vertices:
            assert hom_dim(projective(a4.A, i), M) == M.dim(i)


def test_hom_matches_presentation_oracle(a4):
    mods = sample_modules(a4)
    for M, N in itertools.product(mods[:8], mods[:8]):
        assert hom_dim(M, N) == hom_dim_via_presentation(M, N)


def test_hom_basis_consists_of_homomorphisms(a4):
    for f in hom_space(a4.E, injective(a4.A, 4)):
        assert f.is_homomorphism()


def test_e_and_its_twist(a4):
    assert a4.E.dims == (1, 1, 1, 1)
    assert not is_isomorphic(a4.E, a4.aE)
    assert is_isomorphic(twist_module(a4.E, a4.eps), a4.aE)
    r = find_isomorphism(a4.E, a4.E)
    assert r.isomorphic and r.provenance()["exact"]


def test_selfinjective_projectives_are_injective():
    T = dihedral_trivial_extension(4)
    for i in T.vertices:
        assert is_isomorphic(projective(T, i), injective(T, i))


def test_decompose_direct_sum(a4):
    A = a4.A
    M = direct_sum(a4.E, a4.aE, projective(A, 2), simple(A, 3))
    parts = decompose(M)
    assert sorted(p.dims for p in parts) == sorted([a4.E.dims, a4.aE.dims, projective(A, 2).dims, (0, 0, 1, 0)])
    for want in (a4.E, a4.aE, projective(A, 2)):
        assert any(is_isomorphic(p, want) for p in parts)


def test_decompose_indecomposable(a4):
    assert len(decompose(a4.E)) == 1
    assert len(decompose(projective(a4.A, 1))) == 1


def euler_dims(R, A):
    X = R.to_complex()
    total = [0] * A.n
    for k, verts in X.terms.items():
        for v in verts:
            for j, d in enumerate(A.dim_vector_projective(v)):
                total[j] += (-1) ** k * d
    return tuple(total)


def test_resolution_euler_characteristic(a4):
    for M in sample_modules(a4):
        R = minimal_projective_resolution(M)
        assert euler_dims(R, a4.A) == M.dims


def test_resolution_of_e(a4):
    R = minimal_projective_resolution(a4.E)
    assert R.length == 3
    assert R.to_complex().describe() == "[-3] P4, [-2] P3, [-1] P2, [0] P1"
    assert minimal_projective_resolution(projective(a4.A, 2)).length == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_global_dimension(n):
    assert global_dimension(dihedral_algebra(n)) == n - 1


def test_kronecker_is_hereditary():
    assert global_dimension(kronecker_algebra()) == 1


def test_selfinjective_resolution_does_not_terminate():
    T = dihedral_trivial_extension(2)
    with pytest.raises(ResolutionTooLong):
        minimal_projective_resolution(simple(T, 1), max_length=6)


def test_relation_violation_rejected():
    A = dihedral_algebra(3)
    F = A.field
    # x and y both identity-like on a (1,1,1) module: x@1 x@2 != 0 violates x^2 = 0
    mats = {a.id: Mat(F, [[1]]) for a in A.quiver.arrows}
    with pytest.raises(ValueError):
        Module(A, (1, 1, 1), mats)
