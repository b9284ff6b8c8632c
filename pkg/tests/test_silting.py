import json

import pytest

from siltingkit.algebra import dihedral_trivial_extension, kronecker_algebra, swap_labels
from siltingkit.complexes import (direct_sum, end_dim, hom_dims, iso_complex, regular, shift, stalk,
                                  twist_complex)
from siltingkit.silting import (CERTIFIED, CONFIRMED, LEFT, REFUTED, RIGHT, UNKNOWN, InvalidCertificate,
                                SiltingObject, alpha_invariant, explore, induce_trivial_extension,
                                inverse_spherical_twist, is_presilting, is_silting, k0_spans,
                                minimal_approximation, mutate, serre_compare, spherical_twist)

K = kronecker_algebra()


def test_kronecker_left_approximation():
    # Hom(e_2A, e_1A) = e_1Ae_2 is 2-dimensional
    tri = minimal_approximation(stalk(K, 2), [stalk(K, 1)], LEFT)
    assert tri.multiplicities == [2]
    assert tri.factorization_holds() and tri.is_minimal()
    assert tri.cone.multiplicities() == {-1: {2: 1}, 0: {1: 2}}


def test_kronecker_right_approximation():
    tri = minimal_approximation(stalk(K, 1), [stalk(K, 2)], RIGHT)
    assert tri.multiplicities == [2]
    assert tri.factorization_holds() and tri.is_minimal()
    assert tri.cone.multiplicities() == {0: {2: 2}, 1: {1: 1}}


def test_kronecker_zero_approximation():
    # Hom(e_1A, e_2A) = e_2Ae_1 = 0, so the cone is e_1A[1]
    tri = minimal_approximation(stalk(K, 1), [stalk(K, 2)], LEFT)
    assert tri.multiplicities == [0]
    assert iso_complex(tri.cone, shift(stalk(K, 1), 1))


def test_kronecker_mutation():
    M = SiltingObject.regular(K)
    keep = [i for i, s in enumerate(M.summands) if s.terms[0] == (1,)]
    N = mutate(M, keep, LEFT)
    shapes = sorted(s.describe() for s in N.summands)
    assert shapes == sorted(["[0] P1", "[-1] P2, [0] P1^2"])
    assert is_presilting(N.complex)


def test_mutation_at_everything_is_shift(a4):
    A = a4.A
    M = SiltingObject.regular(A)
    assert iso_complex(mutate(M, [], LEFT).complex, shift(regular(A), 1))
    assert iso_complex(mutate(M, [], RIGHT).complex, shift(regular(A), -1))


def test_left_then_right_mutation_round_trips(a4):
    M = SiltingObject.regular(a4.A)
    for keep in ([0, 1, 2], [1, 3], [0]):
        N = mutate(M, keep, LEFT)
        assert mutate(N, keep, RIGHT).is_isomorphic(M)


def test_presilting(a4):
    assert is_presilting(regular(a4.A))
    assert not is_presilting(a4.PE)  # Hom(P_E, P_E[3]) != 0
    assert is_presilting(a4.PE) is False


def test_k0_spans():
    assert k0_spans([[1, 0], [1, 1]], 2)
    assert not k0_spans([[2, 0], [0, 1]], 2)
    assert not k0_spans([[1, 0]], 2)


def test_is_silting(a4):
    A = a4.A
    assert is_silting(shift(regular(A), 1)).status == CERTIFIED
    v = is_silting(stalk(A, [1, 2]))
    assert v.status == UNKNOWN and v.checks["k0_spans"] is False
    v = is_silting(regular(A), budget=0)
    assert not v and "budget" in v.checks["generation"]


def test_spherical_certificate(a4, a3):
    c = a4.cert
    assert c.valid and c.ext_table[0] == 1 and c.ext_table[3] == 1
    d = json.loads(c.to_json())
    assert d["valid"] is True and d["d"] == 3
    c3 = a3.cert
    assert not c3.valid
    assert c3.serre["isomorphic_to_twist"] == ["eps"]
    with pytest.raises(InvalidCertificate):
        spherical_twist(c3, regular(a3.A))


def test_twist_of_spherical_object_is_shift(a4):
    # twist sends P_E to P_E[1 - d]
    assert iso_complex(spherical_twist(a4.cert, a4.PE), shift(a4.PE, 1 - a4.d))


def test_twist_fixes_orthogonal_objects(a4):
    assert iso_complex(spherical_twist(a4.cert, a4.PaE), a4.PaE)


def test_inverse_twist(a4):
    X = direct_sum(stalk(a4.A, 2), shift(a4.PaE, 1))
    Y = spherical_twist(a4.cert, X)
    assert iso_complex(inverse_spherical_twist(a4.cert, Y), X)
    assert iso_complex(spherical_twist(a4.cert, Y, -1), X)
    assert iso_complex(spherical_twist(a4.cert, X, 2), spherical_twist(a4.cert, Y))


def test_twist_commutes_with_automorphism(a4):
    X = stalk(a4.A, 3)
    lhs = twist_complex(spherical_twist(a4.cert, X), a4.eps)
    rhs = spherical_twist(a4.cert_a, twist_complex(X, a4.eps))
    assert iso_complex(lhs, rhs)


def test_alpha_invariance(a4):
    assert alpha_invariant(regular(a4.A), a4.eps)
    assert not alpha_invariant(a4.PE, a4.eps)
    assert alpha_invariant(direct_sum(a4.PE, a4.PaE), a4.eps)


def test_serre_compare(a4):
    A = regular(a4.A)
    assert serre_compare(A, A, 0).verdict == REFUTED
    r = serre_compare(a4.PE, a4.PE, 3)
    assert r.verdict == CONFIRMED and r.witness is not None


def test_induce_regular_gives_regular():
    from siltingkit.algebra import dihedral_algebra
    A = dihedral_algebra(4)
    T = dihedral_trivial_extension(4)
    Y = induce_trivial_extension(regular(A), T)
    assert Y.describe() == regular(T).describe()
    assert end_dim(Y) == 32


def test_explore_kronecker():
    g = explore(SiltingObject.regular(K), 1, [swap_labels(K)])
    assert len(g.nodes) == 5 and g.complete
    data = json.loads(g.to_json())
    assert len(data["nodes"]) == 5 and len(data["edges"]) == 4
    dot = g.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 4


def test_explore_budget(a4):
    g = explore(SiltingObject.regular(a4.A), 3, budget=2)
    assert not g.complete and len(g.nodes) <= 3


def test_explore_requires_presilting(a4):
    with pytest.raises(ValueError):
        explore(SiltingObject.from_complex(a4.PE), 1)


def test_hom_dims_after_twist_window(a4):
    # the twist of e_1A sees P_E in exactly one shift
    X = spherical_twist(a4.cert, stalk(a4.A, 1))
    assert hom_dims(a4.PE, X) == {5: 1}
