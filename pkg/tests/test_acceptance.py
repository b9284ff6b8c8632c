"""Acceptance criteria, one test each.  Every test prints a single
``[PASS]`` or ``[FAIL]`` line with the expected and computed values."""
import itertools
import random

import pytest

from siltingkit.algebra import TrivialExtension, dihedral_trivial_extension, presentation_matches_trivial_extension
from siltingkit.algebra import swap_labels
from siltingkit.complexes import (ProjComplex, hom_dims, hom_window, homology_table, homotopy_hom, iso_complex,
                                  is_indecomposable, nakayama, random_complex, regular, stalk, end_dim)
from siltingkit.modules import direct_sum as module_sum
from siltingkit.modules import global_dimension, is_isomorphic, projective
from siltingkit.silting import (CONFIRMED, LEFT, RIGHT, SiltingObject, alpha_invariant, explore,
                                induce_trivial_extension, inverse_spherical_twist, is_presilting, is_silting,
                                mutate, serre_compare, spherical_twist)
from siltingkit.verify import dihedral_setup


@pytest.fixture
def report(capsys):
    def emit(criterion, title, failures, summary=""):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            line = f"\n[{status}] criterion {criterion}: {title}"
            if summary:
                line += f" ({summary})"
            print(line)
            for f in failures[:10]:
                print(f"    {f}")
        assert not failures, failures
    return emit


def alternating_word_count(n):
    return sum(1 for i in range(1, n + 1) for length in range(n - i + 1)
               for w in itertools.product("xy", repeat=length) if all(a != b for a, b in zip(w, w[1:])))


def nonzero(table):
    return {j: v for j, v in table.items() if v}


def test_criterion_01_algebra_construction(report):
    fails = []
    for n in (2, 3, 4, 5):
        S = dihedral_setup(n)
        if S.A.dim != n * n or alternating_word_count(n) != n * n:
            fails.append(f"n={n}: dim {S.A.dim}, word count {alternating_word_count(n)}, expected {n * n}")
        g = global_dimension(S.A)
        if g != n - 1:
            fails.append(f"n={n}: gldim {g}, expected {n - 1}")
        t = TrivialExtension(S.A).dim
        if t != 2 * n * n:
            fails.append(f"n={n}: dim T(A) {t}, expected {2 * n * n}")
        if n % 2 == 0:
            T = dihedral_trivial_extension(n)
            if T.dim != 2 * n * n or not presentation_matches_trivial_extension(S.A, T):
                fails.append(f"n={n}: quiver presentation of T(A) does not match")
    report(1, "dim A_n = n^2, gldim A_n = n-1, dim T(A_n) = 2n^2 for n = 2..5", fails)


def test_criterion_02_spherical_even(report):
    fails = []
    for n in (4, 6):
        S = dihedral_setup(n)
        ext = nonzero({j: homotopy_hom(S.PE, S.PE, j).dim for j in hom_window(S.PE, S.PE)})
        if ext != {0: 1, n - 1: 1}:
            fails.append(f"n={n}: Ext(E,E) {ext}, expected {{0: 1, {n - 1}: 1}}")
        ext_a = nonzero({j: homotopy_hom(S.PE, S.PaE, j).dim for j in hom_window(S.PE, S.PaE)})
        if ext_a:
            fails.append(f"n={n}: Ext(E,aE) {ext_a}, expected zero")
        H = homology_table(nakayama(S.PE))
        if sorted(H) != [1 - n] or not is_isomorphic(H[1 - n], S.E):
            fails.append(f"n={n}: nakayama(P_E) homology degrees {sorted(H)}, expected E in {1 - n}")
    report(2, "E is (n-1)-spherical and Hom-orthogonal to aE for n = 4, 6", fails)


def test_criterion_03_exceptional_odd(report):
    fails = []
    for n in (3, 5):
        S = dihedral_setup(n)
        ext = nonzero({j: homotopy_hom(S.PE, S.PE, j).dim for j in hom_window(S.PE, S.PE)})
        if ext != {0: 1}:
            fails.append(f"n={n}: Ext(E,E) {ext}, expected {{0: 1}}")
        ext_a = nonzero({j: homotopy_hom(S.PE, S.PaE, j).dim for j in hom_window(S.PE, S.PaE)})
        if ext_a != {n - 1: 1}:
            fails.append(f"n={n}: Ext(E,aE) {ext_a}, expected {{{n - 1}: 1}}")
        H = homology_table(nakayama(S.PE))
        if sorted(H) != [1 - n] or not is_isomorphic(H[1 - n], S.aE):
            fails.append(f"n={n}: nakayama(P_E) homology degrees {sorted(H)}, expected aE in {1 - n}")
        if S.cert.valid:
            fails.append(f"n={n}: certificate unexpectedly valid")
    report(3, "E is exceptional, not spherical, with Serre image aE for n = 3, 5", fails)


def test_criterion_04_hom_window(report):
    S = dihedral_setup(4)
    d = 3
    fails = []
    for i in S.A.vertices:
        X = stalk(S.A, i)
        for m in range(4):
            # Hom(P_E[j], X) = Hom(P_E, X[-j])
            got = {-n: v for n, v in hom_dims(S.PE, X).items()}
            want = {m * (1 - d) - d: 1}
            if got != want:
                fails.append(f"i={i} m={m}: {got}, expected {want}")
            X = spherical_twist(S.cert, X)
    report(4, "Hom(P_E[j], Phi^m(e_iA)) = k exactly at j = m(1-d)-d, n = 4", fails, "16 cases")


def test_criterion_05_twist_homology(report):
    S = dihedral_setup(4)
    fails = []
    for i in S.A.vertices:
        X = stalk(S.A, i)
        P = projective(S.A, i)
        for m in range(4):
            H = homology_table(X)
            want = [0] + [2 * l for l in range(1, m + 1)]
            if sorted(H) != want:
                fails.append(f"i={i} m={m}: homology degrees {sorted(H)}, expected {want}")
            elif not is_isomorphic(H[0], P) or not all(is_isomorphic(H[j], S.E) for j in want[1:]):
                fails.append(f"i={i} m={m}: homology modules not e_iA, E, ..., E")
            X = spherical_twist(S.cert, X)
    report(5, "H(Phi^m(e_iA)) = e_iA in degree 0 and E in degrees 2l, n = 4", fails, "16 cases")


# The displayed complexes: {degree: vertices} and differentials as
# {degree: rows of path words from the source summand to the target summand}.
DISPLAYED = {
    ("E", 4): ({0: (3,), 1: (2,), 2: (1,)},
               {0: [["y"]], 1: [["y"]]}),
    ("E", 3): ({-1: (4,), 0: (3, 3), 1: (2,), 2: (1,)},
               {-1: [["x"], ["y"]], 0: [[None, "y"]], 1: [["y"]]}),
    ("E", 2): ({-1: (4,), 0: (2, 3), 1: (2,), 2: (1,)},
               {-1: [["yx"], ["y"]], 0: [[None, "y"]], 1: [["y"]]}),
    ("E", 1): ({-1: (4,), 0: (1, 3), 1: (2,), 2: (1,)},
               {-1: [["xyx"], ["y"]], 0: [[None, "y"]], 1: [["y"]]}),
    ("aE.E", 4): ({-1: (4,), 0: (3, 3), 1: (2, 2), 2: (1, 1)},
                  {-1: [["x"], ["y"]], 0: [["x", None], [None, "y"]], 1: [["x", None], [None, "y"]]}),
    ("aE.E", 3): ({-1: (4, 4), 0: (3, 3, 3), 1: (2, 2), 2: (1, 1)},
                  {-1: [["x", None], ["y", "x"], [None, "y"]], 0: [["x", None, None], [None, None, "y"]],
                   1: [["x", None], [None, "y"]]}),
    ("aE.E", 2): ({-1: (4, 4), 0: (3, 2, 3), 1: (2, 2), 2: (1, 1)},
                  {-1: [["x", None], ["xy", "yx"], [None, "y"]], 0: [["x", None, None], [None, None, "y"]],
                   1: [["x", None], [None, "y"]]}),
    ("aE.E", 1): ({-1: (4, 4), 0: (3, 1, 3), 1: (2, 2), 2: (1, 1)},
                  {-1: [["x", None], ["yxy", "xyx"], [None, "y"]], 0: [["x", None, None], [None, None, "y"]],
                   1: [["x", None], [None, "y"]]}),
}


def displayed_complex(A, key):
    terms, words = DISPLAYED[key]
    diffs = {}
    for k, rows in words.items():
        diffs[k] = [[A.word(terms[k + 1][r], w) if w else {} for w in row] for r, row in enumerate(rows)]
    return ProjComplex(A, terms, diffs)


def test_criterion_06_example_complexes(report):
    S = dihedral_setup(4)
    fails = []
    for i in S.A.vertices:
        X = spherical_twist(S.cert, stalk(S.A, i))
        Y = spherical_twist(S.cert_a, X)
        P = projective(S.A, i)
        for key, Z, top in (("E", X, S.E), ("aE.E", Y, module_sum(S.E, S.aE))):
            D = displayed_complex(S.A, (key, i))
            if Z.multiplicities() != D.multiplicities():
                fails.append(f"{key}(e{i}A): terms {Z.describe()}, expected {D.describe()}")
            if not iso_complex(Z, D):
                fails.append(f"{key}(e{i}A): not isomorphic to the displayed complex")
            H = homology_table(Z)
            if sorted(H) != [0, 2] or not is_isomorphic(H[0], P) or not is_isomorphic(H[2], top):
                fails.append(f"{key}(e{i}A): homology degrees {sorted(H)}")
            if (Z.lo, Z.hi) != ((0, 2) if (key, i) == ("E", 4) else (-1, 2)):
                fails.append(f"{key}(e{i}A): degree range {(Z.lo, Z.hi)}")
        if alpha_invariant(X, S.eps):
            fails.append(f"Phi_E(e{i}A) is invariant")
        if not is_indecomposable(Y) or not alpha_invariant(Y, S.eps):
            fails.append(f"Phi_aE Phi_E(e{i}A) is not an invariant indecomposable")
    report(6, "the eight displayed complexes for n = 4, up to isomorphism, with homology", fails)


def test_criterion_07_invariance_separation(report):
    S = dihedral_setup(4)
    A, eps = S.A, S.eps
    RA = regular(A)
    F1 = spherical_twist(S.cert, RA)
    F2 = spherical_twist(S.cert, F1)
    G = spherical_twist(S.cert_a, F1)
    fails = []
    for name, X, want in (("A", RA, True), ("Phi(A)", F1, False), ("Phi^2(A)", F2, False),
                          ("Phi_aE Phi_E(A)", G, True)):
        got = alpha_invariant(X, eps)
        if got != want:
            fails.append(f"alpha_invariant({name}) = {got}, expected {want}")
    ga = explore(SiltingObject.regular(A), 2, [eps])
    gf = explore(SiltingObject.from_complex(F1), 1, [eps])
    if not (ga.complete and gf.complete):
        fails.append("exploration incomplete")
    bad = [i for i, lab in enumerate(ga.labels) if not lab["eps"]]
    if bad:
        fails.append(f"non-invariant nodes from A: {bad}")
    if any(lab["eps"] for lab in gf.labels):
        fails.append("invariant node found near Phi(A)")
    clash = [(i, j) for i, a in enumerate(ga.nodes) for j, b in enumerate(gf.nodes) if a.is_isomorphic(b)]
    if clash:
        fails.append(f"shared nodes {clash}")
    report(7, "invariance separates A from Phi_E(A)", fails,
           f"{len(ga.nodes)} nodes from A at depth 2, {len(gf.nodes)} from Phi(A) at depth 1")


def test_criterion_08_mutation_preserves_invariance(report):
    S = dihedral_setup(4)
    rng = random.Random(2024)
    fails = []
    steps, seen_empty, seen_proper, directions = 0, False, False, set()
    for w in range(20):
        M = SiltingObject.regular(S.A)
        for step in range(rng.randint(1, 3)):
            m = len(M)
            keep = sorted(rng.sample(range(m), rng.randrange(m)))
            if w == 0 and step == 0:
                keep = []
            direction = rng.choice([LEFT, RIGHT])
            seen_empty |= not keep
            seen_proper |= bool(keep)
            directions.add(direction)
            N = mutate(M, keep, direction)
            steps += 1
            if not N.is_invariant(S.eps):
                fails.append(f"walk {w} step {step}: not invariant")
            if not is_presilting(N.complex) or not is_silting(N.complex, budget=200):
                fails.append(f"walk {w} step {step}: not certified silting")
            back = mutate(N, keep, RIGHT if direction == LEFT else LEFT)
            if not back.is_isomorphic(M):
                fails.append(f"walk {w} step {step}: inverse mutation does not return")
            M = N
    if not (seen_empty and seen_proper and directions == {LEFT, RIGHT}):
        fails.append("selections or directions not all exercised")
    report(8, "20 random mutation walks stay invariant silting and round-trip", fails, f"{steps} steps")


def test_criterion_09_inverse_auslander_reiten(report):
    S = dihedral_setup(4)
    RA = regular(S.A)
    G = spherical_twist(S.cert_a, spherical_twist(S.cert, RA))
    r = serre_compare(G, RA, 1)
    fails = []
    if r.verdict != CONFIRMED or r.witness is None:
        fails.append(f"verdict {r.verdict}, witness {r.witness is not None}")
    report(9, "nakayama(Phi_aE Phi_E(A)) = A[1] with witness", fails, r.verdict)


def test_criterion_10_trivial_extension(report):
    S = dihedral_setup(4)
    T = dihedral_trivial_extension(4)
    F1 = induce_trivial_extension(spherical_twist(S.cert, regular(S.A)), T)
    fails = []
    if not is_presilting(F1):
        fails.append("F_1 not presilting")
    e = end_dim(F1)
    if e != 32:
        fails.append(f"dim End(F_1) = {e}, expected 32")
    if alpha_invariant(F1, swap_labels(T)):
        fails.append("F_1 is invariant")
    report(10, "F_1 over T(A_4): presilting, dim End = 32, not invariant", fails)


def test_criterion_11_twist_fingerprint(report):
    S = dihedral_setup(4)
    probes = [stalk(S.A, v) for v in S.A.vertices] + [S.PE, S.PaE]
    fails = []
    for seed in range(10):
        X = random_complex(S.A, seed)
        PX = spherical_twist(S.cert, X)
        for k, P in enumerate(probes + [X]):
            before, after = hom_dims(P, X), hom_dims(spherical_twist(S.cert, P), PX)
            if before != after:
                fails.append(f"seed {seed} probe {k}: {before} vs {after}")
        if not iso_complex(inverse_spherical_twist(S.cert, PX), X):
            fails.append(f"seed {seed}: inverse twist does not return")
    report(11, "twist preserves Hom tables and inverts on 10 random complexes", fails)
