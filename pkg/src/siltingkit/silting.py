"""Silting mutation, spherical twists and automorphism invariance.

Everything here works in the homotopy category of bounded complexes of
projectives over an :class:`~siltingkit.algebra.Algebra`; objects are
minimized :class:`~siltingkit.complexes.ProjComplex` values.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_form

from .algebra import Algebra, AlgebraAutomorphism
from .complexes import (ChainMap, ProjComplex, cone, decompose_complex, direct_sum, find_complex_isomorphism,
                        hom_window, homology_subquotient, homology_table, homotopy_hom, identity_map,
                        map_from_sum, map_to_sum, minimize, nakayama, shift, shift_map, stalk,
                        twist_complex)
from .linalg import Echelon, Mat
from .modules import Module, find_isomorphism, minimal_projective_resolution, twist_module
from . import search


class InvalidCertificate(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


LEFT, RIGHT = "left", "right"


def _check_direction(direction: str):
    if direction not in (LEFT, RIGHT):
        raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")


# ---------------------------------------------------------------------------
# approximations

@dataclass
class ApproximationTriangle:
    source: ProjComplex
    subcategory: list
    map: ChainMap
    cone: ProjComplex
    direction: str
    multiplicities: list

    def factorization_holds(self) -> bool:
        """Every basis map X -> D_j (resp. D_j -> X) factors through the map."""
        f = self.map
        X = self.source
        if self.direction == LEFT:
            T = f.target
            for D in self.subcategory:
                HXD = homotopy_hom(X, D, 0)
                HTD = homotopy_hom(T, D, 0)
                images = [HXD.class_of(ChainMap(X, shift(D, 0), (g @ f).comps, check=False))
                          for g in _as_maps(HTD, T, D)]
                if not _spans(X.algebra.field, images, HXD.dim):
                    return False
        else:
            S = f.source
            for D in self.subcategory:
                HDX = homotopy_hom(D, X, 0)
                HDS = homotopy_hom(D, S, 0)
                images = [HDX.class_of(ChainMap(D, shift(X, 0), (f @ g).comps, check=False))
                          for g in _as_maps(HDS, D, S)]
                if not _spans(X.algebra.field, images, HDX.dim):
                    return False
        return True

    def is_minimal(self) -> bool:
        """Every g on the approximating object with g f = f (resp. f g = f)
        is invertible.  Checked on each basis direction of the affine space
        {g : g f = f} through the identity."""
        f = self.map
        T = f.target if self.direction == LEFT else f.source
        if T.is_zero():
            return True
        ends = _as_maps(homotopy_hom(T, T, 0), T, T)
        if self.direction == LEFT:
            H = homotopy_hom(self.source, T, 0)
            vecs = [H.class_of(ChainMap(self.source, shift(T, 0), (g @ f).comps, check=False)) for g in ends]
        else:
            H = homotopy_hom(T, self.source, 0)
            vecs = [H.class_of(ChainMap(T, shift(self.source, 0), (f @ g).comps, check=False)) for g in ends]
        F = T.algebra.field
        # kernel of g -> g f: the directions h with h f = 0
        rows = [{i: vecs[i][r] for i in range(len(ends)) if vecs[i][r]} for r in range(H.dim)]
        from .linalg import sparse_kernel
        ker = sparse_kernel(F, rows, len(ends))
        idm = identity_map(T)
        for kvec in ker:
            h = None
            for i, c in kvec.items():
                term = ends[i].scale(c)
                h = term if h is None else h + term
            for c in (1, -1):
                g = idm + h.scale(c)
                if not search.blocks_invertible(g.top_blocks()):
                    return False
        return True


def _as_maps(H, X, Y) -> list[ChainMap]:
    return [ChainMap(X, Y, f.comps, check=False) for f in H.chain_maps()]


def _spans(F, vectors, dim) -> bool:
    ech = Echelon(F)
    for v in vectors:
        ech.add({i: x for i, x in enumerate(v) if x})
    return ech.rank == dim


def _radical_maps(D: ProjComplex, maps: list[ChainMap]) -> list[ChainMap]:
    """Basis of the radical of a local endomorphism algebra: the trace-zero
    hyperplane of the idempotent-coefficient blocks."""
    F = D.algebra.field
    traces = [F.norm(sum(m.trace() for m in f.top_blocks())) for f in maps]
    pivot = next((i for i, t in enumerate(traces) if t), None)
    if pivot is None:
        return list(maps)
    out = []
    for i, f in enumerate(maps):
        if i == pivot:
            continue
        c = F.div(traces[i], traces[pivot])
        out.append(f - maps[pivot].scale(c) if c else f)
    return out


def _complement(F, sub_vectors, dim) -> list[int]:
    """Indices of unit vectors completing ``sub_vectors`` to a basis."""
    ech = Echelon(F)
    for v in sub_vectors:
        ech.add({i: x for i, x in enumerate(v) if x})
    chosen = []
    for i in range(dim):
        if ech.add({i: 1}) is not None:
            chosen.append(i)
    return chosen


def minimal_approximation(X: ProjComplex, D: Sequence[ProjComplex], direction: str = LEFT) -> ApproximationTriangle:
    """Minimal left (``X -> D``) or right (``D -> X``) add(D)-approximation
    for a list of pairwise non-isomorphic indecomposables ``D``.

    The multiplicity of ``D_j`` is the dimension of Hom(X, D_j) modulo the
    maps factoring through radical maps ``D_l -> D_j`` (dually for right
    approximations)."""
    _check_direction(direction)
    A = X.algebra
    F = A.field
    D = [minimize(d) for d in D]
    chosen_maps, targets, mult = [], [], []
    for j, Dj in enumerate(D):
        if direction == LEFT:
            H = homotopy_hom(X, Dj, 0)
            sub = []
            for l, Dl in enumerate(D):
                hom_l = _as_maps(homotopy_hom(X, Dl, 0), X, Dl) if l != j else _as_maps(H, X, Dj)
                if not hom_l:
                    continue
                rad = (_radical_maps(Dj, _as_maps(homotopy_hom(Dj, Dj, 0), Dj, Dj)) if l == j
                       else _as_maps(homotopy_hom(Dl, Dj, 0), Dl, Dj))
                for r in rad:
                    for h in hom_l:
                        sub.append(H.class_of(ChainMap(X, shift(Dj, 0), (r @ h).comps, check=False)))
        else:
            H = homotopy_hom(Dj, X, 0)
            sub = []
            for l, Dl in enumerate(D):
                hom_l = _as_maps(homotopy_hom(Dl, X, 0), Dl, X) if l != j else _as_maps(H, Dj, X)
                if not hom_l:
                    continue
                rad = (_radical_maps(Dj, _as_maps(homotopy_hom(Dj, Dj, 0), Dj, Dj)) if l == j
                       else _as_maps(homotopy_hom(Dj, Dl, 0), Dj, Dl))
                for r in rad:
                    for h in hom_l:
                        sub.append(H.class_of(ChainMap(Dj, shift(X, 0), (h @ r).comps, check=False)))
        idx = _complement(F, sub, H.dim)
        mult.append(len(idx))
        basis = H.chain_maps()
        for i in idx:
            targets.append(Dj)
            if direction == LEFT:
                chosen_maps.append(ChainMap(X, Dj, basis[i].comps, check=False))
            else:
                chosen_maps.append(ChainMap(Dj, X, basis[i].comps, check=False))
    if direction == LEFT:
        f = map_to_sum(X, targets, chosen_maps)
        C = minimize(cone(f, check=False))
    else:
        f = map_from_sum(targets, X, chosen_maps)
        C = minimize(shift(cone(f, check=False), -1))
    return ApproximationTriangle(X, list(D), f, C, direction, mult)


# ---------------------------------------------------------------------------
# silting objects

KNOWN, CERTIFIED, UNKNOWN = "known", "certified", "unknown"


def is_presilting(X: ProjComplex) -> bool:
    """Hom(X, X[j]) = 0 for 0 < j <= width; larger shifts vanish because
    the Hom complex is zero there."""
    X = minimize(X)
    if X.is_zero():
        return True
    for j in range(1, X.hi - X.lo + 1):
        if homotopy_hom(X, X, j).dim:
            return False
    return True


def _basic(summands: Sequence[ProjComplex], seed: int = 0) -> list[ProjComplex]:
    out = []
    for s in summands:
        if not any(t.shape() == s.shape() and find_complex_isomorphism(t, s, seed=seed) for t in out):
            out.append(s)
    return out


@dataclass
class SiltingObject:
    """A basic presilting object as its list of indecomposable summands."""

    summands: list
    presilting_verified: bool = False
    silting_status: str = UNKNOWN
    provenance: list = field(default_factory=list)

    @classmethod
    def from_complex(cls, X: ProjComplex, status: str = UNKNOWN, seed: int = 0) -> "SiltingObject":
        parts = _basic(decompose_complex(X, seed=seed), seed)
        obj = cls(parts)
        obj.presilting_verified = is_presilting(obj.complex)
        obj.silting_status = status
        return obj

    @classmethod
    def regular(cls, A: Algebra) -> "SiltingObject":
        return cls([stalk(A, v) for v in A.vertices], True, KNOWN, ["regular module"])

    @property
    def algebra(self):
        return self.summands[0].algebra

    @property
    def complex(self) -> ProjComplex:
        return direct_sum(*self.summands)

    def __len__(self):
        return len(self.summands)

    def describe(self) -> list[str]:
        return [s.describe() for s in self.summands]

    def is_isomorphic(self, other: "SiltingObject", seed: int = 0) -> bool:
        if len(self) != len(other):
            return False
        if sorted(s.shape() for s in self.summands) != sorted(s.shape() for s in other.summands):
            return False
        remaining = list(other.summands)
        for s in self.summands:
            for i, t in enumerate(remaining):
                if s.shape() == t.shape() and find_complex_isomorphism(s, t, seed=seed):
                    remaining.pop(i)
                    break
            else:
                return False
        return True

    def is_invariant(self, sigma: AlgebraAutomorphism, seed: int = 0) -> bool:
        """Every summand is isomorphic to its twist (so the additive
        closure is stable under the twist)."""
        return all(find_complex_isomorphism(s, twist_complex(s, sigma), seed=seed) for s in self.summands)


def mutate(M: SiltingObject, keep: Sequence[int], direction: str = LEFT, seed: int = 0) -> SiltingObject:
    """Replace every summand not listed in ``keep`` by the (co)cone of its
    minimal left (right) approximation by the kept summands."""
    _check_direction(direction)
    keep = sorted(set(keep))
    if any(not 0 <= i < len(M) for i in keep):
        raise ValueError(f"selection {keep} is not a subset of the {len(M)} summands")
    D = [M.summands[i] for i in keep]
    new = []
    for i, X in enumerate(M.summands):
        if i in keep:
            new.append(X)
            continue
        tri = minimal_approximation(X, D, direction)
        new.extend(decompose_complex(tri.cone, seed=seed))
    status = KNOWN if M.silting_status in (KNOWN, CERTIFIED) else UNKNOWN
    out = SiltingObject(_basic(new, seed), M.presilting_verified, status,
                        M.provenance + [f"mutate {direction} keep={keep}"])
    return out


def opposite(direction: str) -> str:
    return RIGHT if direction == LEFT else LEFT


# ---------------------------------------------------------------------------
# silting certificates

def k0_spans(classes: Sequence[Sequence[int]], n: int) -> bool:
    """Do the integer vectors span Z^n?"""
    if len(classes) < n:
        return False
    m = sympy.Matrix(classes)
    snf = smith_normal_form(m, domain=sympy.ZZ)
    diag = [snf[i, i] for i in range(min(snf.shape))]
    return sum(1 for x in diag if x != 0) == n and all(abs(x) == 1 for x in diag if x != 0)


@dataclass
class SiltingVerdict:
    status: str
    checks: dict

    def __bool__(self):
        return self.status == CERTIFIED


def is_silting(X: ProjComplex, budget: int = 64, seed: int = 0) -> SiltingVerdict:
    """Presilting check, K_0 check, then a generation search: each e_iA is
    repeatedly replaced by the co-cone of its minimal right approximation
    by shifts of the summands of X; reaching zero proves e_iA lies in the
    thick subcategory generated by X."""
    X = minimize(X)
    checks = {}
    if not is_presilting(X):
        checks["presilting"] = False
        return SiltingVerdict(UNKNOWN, checks)
    checks["presilting"] = True
    A = X.algebra
    parts = _basic(decompose_complex(X, seed=seed), seed)
    checks["k0_spans"] = k0_spans([p.k0_class() for p in parts], A.n)
    if not checks["k0_spans"]:
        return SiltingVerdict(UNKNOWN, checks)
    steps = 0
    for v in A.vertices:
        Y = stalk(A, v)
        while not Y.is_zero():
            steps += 1
            if steps > budget:
                checks["generation"] = f"budget {budget} exhausted"
                return SiltingVerdict(UNKNOWN, checks)
            D = []
            for p in parts:
                for j in hom_window(p, Y):
                    if homotopy_hom(p, Y, j).dim:
                        D.append(shift(p, -j))
            if not D:
                checks["generation"] = f"e{v}A has no maps from the summands"
                return SiltingVerdict(UNKNOWN, checks)
            Y = minimal_approximation(Y, D, RIGHT).cone
    checks["generation"] = f"certified in {steps} approximation steps"
    return SiltingVerdict(CERTIFIED, checks)


# ---------------------------------------------------------------------------
# spherical objects and twists

@dataclass
class SphericalCertificate:
    module: Module
    resolution: ProjComplex
    d: int
    ext_table: dict
    serre: dict
    valid: bool
    reasons: list

    def to_dict(self) -> dict:
        return {
            "module": self.module.name,
            "dimension_vector": list(self.module.dims),
            "d": self.d,
            "valid": self.valid,
            "reasons": list(self.reasons),
            "resolution": self.resolution.describe(),
            "ext_table": {str(j): v for j, v in sorted(self.ext_table.items())},
            "serre": self.serre,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def check_spherical(E: Module, d: int, automorphisms: Sequence[AlgebraAutomorphism] = (),
                    seed: int = 0) -> SphericalCertificate:
    """Self-Ext table and Serre condition ``nakayama(P_E) ≅ E[d]``.  When
    the Serre condition fails, the homology is compared with the twists of
    E by the given automorphisms so the failure can be reported."""
    if d < 1:
        raise ValueError("d must be at least 1")
    PE = minimal_projective_resolution(E).to_complex()
    table = {j: homotopy_hom(PE, PE, j).dim for j in hom_window(PE, PE)}
    reasons = []
    for j in sorted(set(table) | {0, d}):
        want = 1 if j in (0, d) else 0
        if table.get(j, 0) != want:
            reasons.append(f"dim Ext^{j}(E,E) = {table.get(j, 0)}, expected {want}")
    H = homology_table(nakayama(PE))
    serre = {"homology_degrees": sorted(H), "dimension_vectors": {str(k): list(v.dims) for k, v in H.items()}}
    if sorted(H) != [-d]:
        reasons.append(f"Serre functor homology in degrees {sorted(H)}, expected [{-d}]")
        serre["isomorphic_to_E"] = False
    else:
        res = find_isomorphism(H[-d], E, seed=seed)
        serre["isomorphic_to_E"] = res.isomorphic
        serre["iso_provenance"] = res.provenance()
        if not res.isomorphic:
            reasons.append(f"Serre functor homology in degree {-d} is not isomorphic to E")
    for Hk in H.values():
        for sigma in automorphisms:
            if find_isomorphism(Hk, twist_module(E, sigma), seed=seed).isomorphic:
                serre.setdefault("isomorphic_to_twist", []).append(sigma.name)
    return SphericalCertificate(E, PE, d, table, serre, not reasons, reasons)


def _require_valid(cert: SphericalCertificate):
    if not cert.valid:
        raise InvalidCertificate("; ".join(cert.reasons) or "invalid certificate")


def spherical_twist(cert: SphericalCertificate, X: ProjComplex, power: int = 1) -> ProjComplex:
    """Cone of the evaluation map ``(+)_j Hom(P_E[j], X) (x) P_E[j] -> X``,
    minimized; ``power`` > 1 iterates and ``power`` < 0 uses the inverse."""
    _require_valid(cert)
    if power < 0:
        return inverse_spherical_twist(cert, X, -power)
    for _ in range(power):
        X = _twist_once(cert.resolution, X)
    return X


def _twist_once(PE: ProjComplex, X: ProjComplex) -> ProjComplex:
    sources, maps = [], []
    for n in hom_window(PE, X):
        H = homotopy_hom(PE, X, n)
        for f in H.chain_maps():
            g = shift_map(f, -n)
            src = shift(PE, -n)
            sources.append(src)
            maps.append(ChainMap(src, X, g.comps, check=False))
    if not sources:
        return minimize(X)
    ev = map_from_sum(sources, X, maps)
    return minimize(cone(ev, check=False))


def inverse_spherical_twist(cert: SphericalCertificate, X: ProjComplex, power: int = 1) -> ProjComplex:
    """Co-cone of the co-evaluation ``X -> (+)_j Hom(X, P_E[j])^* (x) P_E[j]``."""
    _require_valid(cert)
    for _ in range(power):
        X = _inverse_once(cert.resolution, X)
    return X


def _inverse_once(PE: ProjComplex, X: ProjComplex) -> ProjComplex:
    targets, maps = [], []
    for n in hom_window(X, PE):
        H = homotopy_hom(X, PE, n)
        for f in H.chain_maps():
            targets.append(f.target)
            maps.append(f)
    if not targets:
        return minimize(X)
    coev = map_to_sum(X, targets, maps)
    return minimize(shift(cone(coev, check=False), -1))


def alpha_invariant(X: ProjComplex, sigma: AlgebraAutomorphism, seed: int = 0) -> bool:
    return bool(find_complex_isomorphism(X, twist_complex(X, sigma), seed=seed))


# ---------------------------------------------------------------------------
# Serre functor comparison

CONFIRMED, REFUTED, INCONCLUSIVE = "Confirmed", "Refuted", "Inconclusive"


@dataclass
class SerreComparison:
    verdict: str
    details: dict
    witness: object = None


def serre_compare(Y: ProjComplex, X: ProjComplex, s: int, probes: Sequence[ProjComplex] = (),
                  seed: int = 0) -> SerreComparison:
    """Is ``nakayama(Y) ≅ X[s]`` in the derived category?"""
    A = Y.algebra
    NY = nakayama(Y)
    Xs = minimize(shift(X, s))
    details = {}
    hn, hx = homology_table(NY), homology_table(Xs)
    if sorted(hn) != sorted(hx):
        details["homology_degrees"] = {"nakayama": sorted(hn), "shifted": sorted(hx)}
        return SerreComparison(REFUTED, details)
    for j in hn:
        r = find_isomorphism(hn[j], hx[j], seed=seed)
        if not r.isomorphic:
            details["homology_mismatch_degree"] = j
            return SerreComparison(REFUTED, details)
    details["homology_degrees"] = sorted(hn)
    probe_list = [stalk(A, v) for v in A.vertices] + list(probes)
    for i, P in enumerate(probe_list):
        a = {n: homotopy_hom(P, NY, n).dim for n in hom_window(P, NY)}
        b = {n: homotopy_hom(P, Xs, n).dim for n in hom_window(P, Xs)}
        a = {n: v for n, v in a.items() if v}
        b = {n: v for n, v in b.items() if v}
        if a != b:
            details["fingerprint_mismatch_probe"] = i
            return SerreComparison(REFUTED, details)
    details["fingerprints_agree"] = len(probe_list)
    w = quasi_isomorphism(Xs, NY, seed=seed)
    if w is None:
        return SerreComparison(INCONCLUSIVE, details)
    details["witness_method"] = w["method"]
    return SerreComparison(CONFIRMED, details, witness=w)


def quasi_isomorphism(X: ProjComplex, N, seed: int = 0):
    """Search Hom_K(X, N) (N a module complex) for a class inducing
    isomorphisms on all homology modules."""
    A = X.algebra
    F = A.field
    if X.is_zero():
        return {"method": "zero", "coeffs": []} if not homology_table(N) else None
    H = homotopy_hom(X, N, 0)
    if not H.dim:
        return None
    degrees = sorted(set(homology_table(X)) | set(homology_table(N)))
    sqx = {j: homology_subquotient(X, j) for j in degrees}
    sqn = {j: homology_subquotient(N, j) for j in degrees}
    element_blocks = []
    for vec in H.basis:
        mm = H.module_maps(vec)
        blocks = []
        for j in degrees:
            a, b = sqx[j], sqn[j]
            for v in A.vertices:
                src = a.reps[v] if a else []
                tgt_n = len(b.reps[v]) if b else 0
                cols = []
                for r in src:
                    img = mm[j][v].apply(r) if j in mm else [0] * (b.ambient.dim(v) if b else 0)
                    cols.append(b.coords(v, img) if b else [])
                blocks.append(Mat._raw(F, [[F.norm(c[i]) for c in cols] for i in range(tgt_n)], len(cols)))
        element_blocks.append(blocks)
    coeffs, method, bound = search.find_invertible(F, element_blocks, seed=seed)
    if coeffs is None:
        return None
    return {"method": method, "coeffs": [str(c) for c in coeffs], "failure_bound": bound}


# ---------------------------------------------------------------------------
# trivial extension

def induce_trivial_extension(X: ProjComplex, T: Algebra) -> ProjComplex:
    """``X (x)_A T``: the same terms over T, entries mapped along the
    inclusion of A (same arrows, same paths)."""
    A = X.algebra
    if T.n != A.n:
        raise ValueError("trivial extension has a different vertex count")
    images = [T.reduce_path(p) for p in A.basis]
    diffs = {}
    for k, d in X.diffs.items():
        rows = []
        for r in d:
            row = []
            for a in r:
                out = {}
                for b, c in a.items():
                    for bb, cc in images[b].items():
                        out[bb] = out.get(bb, 0) + c * cc
                row.append(out)
            rows.append(row)
        diffs[k] = rows
    return minimize(ProjComplex(T, X.terms, diffs))


# ---------------------------------------------------------------------------
# mutation graph

@dataclass
class MutationGraph:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)        # (src, keep, direction, dst)
    labels: list = field(default_factory=list)       # per node {automorphism name: bool}
    depth: dict = field(default_factory=dict)
    complete: bool = True

    def find(self, obj: SiltingObject, seed: int = 0) -> Optional[int]:
        for i, n in enumerate(self.nodes):
            if n.is_isomorphic(obj, seed=seed):
                return i
        return None

    def to_dict(self) -> dict:
        return {
            "complete": self.complete,
            "nodes": [{"id": i, "depth": self.depth[i], "summands": n.describe(),
                       "degree_range": [n.complex.lo, n.complex.hi], "invariant": self.labels[i]}
                      for i, n in enumerate(self.nodes)],
            "edges": [{"source": s, "keep": list(k), "direction": d, "target": t} for s, k, d, t in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph mutation {"]
        for i, n in enumerate(self.nodes):
            inv = ",".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(self.labels[i].items()))
            label = "\\n".join(n.describe()) + (f"\\n{inv}" if inv else "")
            lines.append(f'  n{i} [label="{label}"];')
        for s, k, d, t in self.edges:
            lines.append(f'  n{s} -> n{t} [label="{d} keep={list(k)}"];')
        lines.append("}")
        return "\n".join(lines)


def _selections(m: int, extended: bool):
    if not extended:
        for i in range(m):
            yield tuple(j for j in range(m) if j != i)
        return
    for mask in range(2 ** m - 1):
        yield tuple(j for j in range(m) if mask >> j & 1)


def explore(start: SiltingObject, depth: int, automorphisms: Sequence[AlgebraAutomorphism] = (),
            budget: Optional[int] = None, extended: bool = False, seed: int = 0) -> MutationGraph:
    """Breadth-first search over irreducible (or, with ``extended``, all
    proper) left and right mutations up to the given depth.  On budget
    exhaustion the partial graph is returned with ``complete = False``."""
    if not start.presilting_verified:
        raise ValueError("start object is not verified presilting")
    g = MutationGraph()

    def add(obj, dep):
        g.nodes.append(obj)
        g.labels.append({s.name: obj.is_invariant(s, seed=seed) for s in automorphisms})
        g.depth[len(g.nodes) - 1] = dep
        return len(g.nodes) - 1

    add(start, 0)
    queue = deque([0])
    mutations = 0
    while queue:
        i = queue.popleft()
        if g.depth[i] >= depth:
            continue
        M = g.nodes[i]
        for keep in _selections(len(M), extended):
            for direction in (LEFT, RIGHT):
                if budget is not None and mutations >= budget:
                    g.complete = False
                    return g
                mutations += 1
                N = mutate(M, keep, direction, seed=seed)
                j = g.find(N, seed=seed)
                if j is None:
                    j = add(N, g.depth[i] + 1)
                    queue.append(j)
                g.edges.append((i, keep, direction, j))
    return g
