"""Bounded complexes of projective modules and of arbitrary modules.

A :class:`ProjComplex` stores, for every degree ``k`` with nonzero term,
the tuple of vertices of its indecomposable projective summands
``e_v A`` and, for every ``k`` with ``X^k`` and ``X^{k+1}`` nonzero, the
differential as a matrix of algebra elements.  Entry ``[s][t]`` of
``d^k`` lies in ``e_w A e_v`` for source summand ``t`` (vertex ``v``) and
target summand ``s`` (vertex ``w``); it acts by left multiplication, so
composing maps is ordinary matrix multiplication with algebra entries.
"""
from __future__ import annotations

import random
from typing import Optional, Sequence

from .algebra import Algebra, AlgebraAutomorphism
from .linalg import Echelon, Mat, sparse_kernel, sparse_transpose
from .modules import (Module, ModuleMap, Subquotient, injective_sum, projective_sum,
                      _sparse_to_vec)
from . import search


class NotAChainMap(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices with algebra entries

def emat_zero(rows: int, cols: int) -> list:
    return [[{} for _ in range(cols)] for _ in range(rows)]


def emat_identity(A: Algebra, verts: Sequence[int]) -> list:
    m = emat_zero(len(verts), len(verts))
    for i, v in enumerate(verts):
        m[i][i] = A.e(v)
    return m


def emat_mul(A: Algebra, P: list, Q: list, inner: int, cols: int | None = None) -> list:
    rows = len(P)
    if cols is None:
        cols = len(Q[0]) if Q else 0
    out = emat_zero(rows, cols)
    for i in range(rows):
        Pi = P[i]
        for k in range(inner):
            a = Pi[k]
            if not a:
                continue
            Qk = Q[k]
            for j in range(cols):
                b = Qk[j]
                if b:
                    out[i][j] = A.add(out[i][j], A.mul(a, b))
    return out


def emat_add(A: Algebra, P: list, Q: list) -> list:
    return [[A.add(a, b) for a, b in zip(rp, rq)] for rp, rq in zip(P, Q)]


def emat_scale(A: Algebra, c, P: list) -> list:
    return [[A.scale(c, a) for a in r] for r in P]


def emat_is_zero(P: list) -> bool:
    return all(not a for r in P for a in r)


def emat_block(A: Algebra, blocks: list, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> list:
    """Assemble a block matrix; ``None`` blocks are zero."""
    out = []
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                row.extend(dict(blk[r][c]) if blk is not None else {} for c in range(cs))
            out.append(row)
    return out


def _clean_emat(A: Algebra, P: list) -> list:
    F = A.field
    return [[{b: F.norm(c) for b, c in a.items() if F.norm(c)} for a in r] for r in P]


# ---------------------------------------------------------------------------
# complexes of projectives

class ProjComplex:
    def __init__(self, algebra: Algebra, terms: dict, diffs: Optional[dict] = None, check: bool = True):
        self.algebra = algebra
        self.terms = {int(k): tuple(v) for k, v in terms.items() if len(v)}
        for k, vs in self.terms.items():
            for v in vs:
                if not 1 <= v <= algebra.n:
                    raise ValueError(f"vertex {v} out of range in degree {k}")
        diffs = diffs or {}
        self.diffs = {}
        for k in self.terms:
            if k + 1 in self.terms:
                d = diffs.get(k)
                if d is None:
                    d = emat_zero(len(self.terms[k + 1]), len(self.terms[k]))
                self.diffs[k] = _clean_emat(algebra, d)
        if check:
            self.check()
        self._module_cache = None

    # --- shape ---
    @property
    def lo(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def hi(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, k: int) -> tuple:
        return self.terms.get(k, ())

    def diff(self, k: int) -> list:
        d = self.diffs.get(k)
        if d is None:
            return emat_zero(len(self.term(k + 1)), len(self.term(k)))
        return d

    def multiplicities(self) -> dict:
        """``{degree: {vertex: multiplicity}}``."""
        out = {}
        for k, vs in self.terms.items():
            m = {}
            for v in vs:
                m[v] = m.get(v, 0) + 1
            out[k] = m
        return out

    def shape(self) -> tuple:
        return tuple(sorted((k, v, c) for k, m in self.multiplicities().items() for v, c in m.items()))

    def k0_class(self) -> tuple:
        """Alternating sum of the vertex counts of the terms."""
        vec = [0] * self.algebra.n
        for k, vs in self.terms.items():
            for v in vs:
                vec[v - 1] += (-1) ** (k % 2)
        return tuple(vec)

    def dim_vector_sum(self) -> tuple:
        """Alternating sum of dimension vectors of the terms."""
        A = self.algebra
        vec = [0] * A.n
        for k, vs in self.terms.items():
            sgn = (-1) ** (k % 2)
            for v in vs:
                for u in A.vertices:
                    vec[u - 1] += sgn * A.dim_between(v, u)
        return tuple(vec)

    def check(self):
        A = self.algebra
        for k, d in self.diffs.items():
            src, tgt = self.terms[k], self.terms[k + 1]
            if len(d) != len(tgt) or any(len(r) != len(src) for r in d):
                raise ValueError(f"differential in degree {k} has the wrong shape")
            for s, w in enumerate(tgt):
                for t, v in enumerate(src):
                    for b in d[s][t]:
                        if A.starts[b] != w or A.ends[b] != v:
                            raise ValueError(f"entry [{s}][{t}] of d^{k} not in e_{w}Ae_{v}")
        for k in self.diffs:
            if k + 1 in self.diffs:
                if not emat_is_zero(emat_mul(A, self.diffs[k + 1], self.diffs[k], len(self.terms[k + 1]))):
                    raise ValueError(f"d^{k + 1} d^{k} != 0")

    def is_minimal(self) -> bool:
        A = self.algebra
        return all(A.is_radical(a) for d in self.diffs.values() for r in d for a in r)

    def __eq__(self, other):
        if not isinstance(other, ProjComplex):
            return NotImplemented
        return (self.algebra is other.algebra and self.terms == other.terms
                and self.diffs == other.diffs)

    def __repr__(self):
        return f"ProjComplex({self.describe()})"

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in range(self.lo, self.hi + 1):
            m = self.multiplicities().get(k, {})
            s = " + ".join(f"P{v}" + (f"^{c}" if c > 1 else "") for v, c in sorted(m.items())) or "0"
            parts.append(f"[{k}] {s}")
        return ", ".join(parts)

    def format(self) -> str:
        """Human-readable listing of terms and differentials."""
        A = self.algebra
        lines = []
        for k in sorted(self.terms):
            lines.append(f"degree {k}: " + " + ".join(f"e{v}A" for v in self.terms[k]))
            if k in self.diffs:
                for r in self.diffs[k]:
                    lines.append("    [" + ", ".join(A.fmt(a) for a in r) + "]")
        return "\n".join(lines) or "0"

    # --- module picture ---
    def module_terms(self):
        """``{k: (Module, layout)}`` for the terms as projective modules."""
        if self._module_cache is None:
            self._module_cache = {k: projective_sum(self.algebra, vs) for k, vs in self.terms.items()}
        return self._module_cache


def zero_complex(A: Algebra) -> ProjComplex:
    return ProjComplex(A, {})


def stalk(A: Algebra, vertices: Sequence[int] | int, degree: int = 0) -> ProjComplex:
    """The one-term complex ``(+) e_v A`` in the given degree."""
    if isinstance(vertices, int):
        vertices = [vertices]
    return ProjComplex(A, {degree: tuple(vertices)})


def regular(A: Algebra, degree: int = 0) -> ProjComplex:
    return stalk(A, list(A.vertices), degree)


def shift(X: ProjComplex, s: int) -> ProjComplex:
    """``X[s]``: ``X[s]^k = X^{k+s}`` with differential ``(-1)^s d``."""
    A = X.algebra
    sign = -1 if s % 2 else 1
    terms = {k - s: v for k, v in X.terms.items()}
    diffs = {k - s: (emat_scale(A, sign, d) if sign < 0 else d) for k, d in X.diffs.items()}
    return ProjComplex(A, terms, diffs, check=False)


def direct_sum(*cs: ProjComplex) -> ProjComplex:
    A = cs[0].algebra
    degs = sorted(set().union(*(c.terms for c in cs)))
    terms = {k: tuple(v for c in cs for v in c.term(k)) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 in terms and terms[k + 1] and terms[k]:
            blocks = [[c.diff(k) if i == j else None for j, c in enumerate(cs)] for i, c in enumerate(cs)]
            diffs[k] = emat_block(A, blocks, [len(c.term(k + 1)) for c in cs], [len(c.term(k)) for c in cs])
    return ProjComplex(A, terms, diffs, check=False)


def twist_complex(X: ProjComplex, sigma: AlgebraAutomorphism) -> ProjComplex:
    """Relabel summands ``e_iA -> e_{sigma(i)}A`` and apply sigma to entries."""
    A = X.algebra
    if sigma.algebra is not A:
        raise ValueError("automorphism of a different algebra")
    terms = {k: tuple(sigma.vertex(v) for v in vs) for k, vs in X.terms.items()}
    diffs = {k: [[sigma.apply(a) for a in r] for r in d] for k, d in X.diffs.items()}
    return ProjComplex(A, terms, diffs, check=False)


# ---------------------------------------------------------------------------
# chain maps

class ChainMap:
    """Degree-preserving map of complexes; ``comps[k]`` has rows indexed by
    the summands of ``target^k`` and columns by those of ``source^k``."""

    def __init__(self, source: ProjComplex, target: ProjComplex, comps: dict, check: bool = True):
        self.source = source
        self.target = target
        A = source.algebra
        self.comps = {}
        for k in source.terms:
            if k in target.terms:
                c = comps.get(k)
                if c is None:
                    c = emat_zero(len(target.terms[k]), len(source.terms[k]))
                self.comps[k] = _clean_emat(A, c)
        if check and not self.is_chain_map():
            raise NotAChainMap("map does not commute with the differentials")

    def comp(self, k: int) -> list:
        c = self.comps.get(k)
        if c is None:
            return emat_zero(len(self.target.term(k)), len(self.source.term(k)))
        return c

    def is_chain_map(self) -> bool:
        X, Y = self.source, self.target
        A = X.algebra
        degs = set(X.terms) | set(Y.terms)
        for k in degs:
            ncols = len(X.term(k))
            lhs = emat_mul(A, Y.diff(k), self.comp(k), len(Y.term(k)), ncols)
            rhs = emat_mul(A, self.comp(k + 1), X.diff(k), len(X.term(k + 1)), ncols)
            if len(Y.term(k + 1)) and len(X.term(k)):
                if any(a != b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                    return False
        return True

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        A = self.source.algebra
        comps = {k: emat_mul(A, self.comp(k), other.comp(k), len(self.source.term(k)),
                             len(other.source.term(k)))
                 for k in other.source.terms if k in self.target.terms}
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        A = self.source.algebra
        return ChainMap(self.source, self.target,
                        {k: emat_add(A, self.comp(k), other.comp(k)) for k in self.comps}, check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ChainMap":
        A = self.source.algebra
        c = A.field(c)
        return ChainMap(self.source, self.target, {k: emat_scale(A, c, m) for k, m in self.comps.items()},
                        check=False)

    def is_zero(self) -> bool:
        return all(emat_is_zero(m) for m in self.comps.values())

    def top_blocks(self) -> list[Mat]:
        """Matrices of idempotent coefficients, one per (degree, vertex)
        pair in a fixed order; only meaningful between complexes of equal
        shape."""
        A = self.source.algebra
        F = A.field
        out = []
        X, Y = self.source, self.target
        for k in sorted(set(X.terms) | set(Y.terms)):
            for v in A.vertices:
                rows = [s for s, w in enumerate(Y.term(k)) if w == v]
                cols = [t for t, w in enumerate(X.term(k)) if w == v]
                if not rows and not cols:
                    continue
                c = self.comp(k)
                out.append(Mat._raw(F, [[F.norm(A.idempotent_coeff(c[s][t], v)) for t in cols] for s in rows],
                                    len(cols)))
        return out


def identity_map(X: ProjComplex) -> ChainMap:
    A = X.algebra
    return ChainMap(X, X, {k: emat_identity(A, vs) for k, vs in X.terms.items()}, check=False)


def zero_map(X: ProjComplex, Y: ProjComplex) -> ChainMap:
    return ChainMap(X, Y, {}, check=False)


def shift_map(f: ChainMap, s: int) -> ChainMap:
    """``f[s]``: components ``f[s]^m = f^{m+s}``."""
    return ChainMap(shift(f.source, s), shift(f.target, s), {k - s: c for k, c in f.comps.items()}, check=False)


def map_to_sum(X: ProjComplex, targets: Sequence[ProjComplex], maps: Sequence[ChainMap]) -> ChainMap:
    """The column ``(f_1; ...; f_r): X -> (+) targets``."""
    A = X.algebra
    Y = direct_sum(*targets) if targets else zero_complex(A)
    comps = {}
    for k in X.terms:
        if k not in Y.terms:
            continue
        rows = []
        for f, T in zip(maps, targets):
            rows.extend(f.comp(k) if T.term(k) else [])
        comps[k] = rows
    return ChainMap(X, Y, comps, check=False)


def map_from_sum(sources: Sequence[ProjComplex], Y: ProjComplex, maps: Sequence[ChainMap]) -> ChainMap:
    """The row ``(f_1 ... f_r): (+) sources -> Y``."""
    A = Y.algebra
    X = direct_sum(*sources) if sources else zero_complex(A)
    comps = {}
    for k in Y.terms:
        if k not in X.terms:
            continue
        rows = [[] for _ in Y.term(k)]
        for f, S in zip(maps, sources):
            c = f.comp(k)
            for s in range(len(rows)):
                rows[s].extend(c[s] if S.term(k) else [])
        comps[k] = rows
    return ChainMap(X, Y, comps, check=False)


def direct_sum_maps(maps: Sequence[ChainMap]) -> ChainMap:
    A = maps[0].source.algebra
    X = direct_sum(*(f.source for f in maps))
    Y = direct_sum(*(f.target for f in maps))
    comps = {}
    for k in X.terms:
        if k not in Y.terms:
            continue
        blocks = [[f.comp(k) if i == j else None for j, f in enumerate(maps)] for i in range(len(maps))]
        comps[k] = emat_block(A, blocks, [len(f.target.term(k)) for f in maps],
                              [len(f.source.term(k)) for f in maps])
    return ChainMap(X, Y, comps, check=False)


def cone(f: ChainMap, check: bool = True) -> ProjComplex:
    """``cone(f)^k = X^{k+1} (+) Y^k`` with ``d = [[-d_X, 0], [f, d_Y]]``."""
    if check and not f.is_chain_map():
        raise NotAChainMap("cone needs a chain map")
    X, Y = f.source, f.target
    A = X.algebra
    degs = set(k - 1 for k in X.terms) | set(Y.terms)
    terms = {k: X.term(k + 1) + Y.term(k) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in degs:
            continue
        rs = [len(X.term(k + 2)), len(Y.term(k + 1))]
        cs = [len(X.term(k + 1)), len(Y.term(k))]
        blocks = [[emat_scale(A, -1, X.diff(k + 1)), None],
                  [f.comp(k + 1), Y.diff(k)]]
        diffs[k] = emat_block(A, blocks, rs, cs)
    return ProjComplex(A, terms, diffs, check=False)


def cocone(f: ChainMap) -> ProjComplex:
    return shift(cone(f), -1)


# ---------------------------------------------------------------------------
# minimization

def _find_unit(X: ProjComplex):
    A = X.algebra
    for k in sorted(X.diffs):
        d = X.diffs[k]
        src, tgt = X.terms[k], X.terms[k + 1]
        for s, w in enumerate(tgt):
            for t, v in enumerate(src):
                if v == w and A.idempotent_coeff(d[s][t], v):
                    return k, s, t
    return None


def _cancel(X: ProjComplex, k: int, s: int, t: int) -> ProjComplex:
    A = X.algebra
    d = X.diffs[k]
    v = X.terms[k][t]
    uinv = A.inverse_local(d[s][t], v)
    terms = dict(X.terms)
    terms[k] = tuple(x for i, x in enumerate(X.terms[k]) if i != t)
    terms[k + 1] = tuple(x for i, x in enumerate(X.terms[k + 1]) if i != s)
    diffs = dict(X.diffs)
    new = []
    for s2 in range(len(X.terms[k + 1])):
        if s2 == s:
            continue
        left = A.mul(d[s2][t], uinv) if d[s2][t] else {}
        row = []
        for t2 in range(len(X.terms[k])):
            if t2 == t:
                continue
            a = d[s2][t2]
            if left and d[s][t2]:
                a = A.sub(a, A.mul(left, d[s][t2]))
            row.append(a)
        new.append(row)
    diffs[k] = new
    if k - 1 in diffs:
        diffs[k - 1] = [r for i, r in enumerate(diffs[k - 1]) if i != t]
    if k + 1 in diffs:
        diffs[k + 1] = [[a for j, a in enumerate(r) if j != s] for r in diffs[k + 1]]
    return ProjComplex(A, terms, diffs, check=False)


def minimize(X: ProjComplex) -> ProjComplex:
    """Cancel contractible pairs ``e_vA -> e_vA`` (an entry with nonzero
    idempotent coefficient) one at a time until every entry is radical."""
    while True:
        hit = _find_unit(X)
        if hit is None:
            return X
        X = _cancel(X, *hit)


# ---------------------------------------------------------------------------
# complexes of modules

class ModuleComplex:
    def __init__(self, algebra: Algebra, terms: dict, diffs: Optional[dict] = None, check: bool = True):
        self.algebra = algebra
        self.terms = {k: m for k, m in terms.items() if m.total_dim}
        diffs = diffs or {}
        self.diffs = {}
        for k in self.terms:
            if k + 1 in self.terms:
                d = diffs.get(k)
                if d is None:
                    F = algebra.field
                    d = ModuleMap(self.terms[k], self.terms[k + 1],
                                  {v: Mat.zero(F, self.terms[k + 1].dim(v), self.terms[k].dim(v))
                                   for v in algebra.vertices})
                self.diffs[k] = d
        if check:
            for k, d in self.diffs.items():
                if not d.is_homomorphism():
                    raise ValueError(f"d^{k} is not a module map")
                if k + 1 in self.diffs and not (self.diffs[k + 1] @ d).is_zero():
                    raise ValueError(f"d^{k + 1} d^{k} != 0")

    @property
    def lo(self):
        return min(self.terms) if self.terms else None

    @property
    def hi(self):
        return max(self.terms) if self.terms else None

    def is_zero(self):
        return not self.terms

    def term_dim(self, k: int, v: int) -> int:
        m = self.terms.get(k)
        return m.dim(v) if m is not None else 0

    def diff_block(self, k: int, v: int) -> Optional[Mat]:
        d = self.diffs.get(k)
        return d.blocks[v] if d is not None else None


def module_stalk(M: Module, degree: int = 0) -> ModuleComplex:
    return ModuleComplex(M.algebra, {degree: M})


def _emat_to_blocks(A: Algebra, src: Sequence[int], tgt: Sequence[int], emat: list,
                    src_layout: dict, tgt_layout: dict) -> dict:
    """Per-vertex matrices of the module map given by an element matrix."""
    F = A.field
    out = {}
    for u in A.vertices:
        scol = src_layout[u]
        tpos = {sb: i for i, sb in enumerate(tgt_layout[u])}
        rows = [[0] * len(scol) for _ in tgt_layout[u]]
        for col, (t, b) in enumerate(scol):
            for s in range(len(tgt)):
                a = emat[s][t]
                if not a:
                    continue
                for bb, c in A.mul(a, {b: 1}).items():
                    rows[tpos[(s, bb)]][col] = F.add(rows[tpos[(s, bb)]][col], c)
        out[u] = Mat._raw(F, [[F.norm(x) for x in r] for r in rows], len(scol))
    return out


def to_module_complex(X: ProjComplex) -> ModuleComplex:
    A = X.algebra
    mt = X.module_terms()
    terms = {k: m for k, (m, _) in mt.items()}
    diffs = {}
    for k, d in X.diffs.items():
        (M, lm), (N, ln) = mt[k], mt[k + 1]
        diffs[k] = ModuleMap(M, N, _emat_to_blocks(A, X.terms[k], X.terms[k + 1], d, lm, ln))
    return ModuleComplex(A, terms, diffs, check=False)


def nakayama(X: ProjComplex) -> ModuleComplex:
    """Apply ``- (x)_A DA``: ``e_iA -> D(Ae_i)`` termwise.  An entry ``a``
    of the differential becomes the map with matrix entry (row ``c``,
    column ``b``) the coefficient of ``b`` in ``c a``."""
    A = X.algebra
    F = A.field
    inj = {k: injective_sum(A, vs) for k, vs in X.terms.items()}
    diffs = {}
    for k, d in X.diffs.items():
        (I, li), (J, lj) = inj[k], inj[k + 1]
        blocks = {}
        for u in A.vertices:
            src, tgt = li[u], lj[u]
            spos = {sb: i for i, sb in enumerate(src)}
            rows = [[0] * len(src) for _ in tgt]
            for r, (s, c) in enumerate(tgt):
                for t in range(len(X.terms[k])):
                    a = d[s][t]
                    if not a:
                        continue
                    for bb, coef in A.mul({c: 1}, a).items():
                        rows[r][spos[(t, bb)]] = F.add(rows[r][spos[(t, bb)]], coef)
            blocks[u] = Mat._raw(F, [[F.norm(x) for x in row] for row in rows], len(src))
        diffs[k] = ModuleMap(I, J, blocks)
    return ModuleComplex(A, {k: m for k, (m, _) in inj.items()}, diffs, check=False)


def homology_subquotient(X, j: int) -> Optional[Subquotient]:
    """``H^j(X)`` as cycles modulo boundaries inside the term ``X^j``."""
    if isinstance(X, ProjComplex):
        X = to_module_complex(X)
    A = X.algebra
    F = A.field
    M = X.terms.get(j)
    if M is None:
        return None
    Z, B = {}, {}
    for v in A.vertices:
        n = M.dim(v)
        d = X.diff_block(j, v)
        if d is None or d.nrows == 0:
            Z[v] = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        else:
            Z[v] = [_sparse_to_vec(x, n) for x in sparse_kernel(F, d.sparse_rows(), n)]
        dp = X.diff_block(j - 1, v)
        B[v] = [dp.column(c) for c in range(dp.ncols)] if dp is not None else []
    return Subquotient(M, Z, B, name=f"H^{j}")


def homology(X, j: int) -> Module:
    """``H^j(X)`` as a module (``X`` a ProjComplex or ModuleComplex)."""
    sq = homology_subquotient(X, j)
    if sq is None:
        A = X.algebra
        return Module(A, [0] * A.n, name=f"H^{j}")
    return sq.module


def homology_table(X) -> dict:
    """``{j: H^j(X)}`` over nonzero homology degrees."""
    lo, hi = X.lo, X.hi
    out = {}
    if lo is None:
        return out
    for j in range(lo, hi + 1):
        H = homology(X, j)
        if H.total_dim:
            out[j] = H
    return out


# ---------------------------------------------------------------------------
# Hom complexes

class _HomLayout:
    """Coordinates of ``Hom^n(X, Y) = prod_k Hom(X^k, Y^{k+n})``; the block
    of summand ``t`` of ``X^k`` is the vector space ``Y^{k+n} e_{v_t}``."""

    def __init__(self, X: ProjComplex, Y: ModuleComplex, n: int):
        self.blocks = []
        self.offset = {}
        off = 0
        for k in sorted(X.terms):
            for t, v in enumerate(X.terms[k]):
                dim = Y.term_dim(k + n, v)
                self.offset[(k, t)] = off
                self.blocks.append((k, t, v, off, dim))
                off += dim
        self.total = off


def _hom_differential(X: ProjComplex, Y: ModuleComplex, n: int, src: _HomLayout, tgt: _HomLayout) -> list:
    """Sparse rows of ``D f = d_Y f - (-1)^n f d_X`` from Hom^n to Hom^{n+1}."""
    A = X.algebra
    F = A.field
    rows = [dict() for _ in range(tgt.total)]
    sign = -1 if n % 2 == 0 else 1

    def put(r, c, x):
        if x:
            rows[r][c] = F.add(rows[r].get(c, 0), x)

    for (k, t, v, off, dim) in src.blocks:
        if not dim:
            continue
        dY = Y.diff_block(k + n, v)
        if dY is not None:
            roff = tgt.offset[(k, t)]
            for i in range(dY.nrows):
                for j, x in enumerate(dY.rows[i]):
                    put(roff + i, off + j, x)
        # f_{k,t} contributes through d_X^{k-1}[t][t'] to blocks (k-1, t')
        if k - 1 in X.diffs:
            d = X.diffs[k - 1]
            Ymod = Y.terms.get(k + n)
            for t2, v2 in enumerate(X.terms[k - 1]):
                a = d[t][t2]
                if not a:
                    continue
                act = Ymod.action(a, v, v2)
                roff = tgt.offset[(k - 1, t2)]
                for i in range(act.nrows):
                    for j, x in enumerate(act.rows[i]):
                        put(roff + i, off + j, sign * x)
    return [{c: F.norm(x) for c, x in r.items() if F.norm(x)} for r in rows]


class HomotopyHom:
    """``Hom_K(X, Y[n])``: basis of cocycles of the Hom complex modulo
    coboundaries.  ``Y`` may be a ProjComplex (then classes convert to
    chain maps ``X -> Y[n]``) or a ModuleComplex."""

    def __init__(self, X: ProjComplex, Y, n: int):
        self.source = X
        self.target = Y
        self.n = n
        A = X.algebra
        F = A.field
        self.proj_target = isinstance(Y, ProjComplex)
        Ym = to_module_complex(Y) if self.proj_target else Y
        self._Ym = Ym
        lay = _HomLayout(X, Ym, n)
        self.layout = lay
        up = _HomLayout(X, Ym, n + 1)
        down = _HomLayout(X, Ym, n - 1)
        D = _hom_differential(X, Ym, n, lay, up)
        Dm = _hom_differential(X, Ym, n - 1, down, lay)
        cocycles = sparse_kernel(F, D, lay.total)
        ech = Echelon(F, track=True)
        for col in sparse_transpose(Dm).values():
            ech.add(col)
        self.boundary_dim = ech.rank
        self.cocycle_dim = len(cocycles)
        self.basis = []
        for z in cocycles:
            if ech.add(z, {len(self.basis): 1}) is not None:
                self.basis.append(z)
        self._ech = ech

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def coords(self, vec: dict) -> list:
        """Coordinates of a cocycle's class in :attr:`basis`."""
        d = self._ech.express(vec)
        if d is None:
            raise ValueError("not a cocycle of this Hom complex")
        return [d.get(i, 0) for i in range(len(self.basis))]

    def is_null(self, vec: dict) -> bool:
        return not any(self.coords(vec))

    def module_maps(self, vec: dict) -> dict:
        """``{k: {u: Mat}}``: the degreewise module maps ``X^k -> Y^{k+n}``
        of a Hom-complex vector (X's terms in their projective layout)."""
        X, Ym, n = self.source, self._Ym, self.n
        A = X.algebra
        F = A.field
        out = {}
        for k, (P, lay) in X.module_terms().items():
            T = Ym.terms.get(k + n)
            if T is None:
                continue
            blocks = {}
            for u in A.vertices:
                cols = []
                for (t, b) in lay[u]:
                    off = self.layout.offset[(k, t)]
                    v = X.terms[k][t]
                    m = [vec.get(off + i, 0) for i in range(T.dim(v))]
                    cols.append(T.path_action(b).apply(m))
                blocks[u] = Mat._raw(F, [[F.norm(c[i]) for c in cols] for i in range(T.dim(u))], len(cols))
            out[k] = blocks
        return out

    # --- chain map conversion (projective target) ---
    def to_chain_map(self, vec: dict) -> ChainMap:
        if not self.proj_target:
            raise TypeError("target is not a complex of projectives")
        X, Y, n = self.source, self.target, self.n
        A = X.algebra
        layouts = {k: lay for k, (_, lay) in Y.module_terms().items()}
        comps = {}
        for (k, t, v, off, dim) in self.layout.blocks:
            if not dim:
                continue
            c = comps.setdefault(k, emat_zero(len(Y.term(k + n)), len(X.term(k))))
            lay = layouts[k + n][v]
            for i in range(dim):
                x = vec.get(off + i)
                if x:
                    s, b = lay[i]
                    c[s][t] = A.add(c[s][t], {b: x})
        return ChainMap(X, shift(Y, n), comps, check=False)

    def chain_map(self, i: int) -> ChainMap:
        return self.to_chain_map(self.basis[i])

    def chain_maps(self) -> list[ChainMap]:
        return [self.to_chain_map(b) for b in self.basis]

    def vector_of(self, f: ChainMap) -> dict:
        """Hom-complex vector of a chain map ``X -> Y[n]``."""
        n = self.n
        Y = self.target
        layouts = {k: lay for k, (_, lay) in Y.module_terms().items()}
        vec = {}
        for (k, t, v, off, dim) in self.layout.blocks:
            if not dim:
                continue
            pos = {sb: i for i, sb in enumerate(layouts[k + n][v])}
            c = f.comp(k)
            for s in range(len(c)):
                for b, x in c[s][t].items():
                    if x:
                        vec[off + pos[(s, b)]] = x
        return vec

    def class_of(self, f: ChainMap) -> list:
        return self.coords(self.vector_of(f))


def hom_window(X, Y) -> range:
    """Shifts ``n`` with possibly nonzero ``Hom^n(X, Y)``."""
    if X.lo is None or Y.lo is None:
        return range(0)
    return range(Y.lo - X.hi, Y.hi - X.lo + 1)


def homotopy_hom(X: ProjComplex, Y, n: int = 0) -> HomotopyHom:
    return HomotopyHom(X, Y, n)


def hom_dims(X: ProjComplex, Y) -> dict:
    """``{n: dim Hom_K(X, Y[n])}`` over the window (zeros omitted)."""
    out = {}
    for n in hom_window(X, Y):
        d = homotopy_hom(X, Y, n).dim
        if d:
            out[n] = d
    return out


def end_dim(X: ProjComplex) -> int:
    return homotopy_hom(X, X, 0).dim


# ---------------------------------------------------------------------------
# isomorphism and decomposition

def find_complex_isomorphism(X: ProjComplex, Y: ProjComplex, seed: int = 0,
                             random_budget: int = 8) -> search.IsoResult:
    """Isomorphism in the homotopy category.  Both sides are minimized; a
    chain map between minimal complexes is an isomorphism iff its
    idempotent-coefficient blocks are invertible."""
    if X.algebra is not Y.algebra:
        raise ValueError("complexes over different algebras")
    X, Y = minimize(X), minimize(Y)
    if X.shape() != Y.shape():
        return search.IsoResult(False, "term-multiplicities", seed=seed)
    if X.is_zero():
        return search.IsoResult(True, "zero", seed=seed)
    H = homotopy_hom(X, Y, 0)
    HYX = homotopy_hom(Y, X, 0)
    E = homotopy_hom(X, X, 0)
    if not (H.dim == HYX.dim == E.dim):
        return search.IsoResult(False, "hom-dimensions", seed=seed)
    maps = H.chain_maps()
    blocks = [f.top_blocks() for f in maps]
    coeffs, method, bound = search.find_invertible(X.algebra.field, blocks, seed=seed,
                                                   random_budget=random_budget)
    if coeffs is not None:
        w = None
        F = X.algebra.field
        for c, f in zip(coeffs, maps):
            if c:
                w = f.scale(F(c)) if w is None else w + f.scale(F(c))
        w = ChainMap(X, Y, w.comps, check=False)
        return search.IsoResult(True, method, witness=w, seed=seed)
    if method == "symbolic":
        return search.IsoResult(False, "symbolic", seed=seed)
    dx, dy = decompose_complex(X, seed=seed), decompose_complex(Y, seed=seed)
    if len(dx) != len(dy):
        return search.IsoResult(False, "krull-schmidt", seed=seed)
    remaining = list(dy)
    for P in dx:
        for i, Q in enumerate(remaining):
            if P.shape() == Q.shape() and _indecomposable_iso(P, Q):
                remaining.pop(i)
                break
        else:
            return search.IsoResult(False, "krull-schmidt", seed=seed)
    return search.IsoResult(True, "krull-schmidt", seed=seed)


def _indecomposable_iso(P: ProjComplex, Q: ProjComplex) -> bool:
    """For indecomposable P, P ≅ Q iff some g f (f, g basis maps) is invertible."""
    fs = homotopy_hom(P, Q, 0).chain_maps()
    gs = homotopy_hom(Q, P, 0).chain_maps()
    for f in fs:
        f = ChainMap(P, Q, f.comps, check=False)
        for g in gs:
            g = ChainMap(Q, P, g.comps, check=False)
            if search.blocks_invertible((g @ f).top_blocks()):
                return True
    return False


def iso_complex(X: ProjComplex, Y: ProjComplex, seed: int = 0) -> bool:
    return bool(find_complex_isomorphism(X, Y, seed=seed))


def _endo_maps(X: ProjComplex) -> list[ChainMap]:
    return [ChainMap(X, X, f.comps, check=False) for f in homotopy_hom(X, X, 0).chain_maps()]


def _poly_of_map(X: ProjComplex, phi: ChainMap, coeffs: Sequence) -> ChainMap:
    """``sum_i coeffs[i] phi^i`` by Horner's rule."""
    acc = identity_map(X).scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = (acc @ phi) + identity_map(X).scale(c)
    return acc


def _lift_idempotent(e: ChainMap, max_steps: int = 64) -> ChainMap:
    """Iterate ``e -> 3e^2 - 2e^3``; converges because ``e^2 - e`` has
    radical entries."""
    for _ in range(max_steps):
        e2 = e @ e
        if all(a == b for k in e.comps for ra, rb in zip(e2.comp(k), e.comp(k)) for a, b in zip(ra, rb)):
            return e
        e = e2.scale(3) - (e2 @ e).scale(2)
    raise RuntimeError("idempotent lifting did not converge")


def _invert_emat(A: Algebra, verts: Sequence[int], M: list) -> list:
    """Inverse of a square element matrix whose idempotent part is invertible."""
    F = A.field
    n = len(verts)
    M0 = emat_zero(n, n)
    for i in range(n):
        for j in range(n):
            if verts[i] == verts[j]:
                c = A.idempotent_coeff(M[i][j], verts[i])
                if c:
                    M0[i][j] = {A.idempotents[verts[i] - 1]: c}
    # invert the scalar part per vertex
    inv0 = emat_zero(n, n)
    for v in set(verts):
        idx = [i for i in range(n) if verts[i] == v]
        sub = Mat(F, [[A.idempotent_coeff(M0[i][j], v) for j in idx] for i in idx], len(idx))
        from .linalg import inverse
        si = inverse(sub)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                if si.rows[a][b]:
                    inv0[i][j] = {A.idempotents[v - 1]: si.rows[a][b]}
    N = [[A.sub(M[i][j], M0[i][j]) for j in range(n)] for i in range(n)]
    # M = M0 (1 + M0^{-1} N); (1 + R)^{-1} = sum (-R)^i, R nilpotent
    R = emat_mul(A, inv0, N, n)
    term = emat_identity(A, verts)
    acc = emat_identity(A, verts)
    for _ in range(A.nilpotency_degree + 1):
        term = emat_scale(A, -1, emat_mul(A, term, R, n))
        if emat_is_zero(term):
            break
        acc = emat_add(A, acc, term)
    return emat_mul(A, acc, inv0, n)


def summand_of_idempotent(X: ProjComplex, e: ChainMap):
    """The direct summand ``Im e`` of a minimal complex for a strict
    idempotent chain map; returns ``(Z, inclusion, retraction)``."""
    A = X.algebra
    F = A.field
    terms, G, R = {}, {}, {}
    for k, vs in X.terms.items():
        ek = e.comp(k)
        cols, rows = [], []
        for v in A.vertices:
            idx = [i for i, w in enumerate(vs) if w == v]
            ech = Echelon(F)
            chosen = []
            for t in idx:
                col = {s: A.idempotent_coeff(ek[s][t], v) for s in idx}
                col = {s: x for s, x in col.items() if x}
                if col and ech.add(col) is not None:
                    chosen.append(t)
            cols.extend(chosen)
            ech_r = Echelon(F)
            chosen_r = []
            for s in idx:
                row = {t: A.idempotent_coeff(ek[s][t], v) for t in chosen}
                row = {t: x for t, x in row.items() if x}
                if row and ech_r.add(row) is not None:
                    chosen_r.append(s)
            rows.extend(chosen_r)
        zv = tuple(vs[t] for t in cols)
        if not zv:
            continue
        terms[k] = zv
        eJ = [[ek[s][t] for t in cols] for s in range(len(vs))]
        Ke = [ek[s] for s in rows]
        M = [[ek[s][t] for t in cols] for s in rows]
        rv = tuple(vs[s] for s in rows)
        Minv = _invert_emat(A, rv, M)
        # M maps e_{zv} summands to e_{rv} summands; its inverse goes back
        G[k] = eJ
        R[k] = emat_mul(A, Minv, Ke, len(rv))
    diffs = {}
    for k in terms:
        if k + 1 in terms:
            d = emat_mul(A, X.diff(k), G[k], len(X.term(k)))
            diffs[k] = emat_mul(A, R[k + 1], d, len(X.term(k + 1)))
    Z = ProjComplex(A, terms, diffs, check=False)
    inc = ChainMap(Z, X, G, check=False)
    ret = ChainMap(X, Z, R, check=False)
    return Z, inc, ret


def _split_candidates(X: ProjComplex, endo: list[ChainMap], seed: int):
    for f in endo:
        yield f
    k = len(endo)
    for i in range(k):
        for j in range(k):
            yield endo[i] @ endo[j]
    for i in range(k):
        for j in range(i + 1, k):
            yield endo[i] + endo[j].scale(2)
    rng = random.Random(seed)
    for _ in range(20):
        acc = identity_map(X).scale(0)
        for f in endo:
            acc = acc + f.scale(rng.randint(-3, 3))
        yield acc


def _split_once(X: ProjComplex, endo: list[ChainMap], seed: int):
    F = X.algebra.field
    for phi in _split_candidates(X, endo, seed):
        blocks = phi.top_blocks()
        for lam in search.eigenvalues(F, blocks):
            psi = phi - identity_map(X).scale(lam)
            coeffs = search.fitting_polynomials(F, psi.top_blocks())
            if coeffs is None:
                continue
            e = _lift_idempotent(_poly_of_map(X, psi, coeffs))
            one_minus = identity_map(X) - e
            return e, one_minus
    return None


def decompose_complex(X: ProjComplex, seed: int = 0) -> list[ProjComplex]:
    """Indecomposable summands of X in the homotopy category (minimized)."""
    X = minimize(X)
    if X.is_zero():
        return []
    endo = _endo_maps(X)
    F = X.algebra.field
    dim = sum(len(v) for v in X.terms.values())
    if search.trace_form_valid(F, dim):
        if search.trace_form_rank(F, [f.top_blocks() for f in endo]) == 1:
            return [X]
    sp = _split_once(X, endo, seed)
    if sp is None:
        return [X]
    out = []
    for e in sp:
        Z, _, _ = summand_of_idempotent(X, e)
        out.extend(decompose_complex(Z, seed))
    return out


def is_indecomposable(X: ProjComplex) -> bool:
    return len(decompose_complex(X)) == 1


# ---------------------------------------------------------------------------
# random complexes for property tests

def random_complex(A: Algebra, seed: int, steps: int = 3, spread: int = 2) -> ProjComplex:
    """A seeded random perfect complex: iterated cones of random maps
    between the current complex and shifted stalks of projectives."""
    rng = random.Random(seed)
    F = A.field
    X = stalk(A, rng.choice(list(A.vertices)), rng.randint(-spread, spread))
    for _ in range(steps):
        P = stalk(A, rng.choice(list(A.vertices)), rng.randint(-spread, spread))
        into = rng.random() < 0.5
        H = homotopy_hom(P, X, 0) if into else homotopy_hom(X, P, 0)
        f = None
        for g in H.chain_maps():
            g = g.scale(F(rng.randint(-2, 2)))
            f = g if f is None else f + g
        if f is None:
            X = direct_sum(X, P)
        elif into:
            X = minimize(cone(ChainMap(P, X, f.comps, check=False)))
        else:
            X = minimize(cone(ChainMap(X, P, f.comps, check=False)))
    return X
