"""Right modules as quiver representations.

A :class:`Module` stores one vector space per vertex and, for every
arrow ``a: v -> w``, the matrix of ``m -> m a`` as a ``dim_w x dim_v``
matrix acting on column vectors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import Algebra, AlgebraAutomorphism
from .linalg import Echelon, Field, Mat, sparse_kernel, sparse_rank
from . import search


class ResolutionTooLong(RuntimeError):
    pass


class Module:
    def __init__(self, algebra: Algebra, dims: Sequence[int], mats: Optional[dict] = None,
                 name: str = "", check: bool = True):
        self.algebra = algebra
        self.field: Field = algebra.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n or any(d < 0 for d in self.dims):
            raise ValueError(f"bad dimension vector {self.dims}")
        self.name = name
        F = self.field
        self.mats = {}
        mats = mats or {}
        for a in algebra.quiver.arrows:
            m = mats.get(a.id)
            ds, dt = self.dims[a.source - 1], self.dims[a.target - 1]
            if m is None:
                m = Mat.zero(F, dt, ds)
            if m.shape != (dt, ds):
                raise ValueError(f"arrow {a.label}@{a.source}: matrix {m.shape} != {(dt, ds)}")
            self.mats[a.id] = m
        self._path_cache: dict[int, Mat] = {}
        if check:
            for r in algebra.relations:
                start = r.terms[0][1].start
                acc = None
                for c, p in r.terms:
                    term = self._raw_path_action(p.arrows, start).scale(c)
                    acc = term if acc is None else acc + term
                if acc is not None and not acc.is_zero():
                    raise ValueError(f"module {name!r} violates a relation")

    # --- basic data ---
    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self):
        return f"Module({self.name or '?'}, dims={self.dims})"

    def _raw_path_action(self, arrows: Sequence[int], start: int) -> Mat:
        m = Mat.identity(self.field, self.dim(start))
        for a in arrows:
            m = self.mats[a] @ m
        return m

    def path_action(self, b: int) -> Mat:
        """Matrix of right multiplication by basis element ``b``."""
        m = self._path_cache.get(b)
        if m is None:
            A = self.algebra
            m = self._raw_path_action(A.basis[b].arrows, A.starts[b])
            self._path_cache[b] = m
        return m

    def action(self, elem: dict, source: int, target: int) -> Mat:
        """Matrix of right multiplication by ``elem`` in ``e_source A e_target``."""
        acc = Mat.zero(self.field, self.dim(target), self.dim(source))
        A = self.algebra
        for b, c in elem.items():
            if A.starts[b] != source or A.ends[b] != target:
                raise ValueError("element not in e_source A e_target")
            acc = acc + self.path_action(b).scale(c)
        return acc

    def offsets(self) -> list[int]:
        out, off = [], 0
        for d in self.dims:
            out.append(off)
            off += d
        return out


@dataclass
class ModuleMap:
    source: Module
    target: Module
    blocks: dict  # vertex -> Mat (target dim x source dim)

    def block(self, v: int) -> Mat:
        return self.blocks[v]

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, {v: self.blocks[v] @ other.blocks[v] for v in self.blocks})

    def __add__(self, other):
        return ModuleMap(self.source, self.target, {v: self.blocks[v] + other.blocks[v] for v in self.blocks})

    def scale(self, c):
        return ModuleMap(self.source, self.target, {v: m.scale(c) for v, m in self.blocks.items()})

    def is_zero(self):
        return all(m.is_zero() for m in self.blocks.values())

    def block_list(self):
        return [self.blocks[v] for v in sorted(self.blocks)]

    def is_homomorphism(self) -> bool:
        M, N = self.source, self.target
        for a in M.algebra.quiver.arrows:
            if N.mats[a.id] @ self.blocks[a.source] != self.blocks[a.target] @ M.mats[a.id]:
                return False
        return True


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, [0] * algebra.n, name="0")


def direct_sum(*mods: Module) -> Module:
    A = mods[0].algebra
    F = A.field
    dims = [sum(m.dims[v] for m in mods) for v in range(A.n)]
    mats = {aid: Mat.block_diag(F, [m.mats[aid] for m in mods]) for aid in mods[0].mats}
    return Module(A, dims, mats, name=" + ".join(m.name or "?" for m in mods), check=False)


# ---------------------------------------------------------------------------
# distinguished modules

def projective_sum(A: Algebra, vertices: Sequence[int]):
    """``(+)_s e_{vertices[s]} A`` as a module, with its path layout:
    ``layout[v]`` lists ``(summand, basis index)`` for the coordinates at
    vertex ``v``."""
    F = A.field
    layout = {v: [(s, b) for s, i in enumerate(vertices) for b in A.between(i, v)] for v in A.vertices}
    pos = {v: {sb: k for k, sb in enumerate(layout[v])} for v in A.vertices}
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = layout[a.source], layout[a.target]
        ae = A.arrow_elem(a.id)
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for col, (s, b) in enumerate(src):
            for bb, c in A.mul({b: 1}, ae).items():
                rows[pos[a.target][(s, bb)]][col] = c
        mats[a.id] = Mat(F, rows, len(src))
    dims = [len(layout[v]) for v in A.vertices]
    name = " + ".join(f"P{i}" for i in vertices) or "0"
    return Module(A, dims, mats, name=name, check=False), layout


def projective(A: Algebra, i: int) -> Module:
    if not 1 <= i <= A.n:
        raise IndexError(f"vertex {i} out of range")
    M, _ = projective_sum(A, [i])
    M.name = f"P{i}"
    return M


def injective_sum(A: Algebra, vertices: Sequence[int]):
    """``(+)_s D(A e_{vertices[s]})``.  At vertex v the coordinates are the
    dual basis of ``e_v A e_i``; ``(f.a)(c) = f(a c)``."""
    F = A.field
    layout = {v: [(s, b) for s, i in enumerate(vertices) for b in A.between(v, i)] for v in A.vertices}
    pos = {v: {sb: k for k, sb in enumerate(layout[v])} for v in A.vertices}
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = layout[a.source], layout[a.target]
        ae = A.arrow_elem(a.id)
        rows = [[0] * len(src) for _ in range(len(tgt))]
        # row c (basis of e_w A e_i), column b (basis of e_v A e_i): coefficient of b in a*c
        for r, (s, cb) in enumerate(tgt):
            for bb, coef in A.mul(ae, {cb: 1}).items():
                rows[r][pos[a.source][(s, bb)]] = coef
        mats[a.id] = Mat(F, rows, len(src))
    dims = [len(layout[v]) for v in A.vertices]
    return Module(A, dims, mats, name=" + ".join(f"I{i}" for i in vertices), check=False), layout


def injective(A: Algebra, i: int) -> Module:
    if not 1 <= i <= A.n:
        raise IndexError(f"vertex {i} out of range")
    M, _ = injective_sum(A, [i])
    M.name = f"I{i}"
    return M


def simple(A: Algebra, i: int) -> Module:
    if not 1 <= i <= A.n:
        raise IndexError(f"vertex {i} out of range")
    return Module(A, [1 if v == i else 0 for v in A.vertices], name=f"S{i}")


# ---------------------------------------------------------------------------
# sub- and quotient modules

def _vec_to_sparse(vec):
    return {i: x for i, x in enumerate(vec) if x}


def _sparse_to_vec(d, n):
    v = [0] * n
    for i, x in d.items():
        v[i] = x
    return v


class Subquotient:
    """``Z / B`` for submodules ``B ⊆ Z ⊆ M`` given by per-vertex spanning
    vectors.  ``module`` is the result; ``reps[v]`` are vectors of M whose
    classes form its basis; ``coords(v, vec)`` expresses a vector of Z_v."""

    def __init__(self, M: Module, Z: dict, B: dict, name: str = ""):
        A = M.algebra
        F = M.field
        self.ambient = M
        self.reps: dict[int, list] = {}
        self._ech: dict[int, Echelon] = {}
        for v in A.vertices:
            ech = Echelon(F, track=True)
            for b in B.get(v, []):
                ech.add(_vec_to_sparse(b))
            reps = []
            for z in Z.get(v, []):
                if ech.add(_vec_to_sparse(z), {len(reps): 1}) is not None:
                    reps.append(list(z))
            self.reps[v] = reps
            self._ech[v] = ech
        mats = {}
        for a in A.quiver.arrows:
            cols = []
            for r in self.reps[a.source]:
                img = M.mats[a.id].apply(r)
                cols.append(self.coords(a.target, img))
            nt = len(self.reps[a.target])
            mats[a.id] = Mat(F, [[cols[j][i] for j in range(len(cols))] for i in range(nt)], len(cols))
        self.module = Module(A, [len(self.reps[v]) for v in A.vertices], mats, name=name, check=False)

    def coords(self, v: int, vec) -> list:
        d = self._ech[v].express(_vec_to_sparse(vec))
        if d is None:
            raise ValueError("vector does not lie in the submodule Z")
        return _sparse_to_vec(d, len(self.reps[v]))


def full_space(M: Module) -> dict:
    return {v: [[1 if i == j else 0 for j in range(M.dim(v))] for i in range(M.dim(v))] for v in M.algebra.vertices}


def generated_submodule(M: Module, gens: Sequence[tuple[int, list]]) -> dict:
    """Per-vertex bases of the submodule generated by ``(vertex, vector)`` pairs."""
    A = M.algebra
    F = M.field
    ech = {v: Echelon(F) for v in A.vertices}
    out = {v: [] for v in A.vertices}
    queue = list(gens)
    while queue:
        v, vec = queue.pop(0)
        vec = [F(x) for x in vec]
        if ech[v].add(_vec_to_sparse(vec)) is None:
            continue
        out[v].append(vec)
        for a in A.quiver.out_arrows(v):
            queue.append((a.target, M.mats[a.id].apply(vec)))
    return out


def radical_submodule(M: Module) -> dict:
    A = M.algebra
    gens = []
    for a in A.quiver.arrows:
        m = M.mats[a.id]
        for j in range(m.ncols):
            col = m.column(j)
            if any(col):
                gens.append((a.target, col))
    return generated_submodule(M, gens)


def quotient_module(M: Module, gens: Sequence[tuple[int, list]], name: str = "") -> Module:
    return Subquotient(M, full_space(M), generated_submodule(M, gens), name=name).module


def quotient_of_projective(A: Algebra, i: int, elems: Sequence[dict], name: str = "") -> Module:
    """``e_i A / sum_k g_k A`` for elements ``g_k`` of ``e_i A``."""
    P, layout = projective_sum(A, [i])
    gens = []
    for g in elems:
        by_vertex: dict[int, list] = {}
        for b, c in g.items():
            if A.starts[b] != i:
                raise ValueError("generator does not lie in e_i A")
            v = A.ends[b]
            vec = by_vertex.setdefault(v, [0] * P.dim(v))
            vec[layout[v].index((0, b))] = c
        gens.extend(by_vertex.items())
    return quotient_module(P, gens, name=name or f"P{i}/(...)")


def top(M: Module) -> Subquotient:
    return Subquotient(M, full_space(M), radical_submodule(M), name=f"top({M.name})")


def submodule(M: Module, Z: dict, name: str = "") -> Module:
    return Subquotient(M, Z, {}, name=name).module


# ---------------------------------------------------------------------------
# Hom spaces

def hom_space(M: Module, N: Module) -> list[ModuleMap]:
    """Basis of Hom_A(M, N) from the commuting-square equations."""
    A = M.algebra
    if N.algebra is not A:
        raise ValueError("modules over different algebras")
    F = M.field
    var = {}
    off = 0
    for v in A.vertices:
        var[v] = off
        off += N.dim(v) * M.dim(v)
    nvars = off
    rows = []
    for a in A.quiver.arrows:
        v, w = a.source, a.target
        Na, Ma = N.mats[a.id], M.mats[a.id]
        mv, mw = M.dim(v), M.dim(w)
        # (N_a f_v - f_w M_a)[r][c]
        for r in range(N.dim(w)):
            for c in range(mv):
                row = {}
                for k in range(N.dim(v)):
                    x = Na.rows[r][k]
                    if x:
                        idx = var[v] + k * mv + c
                        row[idx] = row.get(idx, 0) + x
                for k in range(mw):
                    x = Ma.rows[k][c]
                    if x:
                        idx = var[w] + r * mw + k
                        row[idx] = row.get(idx, 0) - x
                row = {i: F.norm(x) for i, x in row.items() if F.norm(x)}
                if row:
                    rows.append(row)
    basis = []
    for vec in sparse_kernel(F, rows, nvars):
        blocks = {}
        for v in A.vertices:
            mv, nv = M.dim(v), N.dim(v)
            blocks[v] = Mat._raw(F, [[vec.get(var[v] + r * mv + c, 0) for c in range(mv)] for r in range(nv)], mv)
        basis.append(ModuleMap(M, N, blocks))
    return basis


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_space(M, N))


def hom_dim_via_presentation(M: Module, N: Module) -> int:
    """dim Hom(M, N) as the kernel of Hom(P0, N) -> Hom(P1, N) for a
    projective presentation P1 -> P0 -> M -> 0 (independent of
    :func:`hom_space`)."""
    res = minimal_projective_resolution(M, max_length=1, allow_truncation=True)
    F = M.field
    P0 = res.terms[0]
    P1 = res.terms[1] if len(res.terms) > 1 else []
    # Hom(e_i A, N) = N e_i
    off0, o = [], 0
    for i in P0:
        off0.append(o)
        o += N.dim(i)
    n0 = o
    rows = []
    if P1:
        d = res.differentials[0]  # rows P0, cols P1
        for t, j in enumerate(P1):
            # f o d restricted to summand t: sum_s (d[s][t] acting on f_s) in N e_j
            block = [dict() for _ in range(N.dim(j))]
            for s, i in enumerate(P0):
                el = d[s][t]
                if not el:
                    continue
                act = N.action(el, i, j)
                for r in range(N.dim(j)):
                    for c in range(N.dim(i)):
                        x = act.rows[r][c]
                        if x:
                            block[r][off0[s] + c] = block[r].get(off0[s] + c, 0) + x
            rows.extend(block)
    return n0 - sparse_rank(F, rows)


# ---------------------------------------------------------------------------
# automorphism twist

def twist_module(M: Module, sigma: AlgebraAutomorphism) -> Module:
    """The twisted module: same vertex spaces, arrow ``a`` acting as
    ``sigma^{-1}(a)`` does on M.  Only vertex-fixing automorphisms occur."""
    A = M.algebra
    if sigma.algebra is not A:
        raise ValueError("automorphism of a different algebra")
    inv = sigma.inverse()
    mats = {}
    for a in A.quiver.arrows:
        mats[a.id] = M.action(inv.apply(A.arrow_elem(a.id)), a.source, a.target)
    return Module(A, M.dims, mats, name=f"{sigma.name}({M.name})", check=False)


# ---------------------------------------------------------------------------
# isomorphism and decomposition

def _is_local_endo(M: Module, endo: list[ModuleMap]) -> Optional[bool]:
    F = M.field
    if not search.trace_form_valid(F, M.total_dim):
        return None
    return search.trace_form_rank(F, [e.block_list() for e in endo]) == 1


def _indecomposable_iso(M: Module, N: Module, hMN, hNM) -> Optional[ModuleMap]:
    """For indecomposable M: some g f with f, g basis maps is invertible iff M ≅ N."""
    for f in hMN:
        for g in hNM:
            if search.blocks_invertible((g @ f).block_list()):
                return f
    return None


def find_isomorphism(M: Module, N: Module, seed: int = 0, random_budget: int = 8) -> search.IsoResult:
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    if M.dims != N.dims:
        return search.IsoResult(False, "dimension-vector", seed=seed)
    if M.total_dim == 0:
        return search.IsoResult(True, "zero", seed=seed)
    hMN = hom_space(M, N)
    hNM = hom_space(N, M)
    end = hom_space(M, M)
    if not (len(hMN) == len(hNM) == len(end)):
        return search.IsoResult(False, "hom-dimensions", seed=seed)
    coeffs, method, bound = search.find_invertible(M.field, [f.block_list() for f in hMN], seed=seed,
                                                   random_budget=random_budget)
    if coeffs is not None:
        w = hMN[0].scale(0)
        for c, f in zip(coeffs, hMN):
            if c:
                w = w + f.scale(M.field(c))
        return search.IsoResult(True, method, witness=w, seed=seed)
    if method == "symbolic":
        return search.IsoResult(False, "symbolic", seed=seed)
    # Krull-Schmidt comparison with the exact indecomposable test
    dm, dn = decompose(M, seed=seed), decompose(N, seed=seed)
    if len(dm) != len(dn):
        return search.IsoResult(False, "krull-schmidt", seed=seed)
    remaining = list(dn)
    for X in dm:
        for k, Y in enumerate(remaining):
            if X.dims == Y.dims and _indecomposable_iso(X, Y, hom_space(X, Y), hom_space(Y, X)) is not None:
                remaining.pop(k)
                break
        else:
            return search.IsoResult(False, "krull-schmidt", seed=seed)
    return search.IsoResult(True, "krull-schmidt", seed=seed)


def is_isomorphic(M: Module, N: Module, seed: int = 0) -> bool:
    return bool(find_isomorphism(M, N, seed=seed))


def _power(m: Mat, k: int) -> Mat:
    r = Mat.identity(m.field, m.nrows)
    for _ in range(k):
        r = m @ r
    return r


def _split_candidates(F: Field, endo: list[ModuleMap], seed: int):
    k = len(endo)
    for f in endo:
        yield f
    for i in range(k):
        for j in range(k):
            yield endo[i] @ endo[j]
    for i in range(k):
        for j in range(i + 1, k):
            yield endo[i] + endo[j].scale(F(2))
    rng = random.Random(seed)
    for _ in range(20):
        acc = endo[0].scale(0)
        for f in endo:
            acc = acc + f.scale(F(rng.randint(-3, 3)))
        yield acc


def _fitting_split(M: Module, phi: ModuleMap):
    F = M.field
    blocks = phi.block_list()
    for lam in search.eigenvalues(F, blocks):
        A = M.algebra
        ker, img = {}, {}
        trivial_ker = trivial_img = True
        for v in A.vertices:
            n = M.dim(v)
            psi = phi.blocks[v] - Mat.identity(F, n).scale(lam)
            pw = _power(psi, n)
            kb = [list(_sparse_to_vec(x, n)) for x in sparse_kernel(F, pw.sparse_rows(), n)]
            ib = [r for r in (pw.T.sparse_rows()) if r]
            ib_vecs = []
            ech = Echelon(F)
            for r in ib:
                if ech.add(r) is not None:
                    ib_vecs.append(_sparse_to_vec(r, n))
            ker[v], img[v] = kb, ib_vecs
            trivial_ker &= not kb
            trivial_img &= not ib_vecs
        if not trivial_ker and not trivial_img:
            return ker, img
    return None


def decompose(M: Module, seed: int = 0) -> list[Module]:
    """Indecomposable direct summands of M (Fitting splittings of
    endomorphisms until every summand has a local endomorphism ring)."""
    if M.total_dim == 0:
        return []
    endo = hom_space(M, M)
    local = _is_local_endo(M, endo)
    if local:
        return [M]
    for phi in _split_candidates(M.field, endo, seed):
        sp = _fitting_split(M, phi)
        if sp is not None:
            U = submodule(M, sp[0], name=M.name)
            W = submodule(M, sp[1], name=M.name)
            return decompose(U, seed) + decompose(W, seed)
    return [M]


# ---------------------------------------------------------------------------
# projective resolutions

@dataclass
class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> M``.

    ``terms[k]`` lists the vertices of the summands of ``P_k``;
    ``differentials[k]`` is the algebra-element matrix of ``P_{k+1} -> P_k``
    (rows: summands of ``P_k``).  ``augmentation`` maps ``P_0 -> M``.
    """

    module: Module
    terms: list
    differentials: list
    augmentation: ModuleMap

    @property
    def length(self) -> int:
        return len(self.terms) - 1 if self.terms and self.terms[-1] else max(len(self.terms) - 1, 0)

    def to_complex(self):
        from .complexes import ProjComplex
        A = self.module.algebra
        terms = {-k: tuple(t) for k, t in enumerate(self.terms) if t}
        diffs = {-(k + 1): d for k, d in enumerate(self.differentials)}
        return ProjComplex(A, terms, diffs)


def _cover_generators(M: Module, Z: dict) -> dict:
    """Top representatives of the submodule with per-vertex basis Z."""
    A = M.algebra
    F = M.field
    radgens = []
    for v in A.vertices:
        for z in Z.get(v, []):
            for a in A.quiver.out_arrows(v):
                img = M.mats[a.id].apply(z)
                if any(img):
                    radgens.append((a.target, img))
    rad = generated_submodule(M, radgens)
    out = {}
    for v in A.vertices:
        ech = Echelon(F)
        for r in rad[v]:
            ech.add(_vec_to_sparse(r))
        reps = []
        for z in Z.get(v, []):
            if ech.add(_vec_to_sparse(z)) is not None:
                reps.append(list(z))
        out[v] = reps
    return out


def _map_from_generators(M: Module, gens: list[tuple[int, list]]) -> tuple[list, dict]:
    """The map (+) e_v A -> M sending e_v to each generator; returns the
    summand vertex list and per-vertex matrices (M_u x P_u)."""
    A = M.algebra
    F = M.field
    verts = [v for v, _ in gens]
    mats = {}
    for u in A.vertices:
        cols = []
        for s, (v, m) in enumerate(gens):
            for b in A.between(v, u):
                cols.append(M.path_action(b).apply(m))
        mats[u] = Mat(F, [[c[i] for c in cols] for i in range(M.dim(u))], len(cols))
    return verts, mats


def minimal_projective_resolution(M: Module, max_length: int = 50, allow_truncation: bool = False) -> Resolution:
    A = M.algebra
    F = M.field
    tops = _cover_generators(M, full_space(M))
    gens = [(v, z) for v in A.vertices for z in tops[v]]
    verts, aug_mats = _map_from_generators(M, gens)
    P, layout = projective_sum(A, verts)
    aug = ModuleMap(P, M, aug_mats)
    terms = [verts]
    diffs = []
    cur_P, cur_layout, cur_map = P, layout, aug_mats
    while True:
        K = {u: [_sparse_to_vec(x, cur_P.dim(u)) for x in sparse_kernel(F, cur_map[u].sparse_rows(), cur_P.dim(u))]
             for u in A.vertices}
        if not any(K.values()):
            break
        if len(terms) > max_length:
            if allow_truncation:
                break
            raise ResolutionTooLong(f"resolution of {M.name} longer than {max_length}")
        tops = _cover_generators(cur_P, K)
        gens = [(v, z) for v in A.vertices for z in tops[v]]
        verts, mats = _map_from_generators(cur_P, gens)
        # differential as algebra elements: generator g at vertex v has
        # coordinates (summand s, path b) in cur_P
        d = [[{} for _ in gens] for _ in terms[-1]]
        for t, (v, z) in enumerate(gens):
            for k, x in enumerate(z):
                if x:
                    s, b = cur_layout[v][k]
                    d[s][t][b] = x
        diffs.append(d)
        terms.append(verts)
        if allow_truncation and len(terms) > max_length:
            break
        cur_P, cur_layout = projective_sum(A, verts)
        cur_map = mats
    return Resolution(M, terms, diffs, aug)


def global_dimension(A: Algebra, max_length: int = 50) -> int:
    return max(minimal_projective_resolution(simple(A, i), max_length).length for i in A.vertices)
