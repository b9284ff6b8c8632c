"""Finite-dimensional quiver algebras kQ/I, trivial extensions and
automorphisms induced by arrow permutations.

Conventions
-----------
* Vertices are numbered ``1..n``.
* Paths compose left to right: the path ``x y`` is "x then y".
* Right modules.  ``e_i A`` is spanned by paths starting at ``i``.
* ``Hom_A(e_i A, e_j A)`` is identified with ``e_j A e_i`` (paths from ``j``
  to ``i``) acting by left multiplication.  A matrix of algebra elements
  between sums of indecomposable projectives therefore has its
  ``(target summand, source summand)`` entry in ``e_target A e_source`` and
  matrices compose by ordinary matrix multiplication.

Algebra elements are sparse dicts ``{basis index: coefficient}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import QQ, Echelon, Field, Mat, rank as mat_rank, sparse_rank, sparse_solve


class NotFiniteDimensional(ValueError):
    pass


class NonAdmissible(ValueError):
    pass


class RelationNotPreserved(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: int
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("arrow ids must be unique")
        seen = set()
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count and 1 <= a.target <= self.vertex_count):
                raise ValueError(f"arrow {a} has an endpoint outside 1..{self.vertex_count}")
            if (a.label, a.source) in seen:
                raise ValueError(f"duplicate (label, source) pair {(a.label, a.source)}")
            seen.add((a.label, a.source))

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow(self, arrow_id: int) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def arrow_by_label(self, label: str, source: int) -> Arrow:
        for a in self.arrows:
            if a.label == label and a.source == source:
                return a
        raise KeyError(f"no arrow {label!r} out of vertex {source}")

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def path(self, start: int, labels: Sequence[str]) -> "Path":
        ids = []
        v = start
        for lab in labels:
            a = self.arrow_by_label(lab, v)
            ids.append(a.id)
            v = a.target
        return Path(start, tuple(ids))


@dataclass(frozen=True, order=True)
class Path:
    start: int
    arrows: tuple[int, ...] = ()

    def __len__(self):
        return len(self.arrows)

    def end(self, quiver: Quiver) -> int:
        return quiver.arrow(self.arrows[-1]).target if self.arrows else self.start


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[object, Path], ...]


def _enumerate_paths(quiver: Quiver, length: int, prev: list[Path]) -> list[Path]:
    if length == 0:
        return [Path(v) for v in quiver.vertices]
    ends = {a.id: a.target for a in quiver.arrows}
    out = []
    for p in prev:
        e = ends[p.arrows[-1]] if p.arrows else p.start
        for a in quiver.out_arrows(e):
            out.append(Path(p.start, p.arrows + (a.id,)))
    return out


class FDAlgebra:
    """A finite-dimensional basic algebra with a basis adapted to the
    vertex idempotents: every basis element ``b`` satisfies
    ``b = e_start(b) * b * e_end(b)``.

    Subclasses provide ``names``, ``starts``, ``ends``, ``idempotents`` and
    the structure table ``_mult``.
    """

    field: Field
    n: int
    names: list[str]
    starts: list[int]
    ends: list[int]
    idempotents: list[int]          # basis index of e_v for v = 1..n
    _mult: dict

    def _finish(self):
        self.dim = len(self.names)
        self._pair: dict[tuple[int, int], list[int]] = {}
        for b in range(self.dim):
            self._pair.setdefault((self.starts[b], self.ends[b]), []).append(b)
        self._idem_vertex = {b: v for v, b in enumerate(self.idempotents, start=1)}

    def __deepcopy__(self, memo):
        # immutable, and objects over one algebra are matched by identity
        return self

    # --- basis bookkeeping ---
    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def between(self, s: int, t: int) -> list[int]:
        """Basis indices of ``e_s A e_t`` (elements "from s to t")."""
        return self._pair.get((s, t), [])

    def dim_between(self, s: int, t: int) -> int:
        return len(self._pair.get((s, t), ()))

    def e(self, v: int) -> dict:
        return {self.idempotents[v - 1]: 1}

    def idempotent_coeff(self, a: dict, v: int):
        return a.get(self.idempotents[v - 1], 0)

    def is_radical(self, a: dict) -> bool:
        return not any(b in self._idem_vertex for b in a)

    def basis_elem(self, b: int) -> dict:
        return {b: 1}

    # --- arithmetic ---
    def mul(self, a: dict, b: dict) -> dict:
        F = self.field
        out: dict = {}
        mult = self._mult
        for i, x in a.items():
            for j, y in b.items():
                prod = mult.get((i, j))
                if prod:
                    xy = x * y
                    for k, c in prod.items():
                        out[k] = out.get(k, 0) + xy * c
        return _clean(F, out)

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + v
        return _clean(self.field, out)

    def sub(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) - v
        return _clean(self.field, out)

    def scale(self, c, a: dict) -> dict:
        return _clean(self.field, {k: c * v for k, v in a.items()})

    def neg(self, a: dict) -> dict:
        F = self.field
        return {k: F.neg(v) for k, v in a.items()}

    def one(self) -> dict:
        return {b: 1 for b in self.idempotents}

    def inverse_local(self, u: dict, v: int) -> dict:
        """Inverse of a unit of the local ring ``e_v A e_v``."""
        F = self.field
        c = self.idempotent_coeff(u, v)
        if not c:
            raise ZeroDivisionError("element is not a unit of e_v A e_v")
        ci = F.inv(c)
        r = self.scale(ci, {k: w for k, w in u.items() if k != self.idempotents[v - 1]})
        # u = c (e_v + r) with r nilpotent
        term = self.e(v)
        acc = dict(term)
        mr = self.neg(r)
        for _ in range(self.dim + 1):
            term = self.mul(term, mr)
            if not term:
                break
            acc = self.add(acc, term)
        return self.scale(ci, acc)

    def vector(self, a: dict) -> list:
        v = [0] * self.dim
        for k, c in a.items():
            v[k] = c
        return v

    def fmt(self, a: dict) -> str:
        if not a:
            return "0"
        parts = []
        for k in sorted(a):
            c = a[k]
            nm = self.names[k]
            if c == 1:
                parts.append(nm)
            elif self.field.p is None and c == -1:
                parts.append("-" + nm)
            else:
                parts.append(f"{c}*{nm}")
        return " + ".join(parts).replace("+ -", "- ")

    # --- checks ---
    def check_associative(self, triples: Optional[Iterable] = None) -> bool:
        rng = range(self.dim)
        if triples is None:
            triples = ((a, b, c) for a in rng for b in rng for c in rng)
        for a, b, c in triples:
            A, B, C = {a: 1}, {b: 1}, {c: 1}
            if self.mul(self.mul(A, B), C) != self.mul(A, self.mul(B, C)):
                return False
        return True

    def structure_matrix(self) -> dict:
        return {k: dict(v) for k, v in self._mult.items()}

    def dim_vector_projective(self, i: int) -> tuple[int, ...]:
        return tuple(self.dim_between(i, v) for v in self.vertices)

    def dim_vector_injective(self, i: int) -> tuple[int, ...]:
        return tuple(self.dim_between(v, i) for v in self.vertices)

    def gram_matrix(self, form) -> Mat:
        """Matrix of the bilinear form (a, b) -> form(a b) on the basis."""
        rows = [[form(self.mul({a: 1}, {b: 1})) for b in range(self.dim)] for a in range(self.dim)]
        return Mat(self.field, rows, self.dim)


def _clean(F: Field, d: dict) -> dict:
    if F.p is None:
        out = {}
        for k, v in d.items():
            if v:
                if type(v) is Fraction and v.denominator == 1:
                    v = v.numerator
                out[k] = v
        return out
    p = F.p
    return {k: v % p for k, v in d.items() if v % p}


class Algebra(FDAlgebra):
    """Path algebra of a quiver modulo a homogeneous admissible ideal.

    Build with :func:`build_algebra`.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field: Field,
                 basis: list[Path], reductions: dict[Path, dict], max_length: int):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        self.n = quiver.vertex_count
        self.basis = basis
        self.index = {p: i for i, p in enumerate(basis)}
        self._reductions = reductions
        self.max_length = max_length
        self.names = [self._path_name(p) for p in basis]
        self.starts = [p.start for p in basis]
        self.ends = [p.end(quiver) for p in basis]
        self.idempotents = [self.index[Path(v)] for v in quiver.vertices]
        self._ends_of = {a.id: a.target for a in quiver.arrows}
        self._mult = {}
        for i, p in enumerate(basis):
            e = self.ends[i]
            for j, q in enumerate(basis):
                if q.start != e:
                    continue
                r = self.reduce_path(Path(p.start, p.arrows + q.arrows))
                if r:
                    self._mult[(i, j)] = r
        self._finish()

    def _label_ambiguous(self) -> bool:
        labels = [a.label for a in self.quiver.arrows]
        return len(set(labels)) != len(labels)

    def _path_name(self, p: Path) -> str:
        if not p.arrows:
            return f"e{p.start}"
        labs = [self.quiver.arrow(a).label for a in p.arrows]
        word = "".join(labs) if all(len(l) == 1 for l in labs) else "*".join(labs)
        if self._label_ambiguous():
            return f"{word}@{p.start}"
        return word

    def reduce_path(self, path: Path) -> dict:
        """Normal form of a path of kQ in the quotient (sparse, by basis index)."""
        if len(path) > self.max_length:
            return {}
        red = self._reductions.get(path)
        if red is None:
            return {}
        return dict(red)

    def reduce_combination(self, terms: Iterable[tuple[object, Path]]) -> dict:
        out: dict = {}
        for c, p in terms:
            for k, v in self.reduce_path(p).items():
                out[k] = out.get(k, 0) + c * v
        return _clean(self.field, out)

    def path_elem(self, start: int, labels: Sequence[str]) -> dict:
        return self.reduce_path(self.quiver.path(start, labels))

    def word(self, start: int, word: str) -> dict:
        """Element from a word of single-character labels, e.g. ``word(1, "xy")``."""
        return self.path_elem(start, list(word))

    def arrow_elem(self, arrow_id: int) -> dict:
        a = self.quiver.arrow(arrow_id)
        return self.reduce_path(Path(a.source, (arrow_id,)))

    def path_length(self, b: int) -> int:
        return len(self.basis[b])

    @property
    def nilpotency_degree(self) -> int:
        return max(len(p) for p in self.basis)


def build_algebra(quiver: Quiver, relations: Sequence[Relation], length_cap: Optional[int] = None,
                  field: Field = QQ) -> Algebra:
    """Compute a path basis of kQ/I degree by degree.

    In each length the ideal component is spanned by the products
    ``u * r * v``; paths that are pivots of its reduced echelon form are
    eliminated, the remaining paths form the basis in that length.
    """
    if length_cap is None:
        maxout = max((len(quiver.out_arrows(v)) for v in quiver.vertices), default=0)
        length_cap = max(2 * quiver.vertex_count * max(maxout, 1), 2)
    if length_cap < 1:
        raise ValueError("length_cap must be at least 1")
    rels = []
    for r in relations:
        terms = [(field(c), p) for c, p in r.terms if field(c)]
        if not terms:
            continue
        lens = {len(p) for _, p in terms}
        if min(lens) < 2:
            raise NonAdmissible(f"relation {r} has a term of length < 2")
        if len({(p.start, p.end(quiver)) for _, p in terms}) != 1:
            raise NonAdmissible(f"relation {r} has non-parallel terms")
        if len(lens) != 1:
            raise NonAdmissible(f"relation {r} is not homogeneous")
        rels.append((lens.pop(), terms))

    paths_by_len: list[list[Path]] = []
    basis: list[Path] = []
    reductions: dict[Path, dict] = {}
    prev: list[Path] = []
    ell = 0
    ends = {a.id: a.target for a in quiver.arrows}
    while True:
        paths = _enumerate_paths(quiver, ell, prev)
        paths_by_len.append(paths)
        idx = {p: i for i, p in enumerate(paths)}
        ech = Echelon(field)
        for rl, terms in rels:
            if rl > ell:
                continue
            start, end = terms[0][1].start, terms[0][1].end(quiver)
            for a in range(ell - rl + 1):
                us = [u for u in paths_by_len[a] if (ends[u.arrows[-1]] if u.arrows else u.start) == start]
                vs = [v for v in paths_by_len[ell - rl - a] if v.start == end]
                for u in us:
                    for v in vs:
                        row = {}
                        for c, p in terms:
                            k = idx[Path(u.start, u.arrows + p.arrows + v.arrows)]
                            row[k] = row.get(k, 0) + c
                        row = _clean(field, row)
                        if row:
                            ech.add(row)
        rref = ech.rref()
        free = [i for i in range(len(paths)) if i not in rref]
        if not free:
            break
        if ell >= length_cap:
            raise NotFiniteDimensional(f"new basis paths still appear at length {ell}")
        pos = {}
        for i in free:
            pos[i] = len(basis)
            basis.append(paths[i])
            reductions[paths[i]] = {pos[i]: 1}
        for c, row in rref.items():
            reductions[paths[c]] = _clean(field, {pos[j]: field.neg(v) for j, v in row.items() if j != c})
        prev = paths
        ell += 1
    return Algebra(quiver, rels_to_relations(rels), field, basis, reductions, ell - 1)


def rels_to_relations(rels) -> list[Relation]:
    return [Relation(tuple(terms)) for _, terms in rels]


# ---------------------------------------------------------------------------
# automorphisms

class AlgebraAutomorphism:
    """Vertex-fixing automorphism induced by a permutation of arrows."""

    def __init__(self, algebra: Algebra, arrow_map: dict[int, int], name: str = "sigma"):
        self.algebra = algebra
        self.name = name
        self.arrow_map = dict(arrow_map)
        A = algebra
        q = A.quiver
        ids = sorted(a.id for a in q.arrows)
        if sorted(self.arrow_map) != ids or sorted(self.arrow_map.values()) != ids:
            raise ValueError("arrow map must be a bijection on arrow ids")
        for a, b in self.arrow_map.items():
            aa, bb = q.arrow(a), q.arrow(b)
            if (aa.source, aa.target) != (bb.source, bb.target):
                raise ValueError(f"arrow map does not preserve endpoints of arrow {aa.label}")
        for r in A.relations:
            img = A.reduce_combination((c, self._map_path(p)) for c, p in r.terms)
            if img:
                raise RelationNotPreserved(f"image of relation {r} is {A.fmt(img)}")
        self.images = [A.reduce_path(self._map_path(p)) for p in A.basis]
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.apply(A.mul({i: 1}, {j: 1}))
                rhs = A.mul(self.images[i], self.images[j])
                if lhs != rhs:
                    raise RelationNotPreserved("induced map is not multiplicative")

    def _map_path(self, p: Path) -> Path:
        return Path(p.start, tuple(self.arrow_map[a] for a in p.arrows))

    def apply(self, a: dict) -> dict:
        A = self.algebra
        out: dict = {}
        for k, c in a.items():
            for kk, v in self.images[k].items():
                out[kk] = out.get(kk, 0) + c * v
        return _clean(A.field, out)

    def vertex(self, v: int) -> int:
        return v

    def matrix(self) -> Mat:
        A = self.algebra
        rows = [[self.images[j].get(i, 0) for j in range(A.dim)] for i in range(A.dim)]
        return Mat(A.field, rows, A.dim)

    def compose(self, other: "AlgebraAutomorphism") -> "AlgebraAutomorphism":
        return AlgebraAutomorphism(self.algebra, {a: self.arrow_map[other.arrow_map[a]] for a in other.arrow_map},
                                   name=f"{self.name}*{other.name}")

    def inverse(self) -> "AlgebraAutomorphism":
        return AlgebraAutomorphism(self.algebra, {b: a for a, b in self.arrow_map.items()}, name=f"{self.name}^-1")

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.arrow_map.items())

    def __repr__(self):
        return f"AlgebraAutomorphism({self.name})"


def automorphism_from_arrows(algebra: Algebra, arrow_map: dict[int, int], name: str = "sigma") -> AlgebraAutomorphism:
    return AlgebraAutomorphism(algebra, arrow_map, name)


def swap_labels(algebra: Algebra, a: str = "x", b: str = "y", name: str = "eps") -> AlgebraAutomorphism:
    """Automorphism swapping the arrows labelled ``a`` and ``b`` at every vertex."""
    q = algebra.quiver
    m = {}
    for arr in q.arrows:
        if arr.label in (a, b):
            other = b if arr.label == a else a
            m[arr.id] = q.arrow_by_label(other, arr.source).id
        else:
            m[arr.id] = arr.id
    return AlgebraAutomorphism(algebra, m, name)


# ---------------------------------------------------------------------------
# trivial extensions

class TrivialExtension(FDAlgebra):
    """T(A) = A ⋉ DA built from the structure constants of A.

    Basis: the basis of A followed by the dual basis ``b*`` of DA, with
    bimodule action ``(a.f)(c) = f(c a)`` and ``(f.b)(c) = f(b c)``.
    """

    def __init__(self, base: FDAlgebra):
        A = base
        self.base = A
        self.field = A.field
        self.n = A.n
        N = A.dim
        self.names = list(A.names) + [nm + "*" for nm in A.names]
        self.starts = list(A.starts) + list(A.ends)
        self.ends = list(A.ends) + list(A.starts)
        self.idempotents = list(A.idempotents)
        mult = {}
        for (i, j), prod in A._mult.items():
            mult[(i, j)] = dict(prod)
        # coefficient of q in (r a): coef[(r, a)][q]
        for a in range(N):
            for q in range(N):
                # a . q* = sum_r coef_q(r a) r*
                left = {}
                for r in range(N):
                    c = A._mult.get((r, a), {}).get(q)
                    if c:
                        left[N + r] = c
                if left:
                    mult[(a, N + q)] = left
                # q* . a = sum_r coef_q(a r) r*
                right = {}
                for r in range(N):
                    c = A._mult.get((a, r), {}).get(q)
                    if c:
                        right[N + r] = c
                if right:
                    mult[(N + q, a)] = right
        self._mult = mult
        self._finish()

    def socle_form(self, t: dict):
        """phi(a, f) = f(1)."""
        N = self.base.dim
        F = self.field
        return F.norm(sum(t.get(N + b, 0) for b in self.base.idempotents))


def trivial_extension(algebra: FDAlgebra) -> TrivialExtension:
    return TrivialExtension(algebra)


def is_symmetric_algebra(T: FDAlgebra, form) -> bool:
    G = T.gram_matrix(form)
    return G == G.T and mat_rank(G) == T.dim


# ---------------------------------------------------------------------------
# the algebras used throughout

def _alternating(start_label: str, length: int) -> list[str]:
    other = "y" if start_label == "x" else "x"
    return [start_label if k % 2 == 0 else other for k in range(length)]


def dihedral_quiver(n: int, wrap: bool = False) -> Quiver:
    arrows = []
    aid = 0
    for i in range(1, n):
        for lab in ("x", "y"):
            arrows.append(Arrow(aid, lab, i, i + 1))
            aid += 1
    if wrap:
        for lab in ("x", "y"):
            arrows.append(Arrow(aid, lab, n, 1))
            aid += 1
    return Quiver(n, tuple(arrows))


def dihedral_relations(q: Quiver, wrap: bool = False) -> list[Relation]:
    rels = []
    for a in q.arrows:
        for lab in ("x", "y"):
            if a.label != lab:
                continue
            for b in q.out_arrows(a.target):
                if b.label == lab:
                    rels.append(Relation(((1, Path(a.source, (a.id, b.id))),)))
    if wrap:
        n = q.vertex_count
        for v in q.vertices:
            px = q.path(v, _alternating("x", n))
            py = q.path(v, _alternating("y", n))
            rels.append(Relation(((1, px), (-1, py))))
    return rels


def dihedral_algebra(n: int, field: Field = QQ) -> Algebra:
    """A_n: the doubled linear quiver 1 => 2 => ... => n modulo x^2 = y^2 = 0."""
    if n < 1:
        raise ValueError("n must be positive")
    q = dihedral_quiver(n)
    return build_algebra(q, dihedral_relations(q), field=field)


def dihedral_trivial_extension(n: int, field: Field = QQ) -> Algebra:
    """Quiver presentation of T(A_n): wrap-around arrows n -> 1 labelled x, y,
    relations x^2 = y^2 = 0 everywhere and equality of the two alternating
    cycles of length n at each vertex.  Only even n gives T(A_n); for odd n
    the same relations present a twisted trivial extension."""
    if n % 2:
        raise ValueError("the presentation of T(A_n) needs even n")
    q = dihedral_quiver(n, wrap=True)
    return build_algebra(q, dihedral_relations(q, wrap=True), field=field)


def kronecker_algebra(field: Field = QQ) -> Algebra:
    q = Quiver(2, (Arrow(0, "x", 1, 2), Arrow(1, "y", 1, 2)))
    return build_algebra(q, [], field=field)


def presentation_matches_trivial_extension(A: Algebra, T: Algebra) -> bool:
    """Check that the quiver presentation ``T`` is isomorphic to the
    structural trivial extension of ``A``.

    ``A``'s arrows must appear in ``T`` with the same ids.  The matching
    sends basis paths of A to the same paths in T and the dual basis
    element ``q*`` to the element ``w`` of the span of wrap-around paths
    with ``phi(c w) = q*(c)`` for all basis paths ``c`` of A, where
    ``phi`` is the coefficient of the maximal cycles.  The map is then
    verified to be bijective and multiplicative.
    """
    S = trivial_extension(A)
    if S.dim != T.dim:
        return False
    F = A.field
    embed = []
    for p in A.basis:
        img = T.reduce_path(p)
        if len(img) != 1 or list(img.values())[0] != 1:
            return False
        embed.append(img)
    a_image = {next(iter(e)) for e in embed}
    wrap = [b for b in range(T.dim) if b not in a_image]
    top = {}
    for v in T.vertices:
        cands = [b for b in range(T.dim) if T.starts[b] == v and T.ends[b] == v and T.path_length(b) == T.nilpotency_degree]
        if len(cands) != 1:
            return False
        top[v] = cands[0]

    def phi(t):
        return F.norm(sum(t.get(b, 0) for b in top.values()))

    # matrix M[c][w] = phi(c * w)
    rows = [{k: phi(T.mul(embed[c], {w: 1})) for k, w in enumerate(wrap)} for c in range(A.dim)]
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    psi = list(embed)
    for q in range(A.dim):
        sol = sparse_solve(F, rows, len(wrap), [1 if c == q else 0 for c in range(A.dim)])
        if sol is None:
            return False
        psi.append({wrap[k]: v for k, v in sol.items()})
    if sparse_rank(F, psi) != T.dim:
        return False
    for i in range(S.dim):
        for j in range(S.dim):
            prod = S.mul({i: 1}, {j: 1})
            lhs = {}
            for k, c in prod.items():
                for kk, v in psi[k].items():
                    lhs[kk] = lhs.get(kk, 0) + c * v
            if _clean(F, lhs) != T.mul(psi[i], psi[j]):
                return False
    return True
