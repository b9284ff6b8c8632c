"""Layered searches over linear spaces of block matrices.

Used by isomorphism tests (find an invertible element in a Hom space)
and by decompositions (find an endomorphism that splits an object).
Every "object" here is a tuple of square :class:`Mat` blocks, one per
vertex (modules) or per (degree, vertex) pair (complexes).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

import sympy

from .linalg import Field, Mat, is_invertible, sparse_rank

SYMBOLIC_MAX_DIM = 6
RANDOM_RANGE = 2**20


@dataclass
class IsoResult:
    """Outcome of an isomorphism test; truthy iff isomorphic."""

    isomorphic: bool
    method: str
    witness: object = None
    failure_bound: float = 0.0
    seed: Optional[int] = None

    def __bool__(self):
        return self.isomorphic

    def provenance(self) -> dict:
        exact = self.failure_bound == 0.0
        return {"isomorphic": self.isomorphic, "method": self.method, "exact": exact,
                "seed": self.seed, "failure_bound": self.failure_bound}


def combine(field: Field, basis: Sequence[Sequence[Mat]], coeffs: Sequence) -> list[Mat]:
    nblocks = len(basis[0])
    out = []
    for b in range(nblocks):
        acc = None
        for c, elem in zip(coeffs, basis):
            if not c:
                continue
            term = elem[b].scale(c)
            acc = term if acc is None else acc + term
        if acc is None:
            m = basis[0][b]
            acc = Mat.zero(field, m.nrows, m.ncols)
        out.append(acc)
    return out


def blocks_invertible(blocks: Sequence[Mat]) -> bool:
    return all(m.nrows == m.ncols and (m.nrows == 0 or is_invertible(m)) for m in blocks)


def _candidates(k: int, rng: random.Random, budget: int):
    """Deterministic sweep then seeded random coefficient vectors."""
    for i in range(k):
        yield "sweep", [1 if j == i else 0 for j in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            for c in (1, -1, 2):
                v = [0] * k
                v[i], v[j] = 1, c
                yield "sweep", v
    for _ in range(budget):
        yield "random", [rng.randint(-RANDOM_RANGE, RANDOM_RANGE) for _ in range(k)]


def find_invertible(field: Field, basis: Sequence[Sequence[Mat]], seed: int = 0,
                    random_budget: int = 8, symbolic: bool = True):
    """Search the span of ``basis`` for an element whose blocks are all
    invertible.

    Returns ``(coeffs or None, method, failure_bound)``.  A negative
    answer is exact when the symbolic determinant test ran (dimension at
    most :data:`SYMBOLIC_MAX_DIM`, characteristic zero); otherwise the
    failure bound is the Schwartz-Zippel bound of the random trials.
    """
    k = len(basis)
    if k == 0:
        return None, "empty", 0.0
    rng = random.Random(seed)
    pair_budget = 3 * k * (k - 1) // 2
    count = 0
    for method, coeffs in _candidates(k, rng, random_budget):
        count += 1
        if method == "sweep" and count > k + min(pair_budget, 300):
            continue
        blocks = combine(field, basis, [field(c) for c in coeffs])
        if blocks_invertible(blocks):
            return coeffs, method, 0.0
    if symbolic and field.p is None and k <= SYMBOLIC_MAX_DIM:
        ts = sympy.symbols(f"t0:{k}")
        for b in range(len(basis[0])):
            n = basis[0][b].nrows
            if n == 0:
                continue
            M = sympy.zeros(n, n)
            for c, elem in zip(ts, basis):
                M += c * sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in elem[b].rows])
            if sympy.expand(M.det(method="berkowitz")) == 0:
                return None, "symbolic", 0.0
        # nonzero determinant polynomial: keep drawing until a witness appears
        for _ in range(200):
            coeffs = [rng.randint(-RANDOM_RANGE, RANDOM_RANGE) for _ in range(k)]
            if blocks_invertible(combine(field, basis, coeffs)):
                return coeffs, "symbolic", 0.0
        raise RuntimeError("symbolic determinant nonzero but no witness found")
    degree = sum(m.nrows for m in basis[0])
    size = 2 * RANDOM_RANGE + 1 if field.p is None else field.p
    bound = (min(1.0, degree / size)) ** random_budget if random_budget else 1.0
    return None, "random", bound


# ---------------------------------------------------------------------------
# spectral helpers

def _to_sympy(m: Mat):
    return sympy.Matrix(m.nrows, m.ncols, [sympy.Rational(str(x)) for r in m.rows for x in r])


def charpoly(field: Field, blocks: Sequence[Mat]):
    """Characteristic polynomial of a block-diagonal matrix as a sympy Poly."""
    t = sympy.Symbol("t")
    dom = {"modulus": field.p} if field.p else {"domain": "QQ"}
    acc = sympy.Poly(1, t, **dom)
    for m in blocks:
        if m.nrows == 0:
            continue
        cp = _to_sympy(m).charpoly(t).as_expr()
        acc = acc * sympy.Poly(cp, t, **dom)
    return acc


def eigenvalues(field: Field, blocks: Sequence[Mat]) -> list:
    """Distinct eigenvalues lying in the field, in a deterministic order."""
    P = charpoly(field, blocks)
    if field.p is None:
        roots = sorted(P.ground_roots().keys())
        return [field(sympy.Rational(r).p) if sympy.Rational(r).q == 1
                else field(f"{sympy.Rational(r).p}/{sympy.Rational(r).q}") for r in roots]
    p = field.p
    coeffs = [int(c) % p for c in P.all_coeffs()]
    if p <= 5000:
        return [x for x in range(p) if _horner(coeffs, x, p) == 0]
    fl = sympy.factor_list(P.as_expr(), modulus=p)[1]
    out = set()
    for fac, _ in fl:
        fp = sympy.Poly(fac, sympy.Symbol("t"), modulus=p)
        if fp.degree() == 1:
            a, b = [int(c) % p for c in fp.all_coeffs()]
            out.add((-b * pow(a, -1, p)) % p)
    return sorted(out)


def _horner(coeffs, x, p):
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % p
    return acc


def fitting_polynomials(field: Field, blocks: Sequence[Mat]):
    """For a matrix T with char poly t^a g(t), g(0) != 0, a >= 1, deg g >= 1,
    return coefficient lists (low degree first) of ``v*g`` where
    ``u t^a + v g = 1``; ``(v g)(T)`` projects onto the generalised kernel.
    Returns None if T is invertible or nilpotent."""
    t = sympy.Symbol("t")
    P = charpoly(field, blocks)
    dom = {"modulus": field.p} if field.p else {"domain": "QQ"}
    a = 0
    g = P
    tp = sympy.Poly(t, t, **dom)
    while g.degree() > 0 and g.eval(0) == 0:
        g = sympy.Poly(sympy.quo(g.as_expr(), t), t, **dom)
        a += 1
    if a == 0 or g.degree() == 0:
        return None
    ta = tp ** a
    s, tt, h = sympy.gcdex(ta.as_expr(), g.as_expr(), t, **({"modulus": field.p} if field.p else {}))
    proj = sympy.Poly(sympy.expand(tt * g.as_expr()), t, **dom)
    proj = sympy.Poly(sympy.rem(proj.as_expr(), P.as_expr(), t, **({"modulus": field.p} if field.p else {})), t, **dom)
    coeffs = list(reversed(proj.all_coeffs()))
    out = []
    for c in coeffs:
        r = sympy.Rational(c) if field.p is None else int(c) % field.p
        if field.p is None:
            out.append(field(f"{r.p}/{r.q}"))
        else:
            out.append(field(r))
    return out


def trace_form_rank(field: Field, elements: Sequence[Sequence[Mat]]) -> int:
    """Rank of (a, b) -> sum_blocks tr(a b) on the span of ``elements``.

    On an algebra of matrices in characteristic 0 (or p larger than the
    dimension) this is the dimension of the semisimple quotient.
    """
    k = len(elements)
    rows = []
    for i in range(k):
        row = {}
        for j in range(k):
            s = 0
            for a, b in zip(elements[i], elements[j]):
                if a.nrows:
                    s += (a @ b).trace()
            s = field.norm(s) if field.p is None else s % field.p
            if s:
                row[j] = s
        rows.append(row)
    return sparse_rank(field, rows)


def trace_form_valid(field: Field, dim: int) -> bool:
    return field.p is None or field.p > dim


def pair_products(k: int):
    for i in range(k):
        for j in range(k):
            yield i, j
