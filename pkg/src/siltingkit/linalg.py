"""Exact field arithmetic and dense/sparse Gaussian elimination.

Two fields are supported: the rationals (elements are ``int`` or
``fractions.Fraction``, always normalised so integral values are plain
ints) and prime fields (elements are ints reduced into ``[0, p)``).

The public matrix type is the dense, immutable :class:`Mat`.  Elimination
internally works on sparse rows (``dict`` column -> value) because the
linear systems built from homotopy Hom complexes are very sparse.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class FieldMismatch(ValueError):
    pass


class Field:
    """An exact field: ``Field()`` is Q, ``Field(p)`` is F_p."""

    __slots__ = ("p",)

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            p = int(p)
            if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ValueError(f"{p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    @classmethod
    def parse(cls, spec: str) -> "Field":
        spec = spec.strip()
        if spec in ("Q", "QQ"):
            return cls()
        if spec.startswith("Fp:"):
            return cls(int(spec[3:]))
        raise ValueError(f"unknown field spec {spec!r}")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x):
        """Coerce an int, Fraction or string like '3/4' into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else x
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        if self.p is None:
            r = a * b
            if type(r) is Fraction and r.denominator == 1:
                return r.numerator
            return r
        return a * b % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            r = Fraction(1) / a
            return r.numerator if r.denominator == 1 else r
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def norm(self, a):
        if self.p is None:
            if type(a) is Fraction and a.denominator == 1:
                return a.numerator
            return a
        return a % self.p

    def to_str(self, a) -> str:
        return str(a)


QQ = Field()


class Mat:
    """Dense immutable matrix over a :class:`Field`."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: Optional[int] = None):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, field, rows, ncols):
        m = object.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls._raw(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        return cls._raw(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_sparse(cls, field, sparse_rows, ncols):
        rows = []
        for r in sparse_rows:
            row = [0] * ncols
            for c, v in r.items():
                row[c] = v
            rows.append(row)
        return cls._raw(field, rows, ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, {[list(r) for r in self.rows]})"

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.field
        return Mat._raw(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.field
        return Mat._raw(F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        F = self.field
        return Mat._raw(F, [[F.neg(a) for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        F = self.field
        c = F(c)
        return Mat._raw(F, [[F.mul(c, a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        p = F.p
        cols = other.ncols
        out = []
        orows = other.rows
        for r in self.rows:
            acc = [0] * cols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(orows[k]):
                        if b:
                            acc[j] += a * b
            if p is None:
                acc = [F.norm(x) for x in acc]
            else:
                acc = [x % p for x in acc]
            out.append(acc)
        return Mat._raw(F, out, cols)

    def apply(self, vec: Sequence) -> list:
        F = self.field
        return [F.norm(sum(a * b for a, b in zip(r, vec) if a and b)) if F.p is None
                else sum(a * b for a, b in zip(r, vec)) % F.p for r in self.rows]

    def transpose(self):
        return Mat._raw(self.field, [list(c) for c in zip(*self.rows)] if self.nrows else [], self.nrows) \
            if self.nrows else Mat.zero(self.field, self.ncols, 0)

    T = property(transpose)

    def is_zero(self):
        return all(not a for r in self.rows for a in r)

    def trace(self):
        F = self.field
        return F.norm(sum(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))) if F.p is None \
            else sum(self.rows[i][i] for i in range(min(self.nrows, self.ncols))) % F.p

    def sparse_rows(self):
        return [{j: a for j, a in enumerate(r) if a} for r in self.rows]

    def column(self, j):
        return [r[j] for r in self.rows]

    @staticmethod
    def hstack(mats):
        mats = list(mats)
        F = mats[0].field
        n = mats[0].nrows
        rows = [[] for _ in range(n)]
        for m in mats:
            m._check(mats[0])
            if m.nrows != n:
                raise ValueError("row mismatch in hstack")
            for i in range(n):
                rows[i].extend(m.rows[i])
        return Mat._raw(F, rows, sum(m.ncols for m in mats))

    @staticmethod
    def vstack(mats):
        mats = list(mats)
        F = mats[0].field
        nc = mats[0].ncols
        rows = []
        for m in mats:
            m._check(mats[0])
            if m.ncols != nc:
                raise ValueError("column mismatch in vstack")
            rows.extend(m.rows)
        return Mat._raw(F, rows, nc)

    @staticmethod
    def block_diag(field, mats):
        nc = sum(m.ncols for m in mats)
        rows = []
        off = 0
        for m in mats:
            for r in m.rows:
                rows.append([0] * off + list(r) + [0] * (nc - off - m.ncols))
            off += m.ncols
        return Mat._raw(field, rows, nc)

    def submatrix(self, rows, cols):
        return Mat._raw(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))


# ---------------------------------------------------------------------------
# sparse elimination

def _axpy(field, r, f, row, heap=None, pivots=None):
    """r <- r - f*row in place (sparse)."""
    p = field.p
    for c, v in row.items():
        nv = r.get(c, 0) - f * v
        if p is None:
            if type(nv) is Fraction and nv.denominator == 1:
                nv = nv.numerator
        else:
            nv %= p
        if nv:
            if heap is not None and c not in r and c in pivots:
                heapq.heappush(heap, c)
            r[c] = nv
        else:
            r.pop(c, None)


class Echelon:
    """Incremental row echelon form of a row space, with combination tags.

    Rows are sparse dicts.  Each stored row carries a tag: a sparse dict
    giving it as a combination of the tagged generators inserted so far.
    Pivots are chosen as the smallest surviving column, so the row space
    basis is deterministic given the insertion order.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.pivots: dict[int, dict] = {}
        self.tags: dict[int, dict] = {}
        self.track = track

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec: dict, tag: Optional[dict] = None):
        """Reduce ``vec`` against the stored rows; returns (remainder, tag)."""
        F = self.field
        r = dict(vec)
        t = dict(tag) if tag is not None else {}
        piv = self.pivots
        heap = [c for c in r if c in piv]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            f = r.get(c)
            if not f:
                continue
            _axpy(F, r, f, piv[c], heap, piv)
            if self.track:
                _axpy(F, t, f, self.tags[c])
        return r, t

    def add(self, vec: dict, tag: Optional[dict] = None) -> Optional[int]:
        """Insert a row; returns its pivot column, or None if dependent."""
        r, t = self.reduce(vec, tag)
        if not r:
            return None
        F = self.field
        c = min(r)
        inv = F.inv(r[c])
        if inv != 1:
            r = {k: F.mul(v, inv) for k, v in r.items()}
            if self.track:
                t = {k: F.mul(v, inv) for k, v in t.items()}
        self.pivots[c] = r
        if self.track:
            self.tags[c] = t
        return c

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: dict) -> Optional[dict]:
        """Coefficients of ``vec`` in the tagged generators, or None."""
        r, t = self.reduce(vec)
        if r:
            return None
        F = self.field
        return {k: F.neg(v) for k, v in t.items() if v}

    def rref(self) -> dict[int, dict]:
        """Fully reduced rows keyed by pivot column (does not mutate self)."""
        F = self.field
        out = {}
        for c in sorted(self.pivots, reverse=True):
            r = dict(self.pivots[c])
            for cc in sorted((k for k in r if k != c and k in out)):
                f = r.get(cc)
                if f:
                    _axpy(F, r, f, out[cc])
            out[c] = r
        return out


def echelon_of(field, rows: Iterable[dict]) -> Echelon:
    e = Echelon(field)
    for r in rows:
        e.add(r)
    return e


def sparse_rank(field, rows: Iterable[dict]) -> int:
    return echelon_of(field, rows).rank


def sparse_kernel(field, rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of the right null space of a sparse matrix, one vector per
    free column in increasing order (reduced echelon normalisation)."""
    rref = echelon_of(field, rows).rref()
    free = [j for j in range(ncols) if j not in rref]
    basis = []
    for f in free:
        v = {f: 1}
        for c, r in rref.items():
            a = r.get(f)
            if a:
                v[c] = field.neg(a)
        basis.append(v)
    return basis


def sparse_transpose(rows: Sequence[dict]) -> dict[int, dict]:
    cols: dict[int, dict] = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols.setdefault(j, {})[i] = v
    return cols


def sparse_solve(field, rows: Sequence[dict], ncols: int, b: Sequence) -> Optional[dict]:
    aug = []
    for r, bi in zip(rows, b):
        rr = dict(r)
        if bi:
            rr[ncols] = bi
        aug.append(rr)
    rref = echelon_of(field, aug).rref()
    if ncols in rref:
        return None
    return {c: r[ncols] for c, r in rref.items() if r.get(ncols)}


# ---------------------------------------------------------------------------
# dense public API

def _same_field(m: Mat):
    F = m.field
    for r in m.rows:
        for a in r:
            if F.p is not None and (not isinstance(a, int) or not 0 <= a < F.p):
                raise FieldMismatch("entry not reduced into the prime field")


def rank(m: Mat) -> int:
    _same_field(m)
    return sparse_rank(m.field, m.sparse_rows())


def kernel_basis(m: Mat) -> list[list]:
    """Column vectors spanning the right null space (reduced echelon)."""
    _same_field(m)
    out = []
    for v in sparse_kernel(m.field, m.sparse_rows(), m.ncols):
        vec = [0] * m.ncols
        for j, a in v.items():
            vec[j] = a
        out.append(vec)
    return out


def solve(m: Mat, b: Sequence) -> Optional[list]:
    """A particular solution of ``m v = b``, or None if inconsistent."""
    if len(b) != m.nrows:
        raise ValueError(f"rhs length {len(b)} != {m.nrows} rows")
    F = m.field
    sol = sparse_solve(F, m.sparse_rows(), m.ncols, [F(x) for x in b])
    if sol is None:
        return None
    vec = [0] * m.ncols
    for j, a in sol.items():
        vec[j] = a
    return vec


def is_invertible(m: Mat) -> bool:
    if m.nrows != m.ncols:
        raise ValueError("is_invertible needs a square matrix")
    return rank(m) == m.nrows


def inverse(m: Mat) -> Mat:
    if m.nrows != m.ncols:
        raise ValueError("inverse needs a square matrix")
    n = m.nrows
    F = m.field
    aug = [dict(r) for r in m.sparse_rows()]
    for i in range(n):
        aug[i][n + i] = 1
    rref = echelon_of(F, aug).rref()
    if any(c not in rref for c in range(n)):
        raise ZeroDivisionError("singular matrix")
    return Mat.from_sparse(F, [{j - n: v for j, v in rref[i].items() if j >= n} for i in range(n)], n)


def row_space_basis(field, vectors: Iterable[dict]) -> list[dict]:
    return [r for _, r in sorted(echelon_of(field, vectors).rref().items())]
