from fractions import Fraction

import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from siltingkit.linalg import (Echelon, Field, FieldMismatch, Mat, inverse, is_invertible, kernel_basis, rank,
                               solve, sparse_kernel)

QQ = Field()
F5 = Field(5)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_field_parse_and_repr():
    assert repr(Field.parse("Q")) == "Q"
    assert repr(Field.parse("Fp:7")) == "Fp:7"
    assert Field.parse("Fp:7").characteristic == 7
    with pytest.raises(ValueError):
        Field.parse("Fp:8")
    with pytest.raises(ValueError):
        Field.parse("R")


def test_field_coercion():
    assert QQ("3/4") == Fraction(3, 4)
    assert QQ(Fraction(4, 2)) == 2
    assert F5("1/2") == 3
    assert F5(-1) == 4
    assert F5.inv(2) == 3


def test_rank_known():
    m = Mat(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    assert rank(Mat(F5, [[1, 2], [3, 1]])) == 1  # det = -5


def test_inverse_known():
    m = Mat(QQ, [[2, 1], [1, 1]])
    assert inverse(m) == Mat(QQ, [[1, -1], [-1, 2]])
    with pytest.raises(ZeroDivisionError):
        inverse(Mat(QQ, [[1, 2], [2, 4]]))


def test_unreduced_entries_rejected():
    m = Mat._raw(F5, [[7, 0], [0, 1]], 2)
    with pytest.raises(FieldMismatch):
        rank(m)


def test_echelon_tracking_expresses_combinations():
    ech = Echelon(QQ, track=True)
    ech.add({0: 1, 1: 1}, {"a": 1})
    ech.add({1: 1, 2: 1}, {"b": 1})
    coeffs = ech.express({0: 1, 1: 2, 2: 1})
    assert coeffs == {"a": 1, "b": 1}
    assert ech.express({2: 1}) is None


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(Mat(QQ, rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_kernel_of_full_dimension(rows):
    m = Mat(QQ, rows)
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - sympy.Matrix(rows).rank()
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_consistent(rows, xs):
    m = Mat(QQ, rows)
    x = xs[:m.ncols]
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_matches_sympy(rows):
    m = Mat(QQ, rows)
    S = sympy.Matrix(rows)
    assert is_invertible(m) == (S.det() != 0)
    if S.det() != 0:
        inv = inverse(m)
        want = S.inv()
        assert [[Fraction(int(sympy.fraction(want[i, j])[0]), int(sympy.fraction(want[i, j])[1]))
                 for j in range(S.cols)] for i in range(S.rows)] == [list(r) for r in inv.rows]


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rank_mod_p_matches_sympy(rows):
    m = Mat(F5, rows)
    dm = DomainMatrix.from_list_sympy(len(rows), len(rows[0]), rows).convert_to(GF(5))
    assert rank(m) == dm.rank()


def test_sparse_kernel_empty_rows():
    assert sparse_kernel(QQ, [], 2) == [{0: 1}, {1: 1}]
