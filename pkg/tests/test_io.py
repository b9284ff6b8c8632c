import json

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from siltingkit.complexes import random_complex, regular, shift, stalk
from siltingkit.io import (ParseError, builtin, complex_from_json, complex_to_json, load_algebra_file,
                           parse_algebra_text)
from siltingkit.verify import dihedral_setup

GOOD = """\
field Q
vertices 3
arrow x 1 2
arrow y 1 2
arrow x 2 3
arrow y 2 3
relation 1: x*x
relation 1: y*y
relation 1: 1/2 x*y - 1/2 y*x
automorphism eps: x=y y=x
module M: 1 / x, y*x
option length_cap 6
option seed 3
"""


@pytest.mark.parametrize("name", ["A2", "A4", "T4", "kronecker"])
def test_builtin_text_round_trip(name):
    text = builtin(name).to_text()
    assert parse_algebra_text(text).to_text() == text


def test_custom_round_trip_and_build():
    af = parse_algebra_text(GOOD)
    assert af.to_text() == parse_algebra_text(af.to_text()).to_text()
    A = af.build()
    assert A.dim == 3 + 4 + 1  # xy and yx identified
    M = af.module("M", A)
    assert M.dims == (1, 1, 0)  # x generates x and xy = yx
    assert af.options == {"length_cap": 6, "seed": 3}
    assert [s.name for s in af.all_automorphisms(A)] == ["eps"]


def test_field_override():
    A = builtin("A3").build("Fp:5")
    assert repr(A.field) == "Fp:5" and A.dim == 9


def test_builtin_algebras_and_modules():
    A = builtin("A4").build()
    assert A.dim == 16
    assert builtin("T4").build().dim == 32
    S = dihedral_setup(4)
    E = builtin("A4").module("E", A)
    assert E.dims == S.E.dims
    with pytest.raises(ParseError):
        builtin("T3")
    with pytest.raises(ParseError):
        builtin("B2")


def test_load_from_file(tmp_path):
    p = tmp_path / "alg.txt"
    p.write_text(GOOD)
    assert load_algebra_file(str(p)).vertices == 3
    assert load_algebra_file("builtin:kronecker").build().dim == 4


@pytest.mark.parametrize("text, line, col, fragment", [
    ("vertices 2\narrow a 1 3\n", 2, 11, "out of range"),
    ("vertices 2\nfrobnicate 1\n", 2, 1, "unknown directive"),
    ("vertices 2\narrow a 1 2\nrelation 1: a b\n", 3, 15, "missing + or -"),
    ("vertices 2\narrow a 1 2\nrelation 1: a*q\n", 3, 13, "path 'a*q'"),
    ("vertices 2\noption colour 3\n", 2, 8, "unknown option"),
    ("field R\nvertices 2\n", 1, 7, "unknown field"),
    ("vertices x\n", 1, 10, "integer"),
    ("arrow a 1 2\n", 1, 1, "before vertices"),
])
def test_parse_errors_have_locations(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_algebra_text(text)
    e = info.value
    assert (e.line, e.column) == (line, col)
    assert fragment in str(e)


def test_missing_vertices():
    with pytest.raises(ParseError):
        parse_algebra_text("field Q\n")


def test_complex_json_known(a4):
    text = complex_to_json(a4.PE)
    data = json.loads(text)
    assert data["format"] == "siltingkit-complex" and data["version"] == 1
    Y = complex_from_json(text, a4.A)
    assert Y == a4.PE
    assert complex_to_json(Y) == text


def test_complex_json_rejects_wrong_algebra(a4):
    text = complex_to_json(a4.PE)
    with pytest.raises(ValueError):
        complex_from_json(text, dihedral_setup(3).A)


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10_000), st.integers(-3, 3))
def test_complex_json_round_trip(seed, s):
    A = dihedral_setup(4).A
    X = shift(random_complex(A, seed), s)
    text = complex_to_json(X)
    Y = complex_from_json(text, A)
    assert Y == X
    assert complex_to_json(Y) == text


def test_complex_json_round_trip_fp():
    A = builtin("A4").build("Fp:7")
    X = random_complex(A, 11)
    assert complex_from_json(complex_to_json(X), A) == X
    assert complex_to_json(regular(A)) != complex_to_json(stalk(A, 1))
