from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ravioli import algfile as af
from ravioli.freefield import enumerate_basis, fh, fvpert
from ravioli.modealg import check_jacobi
from ravioli.scstruct import fh_sc, fvpert_sc, sfc_sc, verify_sc


@pytest.mark.parametrize("name", af.SHIPPED_FILES)
def test_shipped_files_round_trip(name):
    d = af.load(af.data_path(name))
    again = af.parse_text(af.dump(d))
    assert again.to_data() == d.to_data()


@pytest.mark.parametrize("name,make", [("fh", fh_sc), ("fvpert", fvpert_sc), ("sfc", sfc_sc)])
def test_files_match_builtin_structures(name, make):
    d = af.load(af.data_path(name))
    sc = af.build_sc(d)
    ref = make()
    # compare through the printed form since the algebras are distinct objects
    for lab in ("Gamma", "sigma", "Q+", "Q-"):
        assert af.format_state(sc.fields()[lab]) == af.format_state(ref.fields()[lab])
    assert verify_sc(sc, truncation=2).ok


def test_mode_algebra_file_builds():
    d = af.load(af.data_path("svir_n2"))
    for entry in d.mode_algebras:
        assert check_jacobi(af.build_mode_algebra(entry), 2).ok


def test_expression_grammar():
    A = fh()
    Z1, Z2, p1 = A.gen("Z1"), A.gen("Z2"), A.gen("psi1")
    assert af.parse_expr(":Z1 Z2:", A) == A.mul(Z1, Z2)
    assert af.parse_expr("3/4 :psi1 d(Z1):", A) == A.mul(p1, A.d(Z1)).scale(Fraction(3, 4))
    assert af.parse_expr("d^2(Z1)", A) == A.d(A.d(Z1))
    assert af.parse_expr("2", A) == A.vacuum().scale(2)
    assert af.parse_expr("-(Z1 - Z2)", A) == Z2 - Z1
    # right-associated: :Z1 Z2 psi1: = :Z1 :Z2 psi1::
    assert af.parse_expr(":Z1 Z2 psi1:", A) == A.mul(Z1, A.mul(Z2, p1))


def test_format_examples():
    A = fvpert()
    s = A.mul(A.gen("b"), A.d(A.gen("c"))).scale(-1)
    assert af.format_state(s) == "-:b d(c):"
    assert af.format_state(A.zero()) == "0"


def _err(text):
    with pytest.raises(af.AlgFileError) as exc:
        af.parse_text(text)
    return exc.value


def test_error_positions():
    e = _err("name: x\ngenerators:\n  - {name: a, statistics: boson, R: 0, spin: 1}\n"
             "contractions:\n  - {pair: [a, q], poles: [[0, 1]]}\n")
    assert e.line == 5 and "q" in str(e)
    e = _err("name: x\nbogus: 1\n")
    assert e.line == 2 and "unknown section" in str(e)
    e = _err("name: x\nname: y\n")
    assert e.line == 2


def test_expression_error_column():
    text = (af.data_path("fh").read_text()
            .replace('sigma: "1/2 :psi1 Z1: + 1/2 :psi2 Z2:"', 'sigma: "1/2 :psi1 Z9: + 1/2 :psi2 Z2:"'))
    e = _err(text)
    line = text.splitlines()[e.line - 1]
    assert line[e.column - 1:].startswith("Z9")


def test_bad_rational():
    e = _err("name: x\ngenerators:\n  - {name: a, statistics: boson, R: one, spin: 1}\n")
    assert e.line == 3


def test_yaml_syntax_error():
    e = _err("name: [x\n")
    assert e.line is not None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.fractions(max_denominator=7).filter(bool)),
                min_size=0, max_size=4))
def test_format_parse_round_trip(picks):
    A = fh()
    pool = enumerate_basis(A, spin_max=Fraction(5, 2), R_max=2)
    s = A.zero()
    for i, c in picks:
        s = s + pool[i % len(pool)].scale(c)
    assert af.parse_expr(af.format_state(s), A) == s
