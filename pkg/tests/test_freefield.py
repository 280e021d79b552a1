from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ravioli.freefield import (ContractionTable, FreeFieldAlgebra, GeneratorDecl, embed,
                               enumerate_basis, fh, fvpert, mode_pairing, normal_product,
                               normal_product_modes, sfc, tensor, verify_axioms)


@pytest.mark.parametrize("make", [fh, fvpert, sfc])
def test_axioms(make):
    r = verify_axioms(make())
    assert r.ok, r.witness
    assert all(r.counts[k] > 0 for k in r.checks)


def test_basic_contraction():
    A = fh()
    Z1, psi1 = A.gen("Z1"), A.gen("psi1")
    assert A.ope(Z1, psi1).singular_dict() == {0: A.vacuum()}
    assert A.ope(psi1, Z1).singular_dict() == {0: A.vacuum()}
    assert A.ope(Z1, A.gen("Z2")).singular_dict() == {}


def test_wick_single_contraction():
    # :Z1 Z2:(z) psi1(w) ~ Omega^0 Z2
    A = fh()
    O = A.mul(A.gen("Z1"), A.gen("Z2"))
    assert A.ope(O, A.gen("psi1")).singular_dict() == {0: A.gen("Z2")}


def test_derivative_pole():
    # <b c> = Omega^0 gives d(b)(z) c(w) ~ -Omega^1
    A = fvpert()
    assert A.ope(A.d(A.gen("b")), A.gen("c")).singular_dict() == {1: A.vacuum().scale(-1)}


def test_creation_variables_are_divided_powers():
    A = sfc()
    X = A.gen("X")
    assert A.d(A.d(X)) == A.gen("X", 2).scale(2)
    assert A.dpow(X, 3) == A.gen("X", 3)


def test_gradings():
    A = fh()
    s = A.mul(A.gen("Z1"), A.d(A.gen("psi2")))
    assert s.grading() == (1, 2, 0)
    assert s.parity == 1


def test_mode_pairing_rule():
    A = fh()
    rule = mode_pairing(A)
    # [Z1_(r), psi1_(-n-1)] = C(r, n) c_{r-n}
    assert rule("Z1", 0, "psi1", -1) == 1
    assert rule("Z1", 1, "psi1", -1) == 0
    assert rule("Z1", 0, "psi1", -2) == 0
    assert rule("Z1", 0, "Z2", -1) == 0


def _states(A, spin):
    return enumerate_basis(A, spin_max=spin, R_max=2)


@pytest.mark.parametrize("make", [fh, sfc, fvpert])
def test_closed_form_matches_recursion(make):
    A = make()
    pool = [v for v in _states(A, Fraction(3, 2)) if v.terms != {(): 1}]
    gens = [A.gen(g.name) for g in A.gens]
    targets = _states(A, 1)
    for a in gens:
        for b in pool[:12]:
            ab = normal_product(a, b)
            for q in range(-2, 4):
                for v in targets[:10]:
                    assert A.mode(ab, q, v) == normal_product_modes(a, b, q, v)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_modes_are_derivations(data):
    # positive generator modes act as graded derivations of the polynomial product
    A = fh()
    pool = _states(A, 1)
    x = data.draw(st.sampled_from(pool))
    y = data.draw(st.sampled_from(pool))
    g = data.draw(st.sampled_from(["Z1", "Z2", "psi1", "psi2"]))
    r = data.draw(st.integers(0, 2))
    G = A.gen(g)
    p = (G.parity + 1) % 2
    lhs = A.mode(G, r, A.mul(x, y))
    rhs = A.mul(A.mode(G, r, x), y) + A.mul(x, A.mode(G, r, y)).scale((-1) ** (p * x.parity))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_translation_commutator(data):
    # [d, O_(q)] = -q O_(q-1)
    A = sfc()
    pool = _states(A, Fraction(3, 2))
    O = data.draw(st.sampled_from(pool))
    v = data.draw(st.sampled_from(pool))
    q = data.draw(st.integers(-3, 3))
    assert A.d(A.mode(O, q, v)) - A.mode(O, q, A.d(v)) == A.mode(O, q - 1, v).scale(-q)


def test_perturbed_contraction_is_caught():
    g = fh().gens
    bad = FreeFieldAlgebra(g, {("Z1", "psi1"): {0: 1}, ("psi1", "Z1"): {0: 2},
                               ("Z2", "psi2"): {0: 1}}, "FH-mutant", fill_reverse=False)
    assert ("psi1", "Z1", 0) in bad.table.inconsistencies()
    r = verify_axioms(bad)
    assert not r.ok
    assert not r.checks["skew"]
    assert "psi1" in r.witness and "Z1" in r.witness


def test_reverse_fill_is_consistent():
    t = ContractionTable({"a": 0, "b": 1}, {("a", "b"): {0: 1, 1: 3}})
    assert t.get("b", "a") == {0: 1, 1: -3}
    assert t.inconsistencies() == []


def test_bad_declarations():
    with pytest.raises(ValueError):
        GeneratorDecl("x", "anyon", 0, 1)
    with pytest.raises(ValueError):
        ContractionTable({"a": 0}, {("a", "zz"): {0: 1}})
    with pytest.raises(ValueError):
        ContractionTable({"a": 0}, {("a", "a"): {-1: 1}})


def test_infinite_window_rejected():
    with pytest.raises(ValueError):
        A = FreeFieldAlgebra([GeneratorDecl("u", "boson", 0, 0), GeneratorDecl("v", "fermion", 0, 1)],
                             {("u", "v"): {0: 1}})
        enumerate_basis(A, spin_max=1)


def test_tensor_and_embed():
    T = tensor(fh(), fvpert("0"))
    s = embed(fvpert("0").gen("c0"), T, 4)
    assert s == T.gen("c0")
    assert verify_axioms(T, truncation=2).ok
    assert T.ope(T.gen("b0"), T.gen("c0")).singular_dict() == {0: T.vacuum()}
