from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ravioli import algebras as A
from ravioli.modealg import (Mode, ModeCombo, OpeSpec, Piece, PiecewiseSpec, SpecError, Term,
                             bracket, check_intertwining, check_jacobi, induce_vacuum_module,
                             n1_to_n2_morphism)


@pytest.mark.parametrize("name", ["svir-n1", "svir-n2", "svir-n2-fields", "svir-n1-fields",
                                  "sl2-current", "svir-n4"])
def test_jacobi_shipped(name):
    r = check_jacobi(A.build(name), 3)
    assert r.ok, r.failure
    assert r.triples_checked > 0


def test_jacobi_evir_cutoff_two():
    r = check_jacobi(A.evir(), 2)
    assert r.ok, r.failure


def test_n3_as_shipped_fails_with_witness():
    r = check_jacobi(A.svir_n3(), 1)
    assert not r.ok
    assert "sigma" in r.failure and "Q" in r.failure


def test_big_n4_literal_transcription_fails():
    assert not check_jacobi(A.svir_n4(0, displayed=True), 1).ok


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 3), Fraction(-2)])
def test_big_n4_family(p):
    assert check_jacobi(A.svir_n4(p), 1).ok


def test_n1_into_n2():
    ok, wit = check_intertwining(A.svir_n1(), A.svir_n2(), n1_to_n2_morphism, 4)
    assert ok, wit


def test_n1_into_n2_sign_matters():
    def bad(mode):
        mode = Mode(*mode)
        if mode.family == "theta":
            return ModeCombo({Mode("theta+", mode.index): 1, Mode("theta-", mode.index): -1})
        return n1_to_n2_morphism(mode)
    ok, wit = check_intertwining(A.svir_n1(), A.svir_n2(), bad, 2)
    assert not ok and wit is not None


_ANN = {"G": "Gamma", "S": "sigma", "theta+": "Q+", "theta-": "Q-"}


def _hand_to_fields(mode):
    # annihilation families sit at field modes m >= 0, creation ones at -n-1
    mode = Mode(*mode)
    if mode.family in _ANN:
        return ModeCombo({Mode(_ANN[mode.family], mode.index): 1})
    return ModeCombo({Mode(mode.family, -mode.index - 1): 1})


def test_hand_table_matches_compiled_fields():
    ok, wit = check_intertwining(A.svir_n2(), A.svir_n2_fields(), _hand_to_fields, 4)
    assert ok, wit


def test_virasoro_brackets():
    # PAPER: [G_m, G_n] = (m-n) G_{m+n-1}
    vir = A.virasoro()
    assert bracket(vir, Mode("G", 3), Mode("G", 1)) == ModeCombo({Mode("G", 3): 2})
    assert bracket(vir, Mode("G", 1), Mode("G", 1)) == ModeCombo({})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_graded_antisymmetry(m, n):
    spec = A.svir_n2()
    fams = [g.name for g in spec.generators]
    for a in fams:
        for b in fams:
            x, y = Mode(a, m), Mode(b, n)
            s = (-1) ** (spec.parity(x) * spec.parity(y))
            assert bracket(spec, x, y) == bracket(spec, y, x).scale(-s)


def _flip(spec: PiecewiseSpec, pair, k=0):
    rules = dict(spec.rules)
    pcs = list(rules[pair])
    pc = pcs[k]
    t0 = pc.terms[0]
    pcs[k] = Piece(pc.guard, (Term(f"-({t0.coeff})", t0.family, t0.index),) + pc.terms[1:])
    rules[pair] = pcs
    return PiecewiseSpec(spec.generators, rules, name=spec.name + "-mutant")


def test_mutation_flipped_theta_theta():
    r = check_jacobi(_flip(A.svir_n1(), ("theta", "theta")), 2)
    assert not r.ok
    assert r.witness is not None


def test_mutation_flipped_virasoro_gg():
    # negating GG alone leaves the GGG Jacobiator invariant; the witness mixes in Gamma
    r = check_jacobi(_flip(A.virasoro(), ("G", "G")), 2)
    assert not r.ok
    assert "G" in r.failure


def test_mutation_sl2_structure_constant():
    spec = A.sl2_current()
    opes = {}
    flipped = False
    for key, terms in spec.declared.items():
        new = []
        for t in terms:
            if not flipped and t.out is not None and t.coeff:
                k0 = sorted(t.coeff)[0]
                c = dict(t.coeff)
                c[k0] = -c[k0]
                t = replace(t, coeff=c)
                flipped = True
            new.append(t)
        opes[key] = new
    mut = OpeSpec(spec.generators, opes, name="sl2-mutant", parameters=spec.parameters,
                  central_symbol=spec.central_symbol)
    r = check_jacobi(mut, 1)
    assert not r.ok and r.failure


def test_incomplete_table_rejected():
    vir = A.virasoro()
    rules = {k: v for k, v in vir.rules.items() if k != ("G", "Gamma")}
    spec = PiecewiseSpec(vir.generators, rules)
    with pytest.raises(SpecError):
        spec.bracket(Mode("G", 0), Mode("Gamma", 0))


def test_vacuum_module_virasoro():
    V = induce_vacuum_module(A.virasoro(), ["G"], 4)
    basis = V.basis()
    # TRIVIAL: vacuum first; Gamma_n has spin n + 2
    assert basis[0] == ()
    spins = [sum((V.spin(x) for x in mono), Fraction(0)) for mono in basis]
    assert spins == sorted(spins)
    assert all(s <= 4 for s in spins)
    # annihilators kill the vacuum
    assert V.act(Mode("G", 0), {(): 1}) == {}
    one = V.act(Mode("Gamma", 0), {(): 1})
    assert one == {(Mode("Gamma", 0),): 1}


def test_vacuum_module_respects_brackets():
    spec = A.svir_n1()
    V = induce_vacuum_module(spec, ["G", "theta"], 3)
    v = {(): Fraction(1)}
    w = V.act(Mode("Q", 0), V.act(Mode("Gamma", 0), v))
    x, y = Mode("G", 2), Mode("Q", 0)
    lhs = V.act(x, V.act(y, w))
    s = (-1) ** (spec.parity(x) * spec.parity(y))
    rhs = {k: val * -s for k, val in V.act(y, V.act(x, w)).items()}
    br = spec.bracket(x, y)
    for m, c in br.modes.items():
        for k, val in V.act(m, w).items():
            rhs[k] = rhs.get(k, 0) + c * val
    rhs = {k: val for k, val in rhs.items() if val}
    lhs = {k: val for k, val in lhs.items() if val}
    assert lhs == rhs


def test_vacuum_module_rejects_open_positive_part():
    with pytest.raises(SpecError):
        # [theta, theta] = 2 G leaves the span of theta
        induce_vacuum_module(A.svir_n1(), ["theta"], 2)
