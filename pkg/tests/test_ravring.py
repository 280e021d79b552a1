from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ravioli.ravring import (REGIMES, BiRavExpansion, KMonomial, RavSeries, TruncationError,
                             d_z, expand, expand_omega_zw, mul, residue)


# PAPER: the three expansion maps of Omega^m_{z-w} (or Omega^m_z around w)
def _paper_coeff(regime, m, n):
    if regime == "small-w":
        return ("OP", n + m, n), comb(m + n, n)
    if regime == "small-z":
        return ("PO", n, n + m), (-1) ** m * comb(m + n, n)
    return ("PO", n, n + m), (-1) ** n * comb(m + n, n)


@pytest.mark.parametrize("regime", REGIMES)
def test_binomial_tables(regime):
    for m in range(7):
        e = expand_omega_zw(m, regime, order=9)
        want = dict(_paper_coeff(regime, m, n) for n in range(9))
        assert {k: v for k, v in e.coeffs.items()} == {k: v for k, v in want.items()}


def test_variables_per_regime():
    assert expand_omega_zw(0, "small-w").variables == ("z", "w")
    assert expand_omega_zw(0, "small-(z-w)").variables == ("z-w", "w")


def _degree_two(regime, order=10):
    terms = [(("z-w", 0), ("z", 0)), (("w", 0), ("z-w", 0)), (("z", 0), ("w", 0))]
    total = None
    for t in terms:
        e = expand(KMonomial(omegas=t), regime, order)
        total = e if total is None else total + e
    return total


@pytest.mark.parametrize("regime", REGIMES)
def test_degree_two_relation(regime):
    assert _degree_two(regime).is_zero()


def test_degree_two_relation_needs_all_terms():
    # dropping one summand leaves a nonzero element in at least one regime
    e = expand(KMonomial(omegas=(("z", 0), ("w", 0))), "small-z", 10)
    assert not e.is_zero()


def test_truncation_boundary_raises():
    e = expand_omega_zw(1, "small-w", order=4)
    with pytest.raises(TruncationError):
        e.coeff(("OP", 9, 8))
    assert e.coeff(("OP", 2, 1)) == 2


def test_omega_killed_by_high_power():
    # TRIVIAL: z^n Omega^m = 0 for n > m
    assert KMonomial(a=3, omegas=(("z", 2),)).reduce() is None
    assert KMonomial(a=2, omegas=(("z", 2),)).reduce() == KMonomial(omegas=(("z", 0),))


def test_one_variable_ring():
    # TRIVIAL: z Omega^1 = Omega^0 and z^2 Omega^1 = 0
    assert mul(RavSeries.z(1), RavSeries.Omega(1)) == RavSeries.Omega(0)
    assert mul(RavSeries.z(2), RavSeries.Omega(1)) == RavSeries({}, {})
    assert d_z(RavSeries.Omega(0)) == RavSeries.Omega(1, -1)
    assert residue(RavSeries.Omega(0, 3) + RavSeries.z(2)) == 3


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4),
       st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4),
       st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4),
       st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4))
def test_leibniz_in_one_variable(t1, o1, t2, o2):
    a, b = RavSeries(t1, {}), RavSeries(t2, o2)
    assert d_z(mul(a, b)) == mul(d_z(a), b) + mul(a, d_z(b))
    # residues of total derivatives vanish
    assert residue(d_z(RavSeries(t1, o1))) == 0


def test_negative_pole_rejected():
    with pytest.raises(ValueError):
        expand_omega_zw(-1, "small-w")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), st.sampled_from(REGIMES), st.integers(2, 8))
def test_derivative_raises_index(m, regime, order):
    # d/dz of the expansion of Omega^m is -(m+1) times that of Omega^{m+1}
    lo = expand_omega_zw(m, regime, order + 1).d(0)
    hi = expand_omega_zw(m + 1, regime, order).scale(-(m + 1))
    cut = BiRavExpansion(lo.coeffs, lo.variables, hi.order)
    assert cut.agrees_with(hi)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3), st.sampled_from(REGIMES))
def test_expansion_is_multiplicative_on_polynomials(a, b, e, regime):
    # z^a w^b (z-w)^e expands to the product of its factors
    x = expand(KMonomial(a=a, b=b, e=e), regime, 12)
    y = (expand(KMonomial(a=a), regime, 12) * expand(KMonomial(b=b), regime, 12)
         * expand(KMonomial(e=e), regime, 12))
    assert x.agrees_with(y)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 3))
def test_z_minus_w_times_omega_lowers_index(m, k):
    # (z-w)^k Omega^m_{z-w} = Omega^{m-k}_{z-w}, or 0 when k > m
    for regime in ("small-w", "small-z"):
        lhs = expand(KMonomial(e=k, omegas=(("z-w", m),)), regime, 8)
        red = KMonomial(e=k, omegas=(("z-w", m),)).reduce()
        rhs = expand(red, regime, 8) if red is not None else None
        if rhs is None:
            assert lhs.is_zero()
        else:
            assert lhs.agrees_with(rhs)
