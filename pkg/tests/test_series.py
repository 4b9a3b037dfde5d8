"""Series kernel: hand oracles, Pochhammer laws, ring axioms."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mockrad.errors import (
    BeyondTruncation,
    DivergentProduct,
    FractionalExponentNegation,
    PoleInNegativeIndex,
    ZeroLeadingCoefficient,
)
from mockrad.series import FracPowerSeries, first_mismatch, mono, pochhammer

F = Fraction


def poly(*coeffs, trunc=None):
    return FracPowerSeries.from_int_coeffs(coeffs, trunc=trunc or max(len(coeffs), 10))


def same(a, b, through=None):
    return first_mismatch(a, b, through) is None


# ---------------------------------------------------------------- mul

def test_difference_of_squares():
    got = poly(1, -1) * poly(1, 1)
    assert same(got, poly(1, 0, -1))


def test_three_factor_hand_expansion():
    # oracle: (1-q)(1-q^2)(1-q^3) expanded by hand
    got = poly(1, -1) * poly(1, 0, -1) * poly(1, 0, 0, -1)
    want = poly(1, -1, -1, 0, 1, 1, -1, trunc=7)
    assert same(got, want)


def test_zero_annihilates():
    z = FracPowerSeries.zero(10)
    assert (z * poly(1, 2, 3)).is_zero()
    assert (poly(1, 2, 3) * z).is_zero()


def test_mul_respects_knowledge_of_negative_valuation():
    # q^-1 * (series known to q^10) is only known to q^9
    qinv = FracPowerSeries.from_monomial(mono(1, -1), trunc=20)
    s = poly(*([1] * 10), trunc=10)
    prod = qinv * s
    assert prod.known_order == 9
    assert prod.coefficient(-1) == 1


# ---------------------------------------------------------------- invert

def test_invert_geometric():
    inv = poly(1, -1, trunc=12).invert()
    assert all(inv.coefficient(n) == 1 for n in range(10))


def test_invert_monomial_pullout():
    # q(1-q) inverts to q^-1 (1 + q + q^2 + ...)
    s = FracPowerSeries(1, 0, 12, {1: F(1), 2: F(-1)})
    inv = s.invert()
    assert inv.coefficient(-1) == 1
    assert inv.coefficient(0) == 1
    assert inv.coefficient(5) == 1


def test_invert_multiply_back_qq5():
    a = pochhammer(mono(1, 1), mono(1, 1), 5, 40)
    prod = a * a.invert()
    assert same(prod, FracPowerSeries.one(20))


def test_invert_zero_window_raises():
    with pytest.raises(ZeroLeadingCoefficient):
        FracPowerSeries.zero(5).invert()


# ---------------------------------------------------------------- substitute

def test_substitute_positive_power():
    assert same(poly(1, 1).substitute_power(1, 2), poly(1, 0, 1))


def test_substitute_negation():
    got = poly(1, 1, 1).substitute_power(-1, 1)
    assert same(got, poly(1, -1, 1))


def test_substitute_negation_rejects_fractional():
    s = FracPowerSeries(2, 1, 10, {1: F(1)})  # q^(1/2)
    with pytest.raises(FractionalExponentNegation):
        s.substitute_power(-1, 1)


def test_substitute_composes():
    s = poly(1, 2, 3, 4)
    assert same(s.substitute_power(1, 2).substitute_power(1, 3),
                s.substitute_power(1, 6))


# ---------------------------------------------------------------- coefficient

def test_coefficient_basics():
    s = poly(1, -1)
    assert s.coefficient(1) == -1
    assert s.coefficient(0) == 1
    assert s.coefficient(F(1, 2)) == 0  # off-lattice exponent
    with pytest.raises(BeyondTruncation):
        s.coefficient(10)


def test_coefficient_fractional_lattice():
    s = FracPowerSeries(24, 1, 100, {1: F(1)})  # q^(1/24)
    assert s.coefficient(F(1, 24)) == 1
    assert s.coefficient(F(2, 24)) == 0


# ---------------------------------------------------------------- pochhammer

def pentagonal_oracle(trunc):
    """Euler pentagonal number series, coded independently of pochhammer."""
    coeffs = {0: F(1)}
    k = 1
    while True:
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 >= trunc and p2 >= trunc:
            break
        s = F(-1) if k % 2 else F(1)
        if p1 < trunc:
            coeffs[p1] = s
        if p2 < trunc:
            coeffs[p2] = s
        k += 1
    return FracPowerSeries(1, 0, trunc, coeffs)


def test_pochhammer_empty_product():
    assert same(pochhammer(mono(-1, 1), mono(1, 1), 0, 10), FracPowerSeries.one(10))


def test_pochhammer_negative_one_is_half():
    # oracle: (a;q)_{-1} = 1/(1 - a q^{-1}), a = -q gives 1/2
    got = pochhammer(mono(-1, 1), mono(1, 1), -1, 10)
    assert got.coefficient(0) == F(1, 2)
    assert all(c == 0 for e, c in got.items() if e != 0)


def test_pochhammer_infinite_is_pentagonal():
    got = pochhammer(mono(1, 1), mono(1, 1), None, 30)
    assert same(got, pentagonal_oracle(30))
    assert got.coefficient(5) == 1


def test_pochhammer_divergent_step():
    with pytest.raises(DivergentProduct):
        pochhammer(mono(1, 1), mono(1, 0), None, 10)


def test_pochhammer_pole_in_negative_index():
    # (q;q)_{-m} reflects through (1;q)_m = 0
    with pytest.raises(PoleInNegativeIndex):
        pochhammer(mono(1, 1), mono(1, 1), -3, 10)


@pytest.mark.parametrize("a", [mono(-1, 1), mono(1, 1), mono(-1, 2), mono(1, 2)])
def test_pochhammer_splitting_law(a):
    q = mono(1, 1)
    T = 60
    for m in range(0, 11, 2):
        for n in range(0, 11, 3):
            lhs = pochhammer(a, q, m + n, T)
            rhs = pochhammer(a, q, m, T) * pochhammer(a * q ** m, q, n, T)
            assert same(lhs, rhs), (m, n)


@pytest.mark.parametrize("a", [mono(-1, 1), mono(-1, 2), mono(1, 9)])
def test_pochhammer_negative_index_consistency(a):
    # (a;q)_{-n} * (a q^{-n}; q)_n = 1   (a chosen pole-free for n <= 8)
    q = mono(1, 1)
    for n in range(1, 9):
        lhs = pochhammer(a, q, -n, 30) * pochhammer(a * q ** (-n), q, n, 30)
        assert same(lhs, FracPowerSeries.one(20)), n


def test_pochhammer_q_q2_negative_matches_reflection_oracle():
    # oracle: (q;q^2)_{-m} = (-1)^m q^{m^2} / (q;q^2)_m, derived by direct ratio
    q2 = mono(1, 2)
    for m in range(1, 6):
        got = pochhammer(mono(1, 1), q2, -m, 25)
        oracle = pochhammer(mono(1, 1), q2, m, 25 + m * m).invert() \
            .times_monomial(mono((-1) ** m, m * m))
        assert same(got, oracle, through=20), m


# ---------------------------------------------------------------- ring axioms

DENOMS = [1, 2, 3, 8, 24, 60, 120]


@st.composite
def small_series(draw):
    denom = draw(st.sampled_from(DENOMS))
    n_terms = draw(st.integers(0, 12))
    keys = draw(st.lists(st.integers(-30, 60), min_size=n_terms, max_size=n_terms,
                         unique=True))
    vals = draw(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=4),
                         min_size=n_terms, max_size=n_terms))
    coeffs = {k: v for k, v in zip(keys, vals) if v}
    hi = max(coeffs, default=0) + draw(st.integers(1, 20))
    lo = min(min(coeffs, default=0), 0)
    return FracPowerSeries(denom, lo, hi, coeffs)


@settings(max_examples=60, deadline=None)
@given(small_series(), small_series())
def test_mul_commutative(a, b):
    assert same(a * b, b * a)


@settings(max_examples=40, deadline=None)
@given(small_series(), small_series(), small_series())
def test_mul_associative(a, b, c):
    assert same((a * b) * c, a * (b * c))


@settings(max_examples=40, deadline=None)
@given(small_series(), small_series(), small_series())
def test_mul_distributes_over_add(a, b, c):
    assert same(a * (b + c), a * b + a * c)


@settings(max_examples=40, deadline=None)
@given(small_series(), small_series())
def test_add_commutative_with_zero_identity(a, b):
    assert same(a + b, b + a)
    assert same(a + FracPowerSeries.zero(200, a.denom), a)
