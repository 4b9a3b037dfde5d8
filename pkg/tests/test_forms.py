"""Classical forms: eta, theta_4, K, Rogers-Ramanujan, b(q)."""

from fractions import Fraction

import pytest

from mockrad.forms import b_series, eta_series, euler_product, k_series, rr_series, theta4_series
from mockrad.series import FracPowerSeries, first_mismatch, mono

F = Fraction


def test_eta_leading_term():
    eta = eta_series(1, 5)
    assert eta.coefficient(F(1, 24)) == 1
    assert eta.valuation() == F(1, 24)


def test_eta_second_coefficient():
    # (q;q)_inf = 1 - q - q^2 + ..., so eta has -1 at q^(1/24 + 1)
    eta = eta_series(1, 5)
    assert eta.coefficient(F(25, 24)) == -1


def test_eta_scaling_consistency():
    lhs = eta_series(2, 10)
    rhs = eta_series(1, 5).substitute_power(1, 2)
    assert first_mismatch(lhs, rhs, 9) is None


def test_theta4_head_and_selfcheck():
    th = theta4_series(120)   # raises EtaQuotientMismatch on failure
    head = [th.coefficient(n) for n in range(10)]
    assert head == [1, -2, 0, 0, 2, 0, 0, 0, 0, -2]


def test_k_head_and_selfcheck():
    k = k_series(120)
    assert [k.coefficient(n) for n in (0, 1, 2, 3, 6, 10)] == [1, 1, 0, 1, 1, 1]


def test_theta4_negated_resums_with_plus_signs():
    # q -> -q kills the alternating signs: 1 + 2q + 2q^4 + 2q^9 + ...
    th = theta4_series(40, self_check=False).substitute_power(-1, 1)
    squares = {n * n for n in range(1, 7)}
    for e in range(38):
        assert th.coefficient(e) == (1 if e == 0 else 2 if e in squares else 0)


def test_k_eta_quotient_on_fractional_lattice():
    # K(q) * q^(1/8) * eta(tau) = eta(2 tau)^2, exact on the (1/24)-lattice
    T = 80
    lhs = k_series(T, self_check=False).times_monomial(mono(1, 1, 8)) * eta_series(1, T)
    rhs = eta_series(2, T) ** 2
    assert first_mismatch(lhs, rhs, 70) is None


def test_rr_g_head():
    g = rr_series("G", "sum", 40)
    assert [g.coefficient(n) for n in range(5)] == [1, 1, 1, 1, 2]


def test_rr_h_head():
    h = rr_series("H", "sum", 40)
    assert [h.coefficient(n) for n in (0, 1, 2)] == [1, 0, 1]


@pytest.mark.parametrize("which", ["G", "H"])
def test_rr_sum_equals_product(which):
    lhs = rr_series(which, "sum", 150)
    rhs = rr_series(which, "product", 150)
    assert first_mismatch(lhs, rhs, 140) is None


def test_b_series_head():
    b = b_series(60)
    assert b.coefficient(0) == 1
    assert b.coefficient(1) == -3


def test_b_series_inverse_roundtrip():
    b = b_series(40)
    assert first_mismatch(b * b.invert(), FracPowerSeries.one(30), 25) is None


def test_euler_product_is_pentagonal():
    e = euler_product(1, 60)
    assert e.coefficient(5) == 1
    assert e.coefficient(7) == 1
    assert e.coefficient(1) == -1
    assert e.coefficient(3) == 0
