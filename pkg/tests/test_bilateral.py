"""Bilateral series: combinations, two-sided sums, modular products, Watson."""

from fractions import Fraction

import pytest

from mockrad.bilateral import (
    PRODUCTS,
    PTerm,
    Atom,
    bilateral_combination,
    bilateral_direct,
    fine_relations,
    modular_product,
    one_psi_one_instance,
    verify_identity,
    watson_c,
)
from mockrad.catalog import expand_mock
from mockrad.errors import (
    InsufficientTruncation,
    NonconvergentBilateral,
    ResidualFractionalExponent,
    UnknownFunction,
)
from mockrad.series import FracPowerSeries, first_mismatch, mono

F = Fraction
T = 100


def V(lhs, rhs, order=None):
    return verify_identity(lhs, rhs, order if order is not None else T - 5).status == "Verified"


# ---------------------------------------------------------------- order 5

def test_bf0_combination_head_and_double_psi0():
    bf0 = bilateral_combination("5:f0", T)
    assert bf0.coefficient(0) == 1
    assert V(bf0, bilateral_combination("5:psi0", T).scaled(2))


def test_bF0_constant_term():
    bF0 = bilateral_combination("5:F0", T)
    assert bF0.coefficient(0) == 1        # 1 + 1 - 1


def test_bF1_constant_term():
    assert bilateral_combination("5:F1", T).coefficient(0) == 2


@pytest.mark.parametrize("name", ["5:f0", "5:f1", "5:psi0", "5:psi1",
                                  "5:F0", "5:F1", "5:phi0", "5:phi1"])
def test_fifth_order_three_ways(name):
    comb = bilateral_combination(name, T)
    assert V(comb, modular_product(name, T))
    assert V(comb, bilateral_direct(name, T))


def test_bF0_equals_bphi0_at_minus_q():
    lhs = bilateral_combination("5:F0", T)
    rhs = bilateral_combination("5:phi0", T).substitute_power(-1, 1).truncate(T)
    assert V(lhs, rhs)


def test_bF1_equals_minus_qinv_bphi1_at_minus_q():
    lhs = bilateral_combination("5:F1", T)
    rhs = bilateral_combination("5:phi1", T + 2).substitute_power(-1, 1) \
        .times_monomial(mono(-1, -1)).truncate(T)
    assert V(lhs, rhs)


def test_modified_bilateral_equals_bF():
    assert V(bilateral_combination("5:chi0", T), bilateral_combination("5:F0", T))
    assert V(bilateral_combination("5:chi1", T), bilateral_combination("5:F1", T))


def test_chi0_candidate_identities():
    # chi0 + Bmod(chi0) = 3 F0(q) - 1 holds; the 3 F0(-q) + 2 variant does not
    lhs = expand_mock("5:chi0", T) + bilateral_combination("5:chi0", T)
    good = expand_mock("5:F0", T).scaled(3) - 1
    bad = expand_mock("5:F0", T).substitute_power(-1, 1).scaled(3) + 2
    assert first_mismatch(lhs, good, T - 5) is None
    assert first_mismatch(lhs, bad.truncate(T), T - 5) is not None


def test_chi1_candidate_identity():
    lhs = expand_mock("5:chi1", T) + bilateral_combination("5:chi1", T)
    assert first_mismatch(lhs, expand_mock("5:F1", T).scaled(3), T - 5) is None


def test_direct_rejects_chi_and_v_rows():
    for name in ("5:chi0", "5:chi1", "8:V0", "8:V1"):
        with pytest.raises(NonconvergentBilateral):
            bilateral_direct(name, 40)


def test_unknown_recipe():
    with pytest.raises(UnknownFunction):
        bilateral_combination("9:zz", 40)
    with pytest.raises(UnknownFunction):
        modular_product("3:f", 40)    # no bilateral product recorded for f


# ---------------------------------------------------------------- Watson

@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_watson_identities_vanish(i):
    assert watson_c(i, T).is_zero()


def test_watson_products_constant_terms():
    assert modular_product("5:f0", 40).coefficient(0) == 1
    assert modular_product("5:f1", 40).coefficient(0) == 3
    assert modular_product("5:F1", 40).coefficient(0) == 2


# ---------------------------------------------------------------- order 3

def test_order3_three_ways():
    for name in ("3:phi", "3:psi", "3:nu"):
        comb = bilateral_combination(name, T)
        assert V(comb, modular_product(name, T)), name
        assert V(comb, bilateral_direct(name, T)), name


def test_bnu_is_even():
    bnu = bilateral_combination("3:nu", T)
    assert all(e % 2 == 0 for e, _ in bnu.items())
    assert bnu.coefficient(0) == 2


def test_bnu_product_constant():
    assert modular_product("3:nu", 40).coefficient(0) == 2


def test_one_psi_one_instances():
    assert V(one_psi_one_instance("phi", T), bilateral_combination("3:phi", T))
    assert V(one_psi_one_instance("nu", T), bilateral_combination("3:nu", T))


def test_fine_relations():
    for label, lhs, rhs in fine_relations(T):
        assert V(lhs, rhs), label


# ---------------------------------------------------------------- tables

@pytest.mark.parametrize("name", ["6:lambda", "6:mu", "6:phi", "6:psi",
                                  "6:rho", "6:sigma", "6:nu", "6:xi",
                                  "8:S0", "8:S1", "8:T0", "8:T1"])
def test_table_rows_combination_equals_direct(name):
    assert V(bilateral_combination(name, T), bilateral_direct(name, T))


def test_lambda_modular_product():
    assert V(bilateral_combination("6:lambda", T), modular_product("6:lambda", T))


def test_v_rows_parity():
    v0 = bilateral_combination("8:V0", T)
    assert all(e % 2 == 0 for e, _ in v0.items())
    v1 = bilateral_combination("8:V1", T)
    assert all(e % 2 == 1 for e, _ in v1.items())


# ---------------------------------------------------------------- reports

def test_verify_identity_reports_mismatch_location():
    a = expand_mock("5:f0", 50)
    b = a + FracPowerSeries.from_monomial(mono(1, 7), 50)
    report = verify_identity(a, b, 40)
    assert report.status == "Mismatch"
    e, ca, cb = report.first_mismatch
    assert e == 7 and cb - ca == 1
    doc = report.to_json_dict()
    assert doc["first_mismatch"]["exponent"] == "7"


def test_verify_identity_insufficient_truncation():
    a = expand_mock("5:f0", 50)
    with pytest.raises(InsufficientTruncation):
        verify_identity(a, a, 100)


def test_modular_product_flags_residual_fraction():
    PRODUCTS["test:broken"] = (PTerm(F(1), F(1, 24), ((Atom("eps", 1), 1),)),)
    try:
        with pytest.raises(ResidualFractionalExponent):
            modular_product("test:broken", 30)
    finally:
        del PRODUCTS["test:broken"]
