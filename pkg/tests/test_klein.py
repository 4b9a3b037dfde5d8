"""Numeric Klein forms and the Rogers-Ramanujan Klein-quotient identities."""

import mpmath as mp
import pytest

from mockrad.errors import NotInUpperHalfPlane
from mockrad.klein import (
    KleinValue,
    eta_point,
    klein_lemma_residual,
    klein_point,
    product_pair_residual,
    rr_point,
)

TWO_POW_M32 = mp.mpf(2) ** -32


def test_klein_point_finite_nonzero():
    kv = klein_point(1, 5, 5, mp.mpc(0, 2), 128)
    assert isinstance(kv, KleinValue)
    assert 0 < abs(kv.value) < mp.inf
    assert kv.error_bound > 0 and not kv.rigorous


def test_klein_point_preconditions():
    with pytest.raises(NotInUpperHalfPlane):
        klein_point(1, 5, 5, mp.mpc(0, -1), 128)
    with pytest.raises(ValueError):
        klein_point(0, 0, 5, mp.mpc(0, 2), 128)
    with pytest.raises(ValueError):
        klein_point(5, 10, 5, mp.mpc(0, 2), 128)   # (r,s) = (0,0) mod (N,N)
    with pytest.raises(ValueError):
        klein_point(1, 5, 5, mp.mpc(0, 2), 32)


def test_precision_doubling_within_error_bound():
    tau = 10j                      # 5 * (2i), the Lemma usage
    kv64 = klein_point(1, 5, 5, tau, 64)
    kv128 = klein_point(1, 5, 5, tau, 128)
    kv256 = klein_point(1, 5, 5, tau, 256)
    assert abs(kv64.value - kv128.value) < kv64.error_bound
    assert abs(kv128.value - kv256.value) < kv128.error_bound
    assert kv128.error_bound < kv64.error_bound


def test_klein_periodicity_tau_plus_five():
    # t_(1,5) at 5*tau is invariant under tau -> tau + 5
    a = klein_point(1, 5, 5, 5 * mp.mpc(0, 2), 128)
    b = klein_point(1, 5, 5, 5 * (mp.mpc(0, 2) + 5), 128)
    assert abs(a.value - b.value) < a.error_bound + b.error_bound + mp.mpf(2) ** -100


@pytest.mark.parametrize("which", ["G", "H"])
@pytest.mark.parametrize("tau", [mp.mpc(0, 2), mp.mpf(1) / 3 + 2j])
def test_lemma_residuals(which, tau):
    res = klein_lemma_residual(which, tau, 128)
    assert res < TWO_POW_M32


def test_lemma_residual_shrinks_with_precision():
    tau = mp.mpc(0, 2)
    r64 = klein_lemma_residual("G", tau, 64)
    r128 = klein_lemma_residual("G", tau, 128)
    r256 = klein_lemma_residual("G", tau, 256)
    assert r128 < r64 and r256 < r128


def test_product_pair_rewrite():
    # -zeta_5^-3 (2 pi i) q^(-1/60) t_(1,5)(5 tau) eta^2(5 tau) = (q;q^5)(q^4;q^5)
    for tau in (mp.mpc(0, 2), mp.mpf(1) / 7 + mp.mpf(3) / 2 * 1j):
        assert product_pair_residual(tau, 128) < TWO_POW_M32


def test_eta_point_matches_series():
    # eta(2i) is famously Gamma(1/4) / (2 pi^(3/4)); compare against mpmath
    tau = mp.mpc(0, 1)
    with mp.workprec(150):
        want = mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** mp.mpf("0.75"))
        got = eta_point(tau, 1)
        assert abs(got - want) < mp.mpf(2) ** -120


def test_rr_point_against_series_sum():
    # independent check of the product-side evaluator: sum form at small |q|
    tau = mp.mpc(0, 2)
    with mp.workprec(140):
        q = mp.exp(2j * mp.pi * tau)
        acc = mp.mpc(1)
        term = mp.mpc(1)
        for n in range(1, 30):
            term *= q ** (2 * n - 1) / (1 - q ** n)
            acc += term
        assert abs(rr_point("G", tau, 128) - acc) < mp.mpf(2) ** -100
