"""Numeric Klein forms and the Rogers-Ramanujan Klein-quotient identities.

Everything here is a function of tau in the upper half-plane; fractional
powers of q mean e^(2 pi i tau x), so no branch choices arise.  Values are
floating (mpmath) with an estimated, not certified, error bound attached:
the truncation tail of each infinite product is bounded geometrically and
the bound is returned alongside the value.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import NonconvergentTail, NotInUpperHalfPlane

TAIL_GUARD = 16

# recorded only; the transformation law itself is outside this package's scope
KLEIN_TRANSFORMATION_METADATA = "t^(N)_(r,N)(N tau): weight -1, level Gamma_1(N)"


@dataclass
class KleinValue:
    value: mp.mpc
    error_bound: float     # estimated bound on |value - true|
    rigorous: bool         # False: floating arithmetic, geometric tail estimate
    factors: int


def _check_tau(tau):
    tau = mp.mpc(tau)
    if not tau.imag > 0:
        raise NotInUpperHalfPlane(f"Im(tau) = {tau.imag}")
    return tau


def q_power(tau, x) -> mp.mpc:
    """e^(2 pi i tau x) for rational or float x."""
    return mp.exp(2j * mp.pi * mp.mpc(tau) * x)


def eta_point(tau, m: int = 1) -> mp.mpc:
    """eta(m tau) = q^(m/24) prod (1 - q^(m n))."""
    tau = _check_tau(tau)
    qm = q_power(tau, m)
    acc = mp.mpc(1)
    x = qm
    eps = mp.eps * 4
    for _ in range(10_000_000):
        acc *= 1 - x
        x *= qm
        if abs(x) < eps:
            break
    else:
        raise NonconvergentTail("eta product did not converge")
    return q_power(tau, mp.mpf(m) / 24) * acc


def klein_point(r: int, s: int, N: int, tau, precision: int = 128) -> KleinValue:
    """The Klein form t_(r,s) with level-N root-of-unity twists at tau.

    The infinite product is truncated once the multiplicative tail
    deviation drops below 2^(-precision/2); the returned error bound is
    the geometric estimate of the discarded tail.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    if r % N == 0 and s % N == 0:
        raise ValueError("(r, s) must not vanish mod (N, N)")
    tau = _check_tau(tau)
    with mp.workprec(precision + TAIL_GUARD * 4):
        zN = mp.exp(2j * mp.pi * s / N)
        z2N2 = mp.exp(2j * mp.pi * (s * (r - N)) / (2 * N * N))
        q1 = q_power(tau, 1)
        front = -z2N2 / (2j * mp.pi) * q_power(tau, mp.mpf(r * (r - N)) / (2 * N * N))
        head = 1 - zN * q_power(tau, mp.mpf(r) / N)
        acc = mp.mpc(1)
        qr = abs(q_power(tau, mp.mpf(r) / N))
        qa = abs(q1)
        threshold = mp.mpf(2) ** (-(precision // 2) - TAIL_GUARD)
        n = 1
        deviation = mp.mpf("inf")
        while n < 10_000_000:
            up = 1 - zN * q_power(tau, n + mp.mpf(r) / N)
            dn = 1 - (1 / zN) * q_power(tau, n - mp.mpf(r) / N)
            low = (1 - q1 ** n) ** 2
            acc *= up * dn / low
            deviation = qa ** n * (qr + 1 / qr + 2) / (1 - qa ** n)
            if deviation < threshold:
                break
            n += 1
        else:
            raise NonconvergentTail("Klein product did not reach its threshold")
        value = front * head * acc
        # geometric remainder of sum_{k>n} log-deviations
        tail = deviation * qa / (1 - qa)
        err = float(abs(value) * 2 * tail + mp.mpf(2) ** (-(precision - 8)) * abs(value))
        return KleinValue(value, err, False, n)


def rr_point(which: str, tau, precision: int = 128) -> mp.mpc:
    """G or H from the q-series product side, at q = e^(2 pi i tau)."""
    tau = _check_tau(tau)
    a, b = (1, 4) if which == "G" else (2, 3)
    with mp.workprec(precision + TAIL_GUARD * 4):
        q = q_power(tau, 1)
        acc = mp.mpc(1)
        eps = mp.eps * 4
        n = 0
        while True:
            acc *= (1 - q ** (5 * n + a)) * (1 - q ** (5 * n + b))
            if abs(q ** (5 * n + a)) < eps:
                break
            n += 1
        return 1 / acc


def klein_lemma_residual(which: str, tau, precision: int = 128) -> mp.mpf:
    """| q-series side - Klein-quotient side | for G or H.

    G(q) = -(zeta_5^3 / 2 pi i) q^(1/60) / (eta^2(5 tau) t_(1,5)(5 tau)) and
    the H analogue with zeta_10^7, q^(-11/60), t_(2,5).
    """
    tau = _check_tau(tau)
    with mp.workprec(precision + TAIL_GUARD * 4):
        series_side = rr_point(which, tau, precision)
        if which == "G":
            zeta = mp.exp(2j * mp.pi * 3 / 5)
            exponent = mp.mpf(1) / 60
            r = 1
        elif which == "H":
            zeta = mp.exp(2j * mp.pi * 7 / 10)
            exponent = mp.mpf(-11) / 60
            r = 2
        else:
            raise ValueError("which must be 'G' or 'H'")
        t = klein_point(r, 5, 5, 5 * tau, precision)
        eta5 = eta_point(tau, 5)
        klein_side = -(zeta / (2j * mp.pi)) * q_power(tau, exponent) / (eta5 ** 2 * t.value)
        return abs(series_side - klein_side)


def product_pair_residual(tau, precision: int = 128) -> mp.mpf:
    """Residual of the rewrite of (q;q^5)(q^4;q^5) through t_(1,5) and eta.

    Checks -zeta_5^(-3) (2 pi i) q^(-1/60) t_(1,5)(5 tau) eta^2(5 tau)
    against the direct product evaluation.
    """
    tau = _check_tau(tau)
    with mp.workprec(precision + TAIL_GUARD * 4):
        lhs = (-mp.exp(-2j * mp.pi * 3 / 5) * (2j * mp.pi) * q_power(tau, mp.mpf(-1) / 60)
               * klein_point(1, 5, 5, 5 * tau, precision).value * eta_point(tau, 5) ** 2)
        rhs = 1 / rr_point("G", tau, precision)
        return abs(lhs - rhs)
