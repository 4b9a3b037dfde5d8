"""Classical modular objects as exact q-series.

Everything here is built from the series kernel: Euler products
(q^m; q^m)_inf, the Dedekind eta prefactors on the (1/24)-lattice, the
theta sums, and the Rogers-Ramanujan functions in both sum and product
form.  Quotient sides are computed by exact series inversion, so a
mismatch anywhere is a kernel bug, not roundoff.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import EtaQuotientMismatch
from .series import FracPowerSeries, first_mismatch, mono, pochhammer

F = Fraction


def euler_product(m: int, trunc) -> FracPowerSeries:
    """(q^m; q^m)_infinity."""
    return pochhammer(mono(1, m), mono(1, m), None, trunc)


def eta_series(m: int, trunc) -> FracPowerSeries:
    """q^(m/24) (q^m; q^m)_inf on the exponent lattice (1/24)Z."""
    if m < 1:
        raise ValueError("eta level must be a positive integer")
    return euler_product(m, F(trunc) - F(m, 24)).times_monomial(mono(1, m, 24))


def theta4_series(trunc, self_check: bool = True) -> FracPowerSeries:
    """theta_4(0;q) = sum_Z (-1)^n q^(n^2), checked against eta(t)^2/eta(2t)."""
    coeffs = {0: F(1)}
    n = 1
    while n * n < trunc:
        coeffs[n * n] = F(2) if n % 2 == 0 else F(-2)
        n += 1
    out = FracPowerSeries(1, 0, int(trunc), coeffs)
    if self_check:
        quotient = euler_product(1, trunc) ** 2 * euler_product(2, trunc).invert()
        bad = first_mismatch(out, quotient, trunc)
        if bad is not None:
            raise EtaQuotientMismatch(f"theta4 sum vs eta quotient at q^{bad[0]}")
    return out


def k_series(trunc, self_check: bool = True) -> FracPowerSeries:
    """K(q) = sum_{n>=0} q^(n(n+1)/2), checked against eta(2t)^2/(q^(1/8) eta(t))."""
    coeffs = {}
    n = 0
    while n * (n + 1) // 2 < trunc:
        coeffs[n * (n + 1) // 2] = F(1)
        n += 1
    out = FracPowerSeries(1, 0, int(trunc), coeffs)
    if self_check:
        quotient = euler_product(2, trunc) ** 2 * euler_product(1, trunc).invert()
        bad = first_mismatch(out, quotient, trunc)
        if bad is not None:
            raise EtaQuotientMismatch(f"K sum vs eta quotient at q^{bad[0]}")
    return out


def rr_series(which: str, form: str, trunc) -> FracPowerSeries:
    """Rogers-Ramanujan G (which='G') or H (which='H'), sum or product form."""
    if which not in ("G", "H"):
        raise ValueError("which must be 'G' or 'H'")
    if form == "sum":
        # G: sum q^(n^2)/(q;q)_n ; H: sum q^(n^2+n)/(q;q)_n
        acc = FracPowerSeries.one(trunc)
        term = FracPowerSeries.one(trunc)
        n = 1
        while True:
            e = n * n if which == "G" else n * n + n
            if e >= trunc:
                break
            term = term.times_monomial(mono(1, 2 * n - 1 if which == "G" else 2 * n)) \
                       .times_inv_one_minus(mono(1, n))
            acc = acc + term
            n += 1
        return acc
    if form == "product":
        a, b = (1, 4) if which == "G" else (2, 3)
        prod = pochhammer(mono(1, a), mono(1, 5), None, trunc) \
            * pochhammer(mono(1, b), mono(1, 5), None, trunc)
        return prod.invert()
    raise ValueError("form must be 'sum' or 'product'")


def b_series(trunc) -> FracPowerSeries:
    """b(q) = (q; q^2)_inf * theta_4(0; q), the modular side of Ramanujan's claim."""
    return pochhammer(mono(1, 1), mono(1, 2), None, trunc) * theta4_series(trunc, self_check=False)
