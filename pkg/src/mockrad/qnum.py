"""Arbitrary-precision numeric evaluation on mpmath.

Two kinds of objects are evaluated at a point q inside the unit disk:

  * mock theta series, summed term by term with the geometric tail policy
    (five consecutive term-ratio observations below the threshold before
    the tail bound is applied);
  * the modular-product sides, rewritten as sparse theta sums (pentagonal
    series for the Euler products, Jacobi-triple-product sums for the
    paired Pochhammer factors), which need O(sqrt(prec/(1-|q|))) terms
    instead of the O(prec/(1-|q|)) factors of the raw products.

Near a root of unity both sides grow like exp(c/(1-r)) while their
difference stays O(1), so callers needing the difference go through
``adaptive_diff`` which escalates the working precision until the
cancellation is resolved.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import mpmath as mp

from .catalog import AVERAGED, TermRule, get_spec
from .errors import DenominatorUnderflow, TailBoundFailure

F = Fraction


class MockValue(NamedTuple):
    value: mp.mpc
    terms: int


def _stop_scale(acc, peak):
    return max(1.0, abs(acc), peak)


def _tighten(q):
    """Keep real points on the real arithmetic fast path."""
    q = mp.mpc(q)
    return q.real if q.imag == 0 else q


class _CancellationMeter:
    """Tracks the worst log2(peak term / result) seen during an evaluation.

    Sparse theta sums near a root of unity add O(1) terms that cancel to
    exp(-c/(1-r)); the adaptive driver must budget working precision for
    that internal cancellation, not just for the final difference.
    """

    def __init__(self):
        self.debt_bits = 0.0

    def note(self, peak, result_mag):
        if peak == 0:
            return
        p = mp.mag(peak)                    # cheap upper bound on log2
        r = mp.mag(result_mag) if result_mag != 0 else p - mp.mp.prec
        r = max(r, p - mp.mp.prec)
        if p - r > 0:
            self.debt_bits = max(self.debt_bits, float(p - r))


_METER: Optional[_CancellationMeter] = None


def _note_cancel(peak, result_mag):
    if _METER is not None:
        _METER.note(peak, result_mag)


# ---------------------------------------------------------------------------
# sparse theta-type atoms
# ---------------------------------------------------------------------------

class _QuadPow:
    """x^Q(n) for an integer-valued quadratic Q, updated incrementally.

    Avoids mpc.__pow__ with large exponents (mpmath routes those through
    log/exp); after construction each step is two multiplications.
    """

    __slots__ = ("value", "delta", "ddelta")

    def __init__(self, x, q0: F, q1: F, q2: F, n0: int):
        def Q(n):
            e = q0 + q1 * n + q2 * n * n
            if e.denominator != 1:
                raise ValueError("exponent polynomial must be integer-valued")
            return e.numerator
        self.value = x ** Q(n0)
        self.delta = x ** (Q(n0 + 1) - Q(n0))
        dd = 2 * q2
        self.ddelta = x ** int(dd)

    def step(self):
        self.value = self.value * self.delta
        self.delta = self.delta * self.ddelta


def eps_point(q, m: int):
    """(q^m; q^m)_inf by the pentagonal-number theta sum."""
    x = q ** m
    acc = x - x + 1  # one in the arithmetic type of x
    peak = mp.mpf(1)
    eps = mp.eps * 4
    lo = _QuadPow(x, F(0), F(-1, 2), F(3, 2), 1)   # k(3k-1)/2
    hi = _QuadPow(x, F(0), F(1, 2), F(3, 2), 1)    # k(3k+1)/2
    k = 1
    while True:
        t = (lo.value + hi.value) * (-1 if k % 2 else 1)
        acc += t
        peak = max(peak, abs(t))
        if abs(t) < eps * _stop_scale(acc, peak):
            break
        lo.step()
        hi.step()
        k += 1
    _note_cancel(peak, abs(acc))
    return acc


def theta4_point(q, m: int):
    """theta_4(0; q^m) = sum (-1)^n q^(m n^2)."""
    x = q ** m
    acc = x - x + 1
    peak = mp.mpf(1)
    eps = mp.eps * 4
    sq = _QuadPow(x, F(0), F(0), F(1), 1)
    n = 1
    while True:
        t = 2 * (-1) ** (n % 2) * sq.value
        acc += t
        peak = max(peak, abs(t))
        if abs(t) < eps * _stop_scale(acc, peak):
            break
        sq.step()
        n += 1
    _note_cancel(peak, abs(acc))
    return acc


def k_point(q, m: int):
    """K(q^m) = sum q^(m n(n+1)/2)."""
    x = q ** m
    acc = x - x
    peak = mp.mpf(0)
    eps = mp.eps * 4
    tri = _QuadPow(x, F(0), F(1, 2), F(1, 2), 0)
    while True:
        t = tri.value
        acc += t
        peak = max(peak, abs(t))
        if abs(t) < eps * _stop_scale(acc, peak):
            break
        tri.step()
    _note_cancel(peak, abs(acc))
    return acc


def jtp3_point(q, b: int, a: int, sign: int):
    """(s q^a; q^b)(s q^(b-a); q^b)(q^b; q^b) as the triple-product sum.

    Equals sum_{n in Z} (-s)^n q^(b n(n-1)/2 + a n).
    """
    acc = q - q
    eps = mp.eps * 4
    peak = mp.mpf(0)
    stale = 0
    # indices k = n and k = -(n+1), both quadratic in n
    up = _QuadPow(q, F(0), F(a) - F(b, 2), F(b, 2), 0)
    dn = _QuadPow(q, F(b) - F(a), F(3 * b, 2) - F(a), F(b, 2), 0)
    n = 0
    while True:
        s_up = 1 if (-sign) ** (n % 2) == 1 else -1
        t1 = s_up * up.value
        t2 = -sign * s_up * dn.value
        acc += t1 + t2
        added = abs(t1) + abs(t2)
        peak = max(peak, added)
        if added < eps * _stop_scale(acc, peak):
            stale += 1
            if stale >= 2:
                break
        else:
            stale = 0
        up.step()
        dn.step()
        n += 1
    _note_cancel(peak, abs(acc))
    return acc


def g_point(q, m: int):
    """Rogers-Ramanujan G(q^m) = (q^5m;q^5m)_inf / [(q^m;q^5m)(q^4m;q^5m)(q^5m;q^5m)]."""
    return eps_point(q, 5 * m) / jtp3_point(q, 5 * m, m, 1)


def h_point(q, m: int):
    return eps_point(q, 5 * m) / jtp3_point(q, 5 * m, 2 * m, 1)


_ATOM_POINT = {
    "eps": lambda q, atom: eps_point(q, atom.m),
    "theta4": lambda q, atom: theta4_point(q, atom.m),
    "K": lambda q, atom: k_point(q, atom.m),
    "G": lambda q, atom: g_point(q, atom.m),
    "H": lambda q, atom: h_point(q, atom.m),
    "jtp3": lambda q, atom: jtp3_point(q, atom.m, atom.a, atom.sign),
}


def product_point(name: str, q):
    """Numeric value of a recorded modular product at the point q.

    eta atoms contribute exact fractional q-exponents which must cancel to
    an integer within each term; the value is then branch-free in q.
    """
    from .bilateral import PRODUCTS, SubstProduct
    from .errors import ResidualFractionalExponent, UnknownFunction
    if name not in PRODUCTS:
        raise UnknownFunction(f"no modular product recorded for {name!r}")
    expr = PRODUCTS[name]
    if isinstance(expr, SubstProduct):
        base_q = q ** expr.power * expr.sign
        val = product_point(expr.base, base_q)
        return mp.mpf(expr.coeff.numerator) / expr.coeff.denominator * q ** expr.qshift * val
    total = mp.mpc(0)
    for term in expr:
        exp = F(term.qshift)
        val = mp.mpc(1)
        for atom, p in term.num:
            if atom.kind == "eta":
                exp += F(atom.m, 24) * p
                val *= eps_point(q, atom.m) ** p
            else:
                val *= _ATOM_POINT[atom.kind](q, atom) ** p
        for atom, p in term.den:
            if atom.kind == "eta":
                exp -= F(atom.m, 24) * p
                val /= eps_point(q, atom.m) ** p
            else:
                val /= _ATOM_POINT[atom.kind](q, atom) ** p
        if exp.denominator != 1:
            raise ResidualFractionalExponent(
                f"product {name}: residual exponent {exp} at evaluation")
        total += mp.mpf(term.coeff.numerator) / term.coeff.denominator * q ** exp.numerator * val
    return total


# ---------------------------------------------------------------------------
# mock theta series at a point
# ---------------------------------------------------------------------------

class _FactorState:
    """Running numeric value of (a; q^step)_{L(n)} ** power along n."""

    def __init__(self, f, q, n0: int, under: float):
        self.f = f
        self.q = q
        self.under = under
        self.qs = q ** f.step
        self.L = 0
        self.value = q - q + 1
        self.x = f.sign * q ** f.a0 if f.a1 == 0 else None
        self._step_to(f.length(n0), n0)

    def _step_to(self, L: int, n: int):
        if L < self.L:
            raise ValueError("numeric factor lengths must not shrink")
        if self.x is None:
            # n-dependent argument: fall back to direct powers
            self.x = self.f.sign * self.q ** (self.f.a0 + self.f.a1 * n) * self.qs ** self.L
        x = self.x
        while self.L < L:
            fac = 1 - x
            if self.f.power < 0 and abs(fac) < self.under:
                raise DenominatorUnderflow(
                    f"denominator factor {abs(fac)} below threshold; "
                    "q is too close to a pole direction")
            self.value *= fac
            x *= self.qs
            self.L += 1
        self.x = x

    def rebuild_if_needed(self, n: int):
        # n-dependent arguments invalidate the running product
        if self.f.a1 != 0:
            self.L = 0
            self.value = self.q - self.q + 1
            self.x = None
        self._step_to(self.f.length(n), n)

    def contribution(self):
        return self.value ** self.f.power


def eval_term_rule(rule: TermRule, q, start: int, tol, precision: int,
                   ratio_threshold: float = 0.9, averaged: bool = False,
                   max_terms: int = 2_000_000) -> MockValue:
    """Sum rule terms numerically with the geometric tail policy.

    Stops once 5 consecutive term ratios sit below ``ratio_threshold`` and
    the implied geometric tail is below ``tol`` (or below the working
    precision relative to the accumulated magnitude, whichever is larger).
    """
    q = _tighten(q)
    if abs(q) >= 1:
        raise ValueError("evaluation requires |q| < 1")
    under = mp.mpf(2) ** (-(precision // 2))
    rel_floor = mp.eps * 2 ** 24
    rebuild = any(f.a1 != 0 for f in rule.factors)
    states = [_FactorState(f, q, start, under) for f in rule.factors]
    qexp = _QuadPow(q, rule.e0, rule.e1, rule.e2, start)

    def raw_term(n):
        if rebuild:
            for st in states:
                st.rebuild_if_needed(n)
        else:
            for st in states:
                st._step_to(st.f.length(n), n)
        t = qexp.value
        for st in states:
            t = t * st.contribution()
        c = rule.scalar(n)
        t = t * c.numerator
        if c.denominator != 1:
            t = t / c.denominator
        qexp.step()
        return t

    acc = mp.mpc(0)
    peak = mp.mpf(0)
    good_ratios = 0
    prev_mag = None
    t_prev = None
    n = start
    theta = mp.mpf(ratio_threshold)
    tail_factor = theta / (1 - theta)
    for count in range(max_terms):
        t = raw_term(n)
        if averaged:
            if t_prev is None:
                acc += t / 2
                t_prev = t
                n += 1
                continue
            contrib = (t_prev + t) / 2
            t_prev = t
        else:
            contrib = t
        acc += contrib
        m = abs(contrib)
        peak = max(peak, m)
        if prev_mag is not None and prev_mag > 0:
            if m / prev_mag < theta:
                good_ratios += 1
                if good_ratios >= 5:
                    tail = m * tail_factor
                    if tail < max(tol, rel_floor * _stop_scale(acc, peak)):
                        _note_cancel(peak, abs(acc))
                        return MockValue(acc, count + 1)
            else:
                good_ratios = 0
        if m == 0:
            good_ratios += 1
            if good_ratios >= 5:
                _note_cancel(peak, abs(acc))
                return MockValue(acc, count + 1)
        prev_mag = m if m > 0 else prev_mag
        n += 1
    raise TailBoundFailure(
        f"no geometric decay below {ratio_threshold} within {max_terms} terms")


def eval_mock(name: str, q, tol=None, precision: int = 128,
              ratio_threshold: float = 0.9) -> MockValue:
    """Evaluate a catalog entry at |q| < 1 with a tail bound below tol."""
    spec = get_spec(name)
    if tol is None:
        tol = mp.mpf(2) ** (-(precision // 2))
    with mp.workprec(precision + 32):
        q = _tighten(q)
        if spec.eval_via:
            acc = mp.mpc(0)
            terms = 0
            for coeff, sub, (sign, power, qshift) in spec.eval_via:
                sub_q = sign * q ** power
                v = eval_mock(sub, sub_q, tol=tol / 4, precision=precision,
                              ratio_threshold=ratio_threshold)
                c = mp.mpf(coeff.numerator) / coeff.denominator
                acc += c * q ** qshift * v.value
                terms += v.terms
            return MockValue(acc, terms)
        out = eval_term_rule(spec.rule, q, spec.start, tol, precision,
                             ratio_threshold=ratio_threshold,
                             averaged=spec.summation == AVERAGED)
        if spec.offset:
            return MockValue(out.value + mp.mpf(spec.offset.numerator) / spec.offset.denominator,
                             out.terms)
        return out


# ---------------------------------------------------------------------------
# adaptive-precision difference driver
# ---------------------------------------------------------------------------

def _measured_pass(make_sides, prec):
    global _METER
    meter = _CancellationMeter()
    saved, _METER = _METER, meter
    try:
        with mp.workprec(prec):
            a, b = make_sides(prec)
    finally:
        _METER = saved
    return a, b, meter.debt_bits


def adaptive_diff(make_sides: Callable[[int], tuple], target_bits: int,
                  max_passes: int = 12):
    """Evaluate two huge, cancelling sides until their difference is resolved.

    ``make_sides(prec)`` returns (mock_side, b_side) computed at working
    precision ``prec``.  The driver escalates prec until it covers
    log2(max magnitude) plus the worst internal cancellation reported by
    the sparse sums plus the requested post-cancellation accuracy.  When a
    reported cancellation is itself noise-limited (the true result sits
    below the current noise floor) the precision doubles instead, so deep
    debts are reached in logarithmically many passes.
    """
    prec = target_bits + 64
    for _ in range(max_passes):
        a, b, debt = _measured_pass(make_sides, prec)
        magnitude = max(abs(a), abs(b), mp.mpf(1))
        needed = target_bits + mp.mag(magnitude) + int(debt) + 48
        if prec >= needed:
            with mp.workprec(prec):
                return a - b, a, b
        noise_limited = debt >= prec - 32
        prec = max(int(needed) + 64, 2 * prec if noise_limited else 0)
    a, b, _ = _measured_pass(make_sides, prec)
    with mp.workprec(prec):
        return a - b, a, b
