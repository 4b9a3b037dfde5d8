"""Exact truncated Laurent series in fractional powers of q.

A :class:`FracPowerSeries` stores rational coefficients on the exponent
lattice (1/D)*Z.  Coefficients are known exactly for exponents e with
lo/D <= e < trunc/D and are exactly zero below lo/D; nothing is claimed
at or beyond trunc/D.  Binary operations rescale both operands to the
lcm lattice and propagate the truncation window so that no coefficient
is ever fabricated past either operand's knowledge.

All coefficients are :class:`fractions.Fraction`; no floating point
enters this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    BeyondTruncation,
    DivergentProduct,
    FractionalExponentNegation,
    PoleInNegativeIndex,
    ZeroLeadingCoefficient,
)

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class Monomial:
    """c * q^(expnum/expden) with exact rational c."""

    coeff: Fraction
    expnum: int
    expden: int = 1

    def __post_init__(self):
        if self.expden <= 0:
            raise ValueError("expden must be positive")
        coeff = self.coeff if isinstance(self.coeff, Fraction) else Fraction(self.coeff)
        num, den = self.expnum, self.expden
        if num == 0:
            den = 1
        else:
            g = math.gcd(num, den)
            num //= g
            den //= g
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "expnum", num)
        object.__setattr__(self, "expden", den)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.expnum, self.expden)

    def __mul__(self, other: "Monomial") -> "Monomial":
        e = self.exponent + other.exponent
        return Monomial(self.coeff * other.coeff, e.numerator, e.denominator)

    def __pow__(self, k: int) -> "Monomial":
        if self.coeff == 0 and k < 0:
            raise ZeroDivisionError("0 monomial to a negative power")
        e = self.exponent * k
        return Monomial(self.coeff ** k, e.numerator, e.denominator)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.expnum, self.expden)

    def __repr__(self):
        if self.expnum == 0:
            return f"{self.coeff}"
        return f"{self.coeff}*q^({self.expnum}/{self.expden})"


def mono(coeff: Rat, expnum: int = 0, expden: int = 1) -> Monomial:
    return Monomial(Fraction(coeff), expnum, expden)


def _as_frac(e: Rat) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


class FracPowerSeries:
    """Truncated Laurent series with exact rational coefficients.

    ``coeffs`` maps exponent numerators (on the (1/denom)*Z lattice) to
    nonzero Fractions.  The window [lo, trunc) bounds where coefficients
    are known; the series is exactly zero below lo.
    """

    __slots__ = ("denom", "lo", "trunc", "coeffs")

    def __init__(self, denom: int, lo: int, trunc: int, coeffs: dict):
        if denom < 1:
            raise ValueError("denom must be >= 1")
        if lo > trunc:
            raise ValueError("lo must not exceed trunc")
        self.denom = denom
        self.lo = lo
        self.trunc = trunc
        self.coeffs = {n: c for n, c in coeffs.items() if c}
        for n in self.coeffs:
            if not (lo <= n < trunc):
                raise ValueError(f"exponent numerator {n} outside window [{lo}, {trunc})")

    # ---------- constructors ----------

    @classmethod
    def zero(cls, trunc: Rat, denom: int = 1) -> "FracPowerSeries":
        t = _num_on_lattice_ceil(trunc, denom)
        return cls(denom, min(0, t), t, {})

    @classmethod
    def one(cls, trunc: Rat, denom: int = 1) -> "FracPowerSeries":
        t = _num_on_lattice_ceil(trunc, denom)
        if t <= 0:
            return cls(denom, 0, max(t, 0), {})
        return cls(denom, 0, t, {0: Fraction(1)})

    @classmethod
    def from_monomial(cls, m: Monomial, trunc: Rat) -> "FracPowerSeries":
        denom = m.expden
        t = _num_on_lattice_ceil(trunc, denom)
        n = m.expnum
        lo = min(n, t)
        if m.coeff == 0 or n >= t:
            return cls(denom, min(0, t), t, {})
        return cls(denom, lo, t, {n: m.coeff})

    @classmethod
    def from_int_coeffs(cls, coeffs: Iterable[Rat], trunc: Optional[int] = None) -> "FracPowerSeries":
        """Series from a list of integer-exponent coefficients starting at q^0."""
        seq = list(coeffs)
        t = trunc if trunc is not None else len(seq)
        return cls(1, 0, t, {n: Fraction(c) for n, c in enumerate(seq) if c and n < t})

    # ---------- basic queries ----------

    @property
    def known_order(self) -> Fraction:
        """Exponent bound below which coefficients are exact."""
        return Fraction(self.trunc, self.denom)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Optional[Fraction]:
        """Lowest exponent with a nonzero known coefficient, None if zero."""
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.denom)

    def _val_num(self) -> int:
        """First possibly-nonzero exponent numerator (trunc if zero on window)."""
        return min(self.coeffs) if self.coeffs else self.trunc

    def coefficient(self, e: Rat) -> Fraction:
        e = _as_frac(e)
        if e >= self.known_order:
            raise BeyondTruncation(f"exponent {e} >= truncation order {self.known_order}")
        n = e * self.denom
        if n.denominator != 1:
            return Fraction(0)
        return self.coeffs.get(n.numerator, Fraction(0))

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        for n in sorted(self.coeffs):
            yield Fraction(n, self.denom), self.coeffs[n]

    # ---------- lattice management ----------

    def rescale(self, denom: int) -> "FracPowerSeries":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError("can only rescale to a multiple of the current denom")
        f = denom // self.denom
        return FracPowerSeries(denom, self.lo * f, self.trunc * f,
                               {n * f: c for n, c in self.coeffs.items()})

    def normalized(self) -> "FracPowerSeries":
        """Reduce the exponent lattice as far as the support allows."""
        if self.denom == 1:
            return self
        g = self.denom
        for n in self.coeffs:
            g = math.gcd(g, n)
            if g == 1:
                return self
        lo = self.lo // g        # floor keeps the zero-below-lo claim valid
        trunc = -((-self.trunc) // g)  # ceil keeps the knowledge bound exact
        return FracPowerSeries(self.denom // g, lo, trunc,
                               {n // g: c for n, c in self.coeffs.items()})

    def reduce_to_integer(self) -> "FracPowerSeries":
        """Drop to the integer lattice; all support must lie on it."""
        if self.denom == 1:
            return self
        d = self.denom
        for n in self.coeffs:
            if n % d:
                from .errors import ResidualFractionalExponent
                raise ResidualFractionalExponent(
                    f"coefficient at q^({n}/{d}) survives integer reduction")
        lo = self.lo // d
        trunc = -((-self.trunc) // d)
        return FracPowerSeries(1, lo, trunc, {n // d: c for n, c in self.coeffs.items()})

    @staticmethod
    def _aligned(a: "FracPowerSeries", b: "FracPowerSeries"):
        d = a.denom * b.denom // math.gcd(a.denom, b.denom)
        return a.rescale(d), b.rescale(d)

    # ---------- ring operations ----------

    def __add__(self, other) -> "FracPowerSeries":
        if isinstance(other, (int, Fraction)):
            other = FracPowerSeries.from_monomial(mono(other), self.known_order)
        a, b = self._aligned(self, other)
        trunc = min(a.trunc, b.trunc)
        lo = min(a.lo, b.lo, trunc)
        out = dict(a.coeffs)
        for n, c in b.coeffs.items():
            out[n] = out.get(n, Fraction(0)) + c
        return FracPowerSeries(a.denom, lo, trunc,
                               {n: c for n, c in out.items() if n < trunc and lo <= n})

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "FracPowerSeries":
        return FracPowerSeries(self.denom, self.lo, self.trunc,
                               {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__add__(-Fraction(other))
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def scaled(self, c: Rat) -> "FracPowerSeries":
        c = Fraction(c)
        if c == 0:
            return FracPowerSeries(self.denom, self.trunc, self.trunc, {})
        return FracPowerSeries(self.denom, self.lo, self.trunc,
                               {n: c * v for n, v in self.coeffs.items()})

    def __mul__(self, other) -> "FracPowerSeries":
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        a, b = self._aligned(self, other)
        va, vb = a._val_num(), b._val_num()
        trunc = min(a.trunc + vb, b.trunc + va)
        lo = min(va + vb, trunc)
        out: dict = {}
        # convolution over nonzero support only
        bs = sorted(b.coeffs.items())
        for na, ca in a.coeffs.items():
            bound = trunc - na
            for nb, cb in bs:
                if nb >= bound:
                    break
                k = na + nb
                if k in out:
                    out[k] += ca * cb
                else:
                    out[k] = ca * cb
        return FracPowerSeries(a.denom, lo, trunc, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "FracPowerSeries":
        if k < 0:
            return self.invert() ** (-k)
        result = FracPowerSeries.one(self.known_order, self.denom)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---------- structured multiplies (exact small factors) ----------

    def times_monomial(self, m: Monomial) -> "FracPowerSeries":
        """Exact multiplication by a monomial; no knowledge is lost."""
        if m.coeff == 0:
            return FracPowerSeries(self.denom, self.trunc, self.trunc, {})
        d = self.denom * m.expden // math.gcd(self.denom, m.expden)
        s = self.rescale(d)
        shift = m.expnum * (d // m.expden)
        return FracPowerSeries(d, s.lo + shift, s.trunc + shift,
                               {n + shift: m.coeff * c for n, c in s.coeffs.items()})

    def times_one_minus(self, m: Monomial) -> "FracPowerSeries":
        """Exact multiplication by (1 - m) for a monomial m."""
        if m.coeff == 0:
            return self
        d = self.denom * m.expden // math.gcd(self.denom, m.expden)
        s = self.rescale(d)
        shift = m.expnum * (d // m.expden)
        trunc = s.trunc + min(0, shift)
        lo = min(s.lo, s.lo + shift, trunc)
        out = {n: c for n, c in s.coeffs.items() if n < trunc}
        for n, c in s.coeffs.items():
            k = n + shift
            if k < trunc:
                out[k] = out.get(k, Fraction(0)) - m.coeff * c
        return FracPowerSeries(d, lo, trunc, {n: c for n, c in out.items() if c})

    def times_inv_one_minus(self, m: Monomial) -> "FracPowerSeries":
        """Exact multiplication by 1/(1 - m); requires m to have positive exponent."""
        if m.coeff == 0:
            return self
        if m.exponent <= 0:
            raise ValueError("times_inv_one_minus needs a positive exponent")
        d = self.denom * m.expden // math.gcd(self.denom, m.expden)
        s = self.rescale(d)
        step = m.expnum * (d // m.expden)
        out: dict = {}
        for n in range(s.lo, s.trunc):
            c = s.coeffs.get(n, Fraction(0))
            prev = out.get(n - step)
            if prev is not None:
                c = c + m.coeff * prev
            if c:
                out[n] = c
        return FracPowerSeries(d, s.lo, s.trunc, out)

    # ---------- inversion / substitution ----------

    def invert(self) -> "FracPowerSeries":
        if not self.coeffs:
            raise ZeroLeadingCoefficient(
                "no nonzero coefficient below the truncation order")
        v = min(self.coeffs)
        c0 = self.coeffs[v]
        length = self.trunc - v  # unit part known on [0, length)
        a = {n - v: c for n, c in self.coeffs.items()}
        inv0 = Fraction(1) / c0
        b: dict = {0: inv0}
        support = sorted(a)[1:]
        for k in range(1, length):
            acc = Fraction(0)
            for i in support:
                if i > k:
                    break
                bj = b.get(k - i)
                if bj is not None:
                    acc += a[i] * bj
            if acc:
                b[k] = -inv0 * acc
        return FracPowerSeries(self.denom, -v, self.trunc - 2 * v,
                               {n - v: c for n, c in b.items() if n - v < self.trunc - 2 * v})

    def substitute_power(self, sign: int, m: int) -> "FracPowerSeries":
        """q -> sign * q^m, coefficient-wise."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if m < 1:
            raise ValueError("m must be a positive integer")
        if sign == -1:
            for n in self.coeffs:
                if n % self.denom:
                    raise FractionalExponentNegation(
                        f"q -> -q^{m} on a series with exponent {n}/{self.denom}")
            coeffs = {n * m: (c if (n // self.denom) % 2 == 0 else -c)
                      for n, c in self.coeffs.items()}
        else:
            coeffs = {n * m: c for n, c in self.coeffs.items()}
        return FracPowerSeries(self.denom, self.lo * m, self.trunc * m, coeffs)

    def truncate(self, order: Rat) -> "FracPowerSeries":
        """Restrict knowledge to exponents < order."""
        t = _num_on_lattice_ceil(order, self.denom)
        t = min(t, self.trunc)
        return FracPowerSeries(self.denom, min(self.lo, t), t,
                               {n: c for n, c in self.coeffs.items() if n < t})

    # ---------- comparison helpers ----------

    def agrees_with(self, other: "FracPowerSeries", through: Optional[Rat] = None) -> bool:
        """Exact coefficient agreement on the common known window."""
        return first_mismatch(self, other, through) is None

    def __repr__(self):
        parts = []
        for e, c in list(self.items())[:8]:
            parts.append(f"{c}*q^{e}" if e else f"{c}")
        body = " + ".join(parts) if parts else "0"
        return f"<FracPowerSeries {body} ... (order {self.known_order})>"


def _num_on_lattice_ceil(e: Rat, denom: int) -> int:
    """Smallest lattice numerator n with n/denom >= e."""
    e = _as_frac(e)
    n = e * denom
    return -((-n.numerator) // n.denominator)


def first_mismatch(a: FracPowerSeries, b: FracPowerSeries,
                   through: Optional[Rat] = None):
    """First (exponent, a-coeff, b-coeff) disagreement below the common order.

    Returns None when the series agree on the whole comparison window.
    """
    x, y = FracPowerSeries._aligned(a, b)
    bound = min(x.trunc, y.trunc)
    if through is not None:
        bound = min(bound, _num_on_lattice_ceil(through, x.denom))
    keys = sorted(set(x.coeffs) | set(y.coeffs))
    for n in keys:
        if n >= bound:
            break
        ca = x.coeffs.get(n, Fraction(0))
        cb = y.coeffs.get(n, Fraction(0))
        if ca != cb:
            return Fraction(n, x.denom), ca, cb
    return None


# ---------------------------------------------------------------------------
# q-Pochhammer symbols
# ---------------------------------------------------------------------------

def pochhammer(a: Monomial, step: Monomial, n: Optional[int], trunc: Rat) -> FracPowerSeries:
    """(a; step)_n as an exact truncated series.

    n >= 0 gives the finite product prod_{j<n} (1 - a*step^j); n None means
    the infinite product truncated at ``trunc``; n < 0 applies the standard
    reflection (a;s)_{-n} = (-a)^{-n} s^{n(n+1)/2} / (a^{-1} s; s)_n.
    """
    denom = a.expden * step.expden // math.gcd(a.expden, step.expden)
    if n is not None and n < 0:
        return _pochhammer_negative(a, step, -n, trunc)
    if n is None:
        return _pochhammer_infinite(a, step, trunc, denom)
    result = FracPowerSeries.one(trunc, denom)
    for j in range(n):
        result = result.times_one_minus(a * step ** j)
    return result


def _pochhammer_infinite(a: Monomial, step: Monomial, trunc: Rat, denom: int) -> FracPowerSeries:
    if a.coeff == 0:
        return FracPowerSeries.one(trunc, denom)
    if step.exponent <= 0 or step.coeff == 0:
        raise DivergentProduct(
            "infinite product needs strictly increasing factor exponents")
    trunc = _as_frac(trunc)
    # finitely many factors sit at exponent <= 0; each shifts the valuation
    shift = Fraction(0)
    j = 0
    factors = []
    while True:
        f = a * step ** j
        if f.exponent > 0:
            break
        if f.exponent == 0 and f.coeff == 1:
            return FracPowerSeries.zero(trunc, denom)  # a factor (1 - 1)
        factors.append(f)
        shift += min(0, f.exponent)
        j += 1
        if j > 10_000:
            raise DivergentProduct("factor exponents stuck at or below zero")
    bound = trunc - shift
    result = FracPowerSeries.one(bound, denom)
    for f in factors:
        result = result.times_one_minus(f)
    while True:
        f = a * step ** j
        if f.exponent >= bound:
            break
        result = result.times_one_minus(f)
        j += 1
    return result


def _pochhammer_negative(a: Monomial, step: Monomial, m: int, trunc: Rat) -> FracPowerSeries:
    if a.coeff == 0:
        raise PoleInNegativeIndex("(0; s)_{-m} has no reflection")
    a_inv_s = a ** -1 * step
    factors = [a_inv_s * step ** j for j in range(m)]
    for j, f in enumerate(factors):
        if f.exponent == 0 and f.coeff == 1:
            raise PoleInNegativeIndex(
                f"(a^-1 s; s)_{m} contains a vanishing factor at j={j}")
    front = (-a) ** (-m) * step ** (m * (m + 1) // 2)
    trunc = _as_frac(trunc)
    # the reflected denominator is an exact Laurent polynomial: build it whole,
    # with enough window that its inverse is known past the requested order
    poly_hi = sum((f.exponent for f in factors if f.exponent > 0), Fraction(0)) + 1
    v_min = sum((f.exponent for f in factors if f.exponent < 0), Fraction(0))
    build = max(trunc - front.exponent + 2 * abs(v_min) + 2, poly_hi, Fraction(2))
    denom = a_inv_s.expden * step.expden // math.gcd(a_inv_s.expden, step.expden)
    den = FracPowerSeries.one(build, denom)
    for f in factors:
        den = den.times_one_minus(f)
    if den.is_zero():
        raise PoleInNegativeIndex("reflected denominator vanishes identically")
    return den.invert().times_monomial(front).truncate(trunc)
