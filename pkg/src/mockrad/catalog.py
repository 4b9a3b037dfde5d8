"""Catalog of mock theta functions of orders 3, 5, 6 and 8.

Each entry carries a term rule in a small grammar: the n-th summand is

    coeff * (-1)^(n*alt) * q^(e0 + e1 n + e2 n^2) * prod_i (a_i; q^s_i)_{L_i(n)}^{p_i}

where a_i = sign_i * q^(a0_i + a1_i n) and L_i(n) = len0_i + len1_i n.
Order-5 and order-3 definitions come from the classical literature
directly; order-6 and order-8 base definitions are transcribed from the
standard references and tagged source="cited-reference" -- their
correctness is gated by the bilateral identity and radial-limit suites.

``expand_mock`` produces exact truncated expansions; ``eval_mock``
evaluates inside the unit disk at arbitrary precision (see qnum).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import PoleInNegativeIndex, UnknownFunction
from .series import FracPowerSeries, Monomial, mono, pochhammer

F = Fraction

PLAIN = "plain"
# alternating entries whose summands do not tend to zero termwise are summed
# by averaging consecutive partial sums (the convention of the source tables)
AVERAGED = "averaged"


@dataclass(frozen=True)
class PochFactor:
    """(sign * q^(a0 + a1 n); q^step)_{len0 + len1 n} raised to ``power``."""
    sign: int
    a0: int
    step: int
    len0: int
    len1: int
    power: int
    a1: int = 0

    def length(self, n: int) -> int:
        return self.len0 + self.len1 * n

    def argument(self, n: int) -> Monomial:
        return mono(self.sign, self.a0 + self.a1 * n)


@dataclass(frozen=True)
class TermRule:
    e0: F
    e1: F
    e2: F
    factors: tuple[PochFactor, ...]
    coeff: F = F(1)
    alt_sign: bool = False

    def exponent(self, n: int) -> F:
        return self.e0 + self.e1 * n + self.e2 * n * n

    def scalar(self, n: int) -> F:
        return -self.coeff if (self.alt_sign and n % 2) else self.coeff


@dataclass(frozen=True)
class MockThetaSpec:
    """Catalog entry: name "order:symbol", term rule, summation policy."""
    name: str
    order: int
    rule: TermRule
    start: int = 0
    offset: F = F(0)
    summation: str = PLAIN
    source: str = "paper"
    # evaluation route near roots of unity: list of (coeff, name, (sign, power, qshift))
    eval_via: Optional[tuple] = None

    @property
    def symbol(self) -> str:
        return self.name.split(":", 1)[1]


def _rule(e0, e1, e2, factors, coeff=1, alt=False):
    return TermRule(F(e0), F(e1), F(e2), tuple(factors), F(coeff), alt)


def _pf(sign, a0, step, len0, len1, power, a1=0):
    return PochFactor(sign, a0, step, len0, len1, power, a1)


_ENTRIES = [
    # ----- order 5 -----
    MockThetaSpec("5:f0", 5, _rule(0, 0, 1, [_pf(-1, 1, 1, 0, 1, -1)])),
    MockThetaSpec("5:f1", 5, _rule(0, 1, 1, [_pf(-1, 1, 1, 0, 1, -1)])),
    MockThetaSpec("5:psi0", 5, _rule(1, F(3, 2), F(1, 2), [_pf(-1, 1, 1, 0, 1, 1)])),
    MockThetaSpec("5:psi1", 5, _rule(0, F(1, 2), F(1, 2), [_pf(-1, 1, 1, 0, 1, 1)])),
    MockThetaSpec("5:phi0", 5, _rule(0, 0, 1, [_pf(-1, 1, 2, 0, 1, 1)])),
    MockThetaSpec("5:phi1", 5, _rule(1, 2, 1, [_pf(-1, 1, 2, 0, 1, 1)])),
    MockThetaSpec("5:F0", 5, _rule(0, 0, 2, [_pf(1, 1, 2, 0, 1, -1)])),
    MockThetaSpec("5:F1", 5, _rule(0, 2, 2, [_pf(1, 1, 2, 1, 1, -1)])),
    MockThetaSpec("5:chi0", 5, _rule(0, 1, 0, [_pf(1, 1, 1, 0, 1, -1, a1=1)]),
                  eval_via=((F(2), "5:F0", (1, 1, 0)), (F(-1), "5:phi0", (-1, 1, 0)))),
    MockThetaSpec("5:chi1", 5, _rule(0, 1, 0, [_pf(1, 1, 1, 1, 1, -1, a1=1)]),
                  eval_via=((F(2), "5:F1", (1, 1, 0)), (F(1), "5:phi1", (-1, 1, -1)))),
    # ----- order 3 -----
    MockThetaSpec("3:f", 3, _rule(0, 0, 1, [_pf(-1, 1, 1, 0, 1, -2)])),
    MockThetaSpec("3:phi", 3, _rule(0, 0, 1, [_pf(-1, 2, 2, 0, 1, -1)])),
    MockThetaSpec("3:psi", 3, _rule(0, 0, 1, [_pf(1, 1, 2, 0, 1, -1)]), start=1),
    MockThetaSpec("3:nu", 3, _rule(0, 1, 1, [_pf(-1, 1, 2, 1, 1, -1)])),
    # ----- order 6 (cited-reference) -----
    MockThetaSpec("6:lambda", 6, _rule(0, 1, 0, [_pf(1, 1, 2, 0, 1, 1),
                                                 _pf(-1, 1, 1, 0, 1, -1)], alt=True),
                  source="cited-reference"),
    MockThetaSpec("6:mu", 6, _rule(0, 0, 0, [_pf(1, 1, 2, 0, 1, 1),
                                             _pf(-1, 1, 1, 0, 1, -1)], alt=True),
                  summation=AVERAGED, source="cited-reference"),
    MockThetaSpec("6:phi", 6, _rule(0, 0, 1, [_pf(1, 1, 2, 0, 1, 1),
                                              _pf(-1, 1, 1, 0, 2, -1)], alt=True),
                  source="cited-reference"),
    MockThetaSpec("6:psi", 6, _rule(1, 2, 1, [_pf(1, 1, 2, 0, 1, 1),
                                              _pf(-1, 1, 1, 1, 2, -1)], alt=True),
                  source="cited-reference"),
    MockThetaSpec("6:rho", 6, _rule(0, F(1, 2), F(1, 2), [_pf(-1, 1, 1, 0, 1, 1),
                                                          _pf(1, 1, 2, 1, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("6:sigma", 6, _rule(1, F(3, 2), F(1, 2), [_pf(-1, 1, 1, 0, 1, 1),
                                                            _pf(1, 1, 2, 1, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("6:nu", 6, _rule(0, 1, 0, [_pf(-1, 1, 1, -1, 2, 1),
                                             _pf(1, 1, 2, 0, 1, -1)]), start=1,
                  source="cited-reference"),
    MockThetaSpec("6:xi", 6, _rule(0, 1, 0, [_pf(-1, 1, 1, -2, 2, 1),
                                             _pf(1, 1, 2, 0, 1, -1)]), start=1,
                  source="cited-reference"),
    # ----- order 8 (cited-reference) -----
    MockThetaSpec("8:S0", 8, _rule(0, 0, 1, [_pf(-1, 1, 2, 0, 1, 1),
                                             _pf(-1, 2, 2, 0, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("8:S1", 8, _rule(0, 2, 1, [_pf(-1, 1, 2, 0, 1, 1),
                                             _pf(-1, 2, 2, 0, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("8:T0", 8, _rule(2, 3, 1, [_pf(-1, 2, 2, 0, 1, 1),
                                             _pf(-1, 1, 2, 1, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("8:T1", 8, _rule(0, 1, 1, [_pf(-1, 2, 2, 0, 1, 1),
                                             _pf(-1, 1, 2, 1, 1, -1)]),
                  source="cited-reference"),
    MockThetaSpec("8:V0", 8, _rule(0, 0, 1, [_pf(-1, 1, 2, 0, 1, 1),
                                             _pf(1, 1, 2, 0, 1, -1)], coeff=2),
                  offset=F(-1), source="cited-reference"),
    MockThetaSpec("8:V1", 8, _rule(1, 2, 1, [_pf(-1, 1, 2, 0, 1, 1),
                                             _pf(1, 1, 2, 1, 1, -1)]),
                  source="cited-reference"),
]

CATALOG = {spec.name: spec for spec in _ENTRIES}


def get_spec(name: str) -> MockThetaSpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownFunction(
            f"{name!r} is not in the catalog; known names: {', '.join(sorted(CATALOG))}"
        ) from None


def list_catalog() -> list[MockThetaSpec]:
    return list(_ENTRIES)


# ---------------------------------------------------------------------------
# exact expansion
# ---------------------------------------------------------------------------

def factor_valuation(f: PochFactor, n: int) -> F:
    """Exact valuation of (a; q^step)_{L(n)} ** power."""
    L = f.length(n)
    if L >= 0:
        return F(0)
    m = -L
    front = (-f.argument(n)).exponent * (-m) + F(f.step) * (m * (m + 1) // 2)
    return front * f.power


def term_valuation(rule: TermRule, n: int) -> F:
    """Exact valuation of the n-th summand (reflected factors included)."""
    return rule.exponent(n) + sum((factor_valuation(f, n) for f in rule.factors), F(0))


def _factor_parts(f: PochFactor, n: int, window) -> tuple[Monomial, FracPowerSeries]:
    """Split (a;s)_L^p into an exact monomial front and a valuation-0 unit.

    Reflected symbols carry monomial fronts with large exponents that
    cancel across factors; combining fronts exactly keeps every series
    build on a window of size ~trunc.
    """
    L = f.length(n)
    arg = f.argument(n)
    s = mono(1, f.step)
    if L >= 0:
        base = pochhammer(arg, s, L, window)
        front = mono(1)
        flip = f.power < 0
    else:
        m = -L
        front = ((-arg) ** (-m) * s ** (m * (m + 1) // 2)) ** f.power
        base = pochhammer(arg ** -1 * s, s, m, window)
        flip = f.power > 0
    if flip:
        base = base.invert().truncate(window)
    unit = base
    for _ in range(abs(f.power) - 1):
        unit = unit * base
    return front, unit


def term_series(rule: TermRule, n: int, trunc) -> FracPowerSeries:
    """The n-th summand of a rule as an exact series (fresh build)."""
    val = term_valuation(rule, n)
    trunc = F(trunc)
    if val >= trunc:
        return FracPowerSeries.zero(trunc)   # exactly zero below trunc
    window = trunc - val + 1
    out = FracPowerSeries.one(window)
    front = Monomial(rule.scalar(n), *_frac_parts(rule.exponent(n)))
    for f in rule.factors:
        f_front, unit = _factor_parts(f, n, window)
        front = front * f_front
        out = out * unit
    return out.times_monomial(front).truncate(trunc)


def _frac_parts(e: F):
    return e.numerator, e.denominator


class TermWalker:
    """Incremental term builder: steps n by +-1 keeping unit products live.

    The state is the product over factors of the valuation-0 "unit" part
    (plain symbol for L >= 0, reflected denominator for L < 0) together
    with an exact scalar; the monomial front is recomputed per n.  Valid
    when no Pochhammer argument depends on n (a1 == 0 everywhere).
    """

    def __init__(self, rule: TermRule, n0: int, direction: int, trunc):
        self.rule = rule
        self.direction = direction
        self.trunc = F(trunc)
        self.window = self.trunc + 1
        self.n = n0
        self.scalar = F(1)
        self.unit = FracPowerSeries.one(self.window)
        self.frozen = False
        for f in rule.factors:
            L0 = f.length(n0)
            if L0 < 0:
                self._grow(f, 0, -L0, -f.power, reflected=True)
            else:
                self._grow(f, 0, L0, f.power, reflected=False)

    def _grow(self, f: PochFactor, j0: int, j1: int, power: int, reflected: bool):
        """Multiply the unit by factors j0..j1-1 of the (possibly reflected) symbol."""
        if reflected:
            arg = f.argument(self.n) ** -1 * mono(1, f.step)
        else:
            arg = f.argument(self.n)
        for j in range(j0, j1):
            m = arg * mono(1, f.step) ** j
            if m.exponent > 0:
                if m.exponent >= self.window:
                    continue
                for _ in range(abs(power)):
                    self.unit = (self.unit.times_one_minus(m) if power > 0
                                 else self.unit.times_inv_one_minus(m))
            elif m.exponent == 0:
                c = 1 - m.coeff
                if c == 0:
                    if power > 0:
                        self.unit = FracPowerSeries.zero(self.window)
                        continue
                    raise PoleInNegativeIndex(f"vanishing constant factor in {f}")
                self.scalar *= c ** power
            else:
                raise ValueError("unit factor with negative exponent; rule unsupported")

    def front(self) -> Monomial:
        rule, n = self.rule, self.n
        out = Monomial(rule.scalar(n) * self.scalar, *_frac_parts(rule.exponent(n)))
        for f in rule.factors:
            L = f.length(n)
            if L < 0:
                m = -L
                s = mono(1, f.step)
                out = out * ((-f.argument(n)) ** (-m) * s ** (m * (m + 1) // 2)) ** f.power
        return out

    def term(self) -> FracPowerSeries:
        if term_valuation(self.rule, self.n) >= self.trunc:
            self.frozen = True          # later |n| only raise the valuation
            return FracPowerSeries.zero(self.trunc)
        return self.unit.times_monomial(self.front()).truncate(self.trunc)

    def advance(self):
        n_new = self.n + self.direction
        if not self.frozen:
            for f in self.rule.factors:
                L_old, L_new = f.length(self.n), f.length(n_new)
                if L_old >= 0 and L_new >= 0:
                    lo, hi = sorted((L_old, L_new))
                    sign = 1 if L_new >= L_old else -1
                    self._grow(f, lo, hi, sign * f.power, reflected=False)
                elif L_old <= 0 and L_new <= 0:
                    lo, hi = sorted((-L_old, -L_new))
                    sign = 1 if -L_new >= -L_old else -1
                    self._grow(f, lo, hi, -sign * f.power, reflected=True)
                else:
                    raise ValueError("length sign change; rebuild required")
        self.n = n_new


def walker_ok(rule: TermRule, n0: int, direction: int) -> bool:
    """True when TermWalker can run this walk: n-free arguments and
    factor lengths that keep their sign along the whole walk."""
    for f in rule.factors:
        if f.a1 != 0 or f.len1 < 0:
            return False
        L0 = f.length(n0)
        if direction > 0 and L0 < 0:
            return False
        if direction < 0 and L0 > 0:
            return False
    return True


class NonconvergentExpansion(RuntimeError):
    pass


def sum_terms(rule: TermRule, start: int, direction: int, trunc,
              averaged: bool = False) -> FracPowerSeries:
    """Sum rule terms for n = start, start+dir, ... as an exact series.

    With ``averaged`` the partial sums are averaged pairwise (the Abel
    value); for sides whose term valuations grow this equals the plain
    sum, so both summation policies share this code path.
    """
    trunc = F(trunc)
    walker = TermWalker(rule, start, direction, trunc) if walker_ok(rule, start, direction) else None

    def term(n):
        if walker is not None:
            while walker.n < n if direction > 0 else walker.n > n:
                walker.advance()
            return walker.term()
        return term_series(rule, n, trunc)

    budget = 8 * int(trunc) + 64
    acc = FracPowerSeries.zero(trunc)
    n = start
    if averaged:
        t_cur = term(n)
        acc = acc + t_cur.scaled(F(1, 2))
        settled = 0
        for _ in range(budget):
            n += direction
            t_next = term(n)
            pair = (t_cur + t_next).scaled(F(1, 2))
            acc = acc + pair
            v = pair.valuation()
            if v is None or v >= trunc:
                settled += 1
                if settled >= 3:
                    return acc
            else:
                settled = 0
            t_cur = t_next
        raise NonconvergentExpansion(f"averaged tail stuck below order {trunc}")
    settled = 0
    for _ in range(budget):
        if term_valuation(rule, n) >= trunc:
            settled += 1
            if settled >= 3 and term_valuation(rule, n + direction) >= trunc:
                return acc
        else:
            settled = 0
            acc = acc + term(n)
        n += direction
    raise NonconvergentExpansion(f"terms stuck below order {trunc}")


def expand_mock(name: str, trunc) -> FracPowerSeries:
    """Exact truncated expansion of a catalog entry."""
    spec = get_spec(name)
    body = sum_terms(spec.rule, spec.start, +1, trunc,
                     averaged=spec.summation == AVERAGED)
    return body + spec.offset if spec.offset else body


# ---------------------------------------------------------------------------
# numeric evaluation (delegates to qnum)
# ---------------------------------------------------------------------------

def eval_mock(name: str, q, tol=None, precision: int = 128, ratio_threshold: float = 0.9):
    """Evaluate a catalog entry at a point |q| < 1.

    Returns a MockValue(value, terms) with |value - true| <= tol.  chi0/chi1
    are routed through their linear-combination forms, whose summands'
    denominators are numerically tame near roots of unity.
    """
    from . import qnum
    return qnum.eval_mock(name, q, tol=tol, precision=precision,
                          ratio_threshold=ratio_threshold)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _rule_json(rule: TermRule) -> dict:
    return {
        "coeff": str(rule.coeff),
        "alternating": rule.alt_sign,
        "q_exponent": [str(rule.e0), str(rule.e1), str(rule.e2)],
        "factors": [
            {"sign": f.sign, "a": [f.a0, f.a1], "step": f.step,
             "length": [f.len0, f.len1], "power": f.power}
            for f in rule.factors
        ],
    }


def catalog_json() -> str:
    doc = []
    for spec in _ENTRIES:
        entry = {
            "name": spec.name,
            "order": spec.order,
            "start": spec.start,
            "offset": str(spec.offset),
            "summation": spec.summation,
            "source": spec.source,
            "term": _rule_json(spec.rule),
        }
        if spec.eval_via:
            entry["eval_via"] = [
                {"coeff": str(c), "name": nm,
                 "transform": {"sign": tr[0], "power": tr[1], "qshift": tr[2]}}
                for c, nm, tr in spec.eval_via
            ]
        doc.append(entry)
    return json.dumps(doc, indent=2, sort_keys=False)
