"""Bilateral series three ways: linear combination, two-sided sum, modular product.

For each supported function M the bilateral series B(M;q) is built

  * as the linear combination of catalog expansions printed in the source
    identities (``bilateral_combination``),
  * as the literal two-sided sum over n in Z with negative indices rewritten
    through the Pochhammer reflection rule (``bilateral_direct``), and
  * as the modular product (``modular_product``) where one is on record.

``verify_identity`` compares exact rational coefficients only.  Sides of a
two-sided sum whose summands do not tend to zero termwise are summed by
averaging consecutive partial sums; for formally convergent sides the
averaging is the identity, so one code path serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .catalog import CATALOG, _pf, _rule, expand_mock, sum_terms
from .errors import InsufficientTruncation, NonconvergentBilateral, UnknownFunction
from .forms import euler_product, eta_series, k_series, rr_series, theta4_series
from .series import FracPowerSeries, Monomial, first_mismatch, mono, pochhammer

F = Fraction


# ---------------------------------------------------------------------------
# recipes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    """coeff * q^qshift * M(sign * q^power) with M a catalog entry."""
    coeff: F
    name: str
    sign: int = 1
    power: int = 1
    qshift: int = 0


@dataclass(frozen=True)
class BilateralRecipe:
    name: str
    combination: tuple[Component, ...]
    offset: F = F(0)
    variant: str = "standard"          # "modified" for the chi recipes
    direct: bool = True                # two-sided sum converges formally


def _c(coeff, name, sign=1, power=1, qshift=0):
    return Component(F(coeff), name, sign, power, qshift)


RECIPES: dict[str, BilateralRecipe] = {r.name: r for r in [
    BilateralRecipe("5:f0", (_c(1, "5:f0"), _c(2, "5:psi0"))),
    BilateralRecipe("5:f1", (_c(1, "5:f1"), _c(2, "5:psi1"))),
    BilateralRecipe("5:psi0", (_c(1, "5:psi0"), _c(F(1, 2), "5:f0"))),
    BilateralRecipe("5:psi1", (_c(1, "5:psi1"), _c(F(1, 2), "5:f1"))),
    BilateralRecipe("5:F0", (_c(1, "5:F0"), _c(1, "5:phi0", sign=-1)), offset=F(-1)),
    BilateralRecipe("5:F1", (_c(1, "5:F1"), _c(-1, "5:phi1", sign=-1, qshift=-1))),
    BilateralRecipe("5:phi0", (_c(1, "5:phi0"), _c(1, "5:F0", sign=-1)), offset=F(-1)),
    BilateralRecipe("5:phi1", (_c(1, "5:phi1"), _c(1, "5:F1", sign=-1, qshift=1))),
    # modified bilateral series for the chi's; components refer to bilaterals
    BilateralRecipe("5:chi0", (_c(2, "5:F0"), _c(-1, "5:phi0", sign=-1)),
                    variant="modified", direct=False),
    BilateralRecipe("5:chi1", (_c(2, "5:F1"), _c(1, "5:phi1", sign=-1, qshift=-1)),
                    variant="modified", direct=False),
    BilateralRecipe("3:phi", (_c(1, "3:phi"), _c(2, "3:psi"))),
    BilateralRecipe("3:psi", (_c(1, "3:psi"), _c(F(1, 2), "3:phi"))),
    BilateralRecipe("3:nu", (_c(1, "3:nu"), _c(1, "3:nu", sign=-1))),
    BilateralRecipe("6:lambda", (_c(1, "6:lambda"), _c(2, "6:rho"))),
    BilateralRecipe("6:mu", (_c(1, "6:mu"), _c(2, "6:sigma"))),
    BilateralRecipe("6:phi", (_c(1, "6:phi"), _c(2, "6:nu"))),
    BilateralRecipe("6:psi", (_c(1, "6:psi"), _c(2, "6:xi"))),
    BilateralRecipe("6:rho", (_c(1, "6:rho"), _c(F(1, 2), "6:lambda"))),
    BilateralRecipe("6:sigma", (_c(1, "6:sigma"), _c(F(1, 2), "6:mu"))),
    BilateralRecipe("6:nu", (_c(1, "6:nu"), _c(F(1, 2), "6:phi"))),
    BilateralRecipe("6:xi", (_c(1, "6:xi"), _c(F(1, 2), "6:psi"))),
    BilateralRecipe("8:S0", (_c(1, "8:S0"), _c(2, "8:T0"))),
    BilateralRecipe("8:S1", (_c(1, "8:S1"), _c(2, "8:T1"))),
    BilateralRecipe("8:T0", (_c(1, "8:T0"), _c(F(1, 2), "8:S0"))),
    BilateralRecipe("8:T1", (_c(1, "8:T1"), _c(F(1, 2), "8:S1"))),
    # symmetrized combinations; the plain two-sided sum is not this object
    BilateralRecipe("8:V0", (_c(1, "8:V0"), _c(1, "8:V0", sign=-1)),
                    offset=F(1), direct=False),
    BilateralRecipe("8:V1", (_c(1, "8:V1"), _c(-1, "8:V1", sign=-1)), direct=False),
]}


# recorded from the source lemmas; nothing here is proved by this package
WEIGHT_LEVEL = {
    **{n: "weight 1/2, level Gamma_1(20)" for n in ("5:f0", "5:f1", "5:psi0", "5:psi1")},
    **{n: "weight 1/2, level Gamma_1(10)" for n in ("5:phi0", "5:phi1", "5:F0", "5:F1",
                                                    "5:chi0", "5:chi1")},
    **{n: "weight 1/2, level Gamma_0(4)" for n in ("3:phi", "3:psi", "3:nu")},
    **{n: "weight 1/2 (level not recorded in source)"
       for n in ("6:lambda", "6:mu", "6:phi", "6:psi", "6:rho", "6:sigma",
                 "6:nu", "6:xi", "8:S0", "8:S1", "8:T0", "8:T1", "8:V0", "8:V1")},
}


def get_recipe(name: str) -> BilateralRecipe:
    try:
        return RECIPES[name]
    except KeyError:
        raise UnknownFunction(
            f"no bilateral recipe for {name!r}; known: {', '.join(sorted(RECIPES))}"
        ) from None


# ---------------------------------------------------------------------------
# combination form
# ---------------------------------------------------------------------------

def _component_series(comp: Component, trunc, builder) -> FracPowerSeries:
    need = F(trunc) - comp.qshift
    need = -((-need.numerator) // need.denominator)  # ceil
    need = max(2, -(-need // comp.power))
    s = builder(comp.name, need)
    if comp.sign != 1 or comp.power != 1:
        s = s.substitute_power(comp.sign, comp.power)
    if comp.qshift:
        s = s.times_monomial(mono(1, comp.qshift))
    return s.scaled(comp.coeff)


def bilateral_combination(name: str, trunc) -> FracPowerSeries:
    """B(M;q) (or the modified variant for the chi's) as a linear combination."""
    recipe = get_recipe(name)
    builder = bilateral_combination if recipe.variant == "modified" else expand_mock
    acc = FracPowerSeries.zero(trunc) + recipe.offset
    for comp in recipe.combination:
        acc = acc + _component_series(comp, trunc, builder)
    return acc.truncate(trunc)


# ---------------------------------------------------------------------------
# direct two-sided sum
# ---------------------------------------------------------------------------

DIRECT_SUPPORTED = frozenset(n for n, r in RECIPES.items() if r.direct)


def bilateral_direct(name: str, trunc) -> FracPowerSeries:
    """B(M;q) as the literal sum over n in Z via the reflection rule.

    Both tails are summed with averaged partial sums: this is the plain
    value wherever the plain sum converges formally, and the Abel value on
    the oscillating sides the source identities implicitly assign.
    """
    recipe = get_recipe(name)
    if name not in DIRECT_SUPPORTED:
        raise NonconvergentBilateral(
            f"the two-sided sum for {name} is not a (formal) series on any half-plane")
    spec = CATALOG[name]
    positive = sum_terms(spec.rule, spec.start, +1, trunc, averaged=True)
    negative = sum_terms(spec.rule, spec.start - 1, -1, trunc, averaged=True)
    return positive + negative + spec.offset


# ---------------------------------------------------------------------------
# modular products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """Infinite-product / theta building block of a modular product."""
    kind: str          # eps | theta4 | K | G | H | jtp3 | eta
    m: int = 1         # scale: atom evaluated at q^m (base b for jtp3)
    a: int = 0         # jtp3 only: (s q^a; q^b)(s q^(b-a); q^b)(q^b; q^b)
    sign: int = 1      # jtp3 only


@dataclass(frozen=True)
class PTerm:
    coeff: F
    qshift: F
    num: tuple[tuple[Atom, int], ...]
    den: tuple[tuple[Atom, int], ...] = ()


@dataclass(frozen=True)
class SubstProduct:
    """coeff * q^qshift * P(sign * q^power) for an existing product P."""
    base: str
    sign: int = 1
    power: int = 1
    qshift: int = 0
    coeff: F = F(1)


ProductExpr = Union[tuple, SubstProduct]

_eps = lambda m: Atom("eps", m)
_th4 = lambda m: Atom("theta4", m)
_K = lambda m: Atom("K", m)
_G = lambda m: Atom("G", m)
_H = lambda m: Atom("H", m)
_eta = lambda m: Atom("eta", m)


PRODUCTS: dict[str, ProductExpr] = {
    "5:f0": (PTerm(F(1), F(0), ((_th4(1), 1), (_G(1), 1))),
             PTerm(F(4), F(1), ((_K(2), 1), (_H(4), 1)))),
    "5:f1": (PTerm(F(-1), F(0), ((_th4(1), 1), (_H(1), 1))),
             PTerm(F(4), F(0), ((_K(2), 1), (_G(4), 1)))),
    "5:psi0": SubstProduct("5:f0", coeff=F(1, 2)),
    "5:psi1": SubstProduct("5:f1", coeff=F(1, 2)),
    "5:F0": (PTerm(F(1), F(0), ((_eps(5), 1), (_G(2), 1), (_H(1), 1)), ((_H(2), 1),)),
             PTerm(F(-1), F(1), ((_K(5), 1), (_H(2), 1)))),
    "5:F1": (PTerm(F(3), F(0), ((_K(5), 1), (_G(2), 1))),
             PTerm(F(-1), F(0), ((_H(1), 2), (_eps(5), 1)), ((_G(1), 1),))),
    "5:phi0": SubstProduct("5:F0", sign=-1),
    "5:phi1": SubstProduct("5:F1", sign=-1, qshift=1),
    "5:chi0": SubstProduct("5:F0"),
    "5:chi1": SubstProduct("5:F1"),
    "3:phi": (PTerm(F(1), F(1, 24), ((_eta(2), 7),), ((_eta(1), 3), (_eta(4), 3))),),
    "3:psi": SubstProduct("3:phi", coeff=F(1, 2)),
    "3:nu": (PTerm(F(2), F(-1, 3), ((_eta(4), 3),), ((_eta(2), 2),)),),
    # the only order-6 modular product on record
    "6:lambda": (PTerm(F(1), F(0), ((_eps(1), 2), (Atom("jtp3", 6, 1, 1), 1)), ((_eps(2), 2),)),
                 PTerm(F(2), F(0), ((_eps(2), 4), (Atom("jtp3", 6, 1, -1), 1)),
                       ((_eps(1), 2), (_eps(4), 2)))),
}


def _atom_series(atom: Atom, trunc) -> FracPowerSeries:
    if atom.kind == "eps":
        return euler_product(atom.m, trunc)
    if atom.kind == "eta":
        return eta_series(atom.m, trunc)
    if atom.kind == "theta4":
        return theta4_series(int(trunc), self_check=False).substitute_power(1, atom.m) \
            if atom.m != 1 else theta4_series(int(trunc), self_check=False)
    if atom.kind == "K":
        s = k_series(int(trunc), self_check=False)
        return s.substitute_power(1, atom.m) if atom.m != 1 else s
    if atom.kind in ("G", "H"):
        need = -(-int(trunc) // atom.m) + 1
        s = rr_series(atom.kind, "product", need)
        return s.substitute_power(1, atom.m) if atom.m != 1 else s
    if atom.kind == "jtp3":
        b, a, s = atom.m, atom.a, atom.sign
        return (pochhammer(mono(s, a), mono(1, b), None, trunc)
                * pochhammer(mono(s, b - a), mono(1, b), None, trunc)
                * pochhammer(mono(1, b), mono(1, b), None, trunc))
    raise ValueError(f"unknown atom kind {atom.kind!r}")


def modular_product(name: str, trunc) -> FracPowerSeries:
    """Exact expansion of the recorded modular-product expression.

    The result must reduce to integer exponents; a leftover fractional
    power signals a wrong recipe (ResidualFractionalExponent).
    """
    if name not in PRODUCTS:
        raise UnknownFunction(f"no modular product recorded for {name!r}")
    expr = PRODUCTS[name]
    if isinstance(expr, SubstProduct):
        need = F(trunc) - expr.qshift
        need = max(2, -(-need // expr.power))
        base = modular_product(expr.base, need)
        out = base.substitute_power(expr.sign, expr.power) if (expr.sign, expr.power) != (1, 1) else base
        if expr.qshift:
            out = out.times_monomial(mono(1, expr.qshift))
        return out.scaled(expr.coeff).truncate(trunc)
    acc = FracPowerSeries.zero(trunc)
    for term in expr:
        margin = max(F(0), -term.qshift) + 1
        window = F(trunc) + margin
        s = FracPowerSeries.one(window)
        for atom, p in term.num:
            s = s * _atom_series(atom, window) ** p
        for atom, p in term.den:
            s = s * (_atom_series(atom, window) ** p).invert()
        s = s.times_monomial(Monomial(term.coeff, term.qshift.numerator, term.qshift.denominator))
        acc = acc + s.truncate(trunc)
    return acc.reduce_to_integer()


# ---------------------------------------------------------------------------
# identity reports
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    lhs_name: str
    rhs_name: str
    verified_order: F
    status: str                      # "Verified" | "Mismatch"
    first_mismatch: Optional[tuple] = None   # (exponent, lhs coeff, rhs coeff)

    def to_json_dict(self) -> dict:
        doc = {
            "lhs": self.lhs_name,
            "rhs": self.rhs_name,
            "verified_order": str(self.verified_order),
            "status": self.status,
        }
        if self.first_mismatch is not None:
            e, ca, cb = self.first_mismatch
            doc["first_mismatch"] = {"exponent": str(e), "lhs": str(ca), "rhs": str(cb)}
        return doc


def verify_identity(lhs: FracPowerSeries, rhs: FracPowerSeries, min_order,
                    lhs_name: str = "lhs", rhs_name: str = "rhs") -> IdentityReport:
    """Exact coefficient comparison up to the common truncation order."""
    common = min(lhs.known_order, rhs.known_order)
    if common < min_order:
        raise InsufficientTruncation(
            f"common order {common} < required {min_order} for {lhs_name} = {rhs_name}")
    bad = first_mismatch(lhs, rhs)
    if bad is None:
        return IdentityReport(lhs_name, rhs_name, common, "Verified")
    return IdentityReport(lhs_name, rhs_name, common, "Mismatch", bad)


# ---------------------------------------------------------------------------
# Watson identities and the Fine-derived relations
# ---------------------------------------------------------------------------

def watson_c(i: int, trunc) -> FracPowerSeries:
    """The four Watson combinations C1..C4; each is identically zero."""
    T = int(trunc)
    if i == 1:
        return (expand_mock("5:f0", T)
                + expand_mock("5:F0", -(-T // 2) + 1).substitute_power(1, 2).scaled(2)
                - 2
                - theta4_series(T, self_check=False).substitute_power(-1, 1)
                * rr_series("G", "sum", T).substitute_power(-1, 1)).truncate(T)
    if i == 2:
        return (expand_mock("5:phi0", -(-T // 2) + 1).substitute_power(-1, 2)
                + expand_mock("5:psi0", T)
                - theta4_series(T, self_check=False).substitute_power(-1, 1)
                * rr_series("G", "sum", T).substitute_power(-1, 1)).truncate(T)
    if i == 3:
        return (expand_mock("5:phi0", -(-T // 2) + 1).substitute_power(-1, 2).scaled(2)
                - expand_mock("5:f0", T)
                - theta4_series(T, self_check=False) * rr_series("G", "sum", T)).truncate(T)
    if i == 4:
        return (expand_mock("5:psi0", T)
                - expand_mock("5:F0", -(-T // 2) + 1).substitute_power(1, 2)
                + 1
                - (k_series(T, self_check=False).substitute_power(1, 2)
                   * rr_series("H", "sum", -(-T // 4) + 1).substitute_power(1, 4))
                .times_monomial(mono(1, 1))).truncate(T)
    raise ValueError("Watson identities are numbered 1..4")


def _atom_json(atom: Atom) -> dict:
    doc = {"kind": atom.kind, "scale": atom.m}
    if atom.kind == "jtp3":
        doc["offset"] = atom.a
        doc["sign"] = atom.sign
    return doc


def recipes_json() -> list:
    """Bilateral recipes in the catalog's expression grammar."""
    out = []
    for name in sorted(RECIPES):
        recipe = RECIPES[name]
        entry = {
            "name": name,
            "variant": "modified" if recipe.variant == "modified" else "standard",
            "offset": str(recipe.offset),
            "two_sided_supported": recipe.direct,
            "modular": WEIGHT_LEVEL[name],
            "combination": [
                {"coeff": str(comp.coeff), "name": comp.name,
                 "transform": {"sign": comp.sign, "power": comp.power,
                               "qshift": comp.qshift}}
                for comp in recipe.combination
            ],
        }
        expr = PRODUCTS.get(name)
        if isinstance(expr, SubstProduct):
            entry["modular_product"] = {
                "base": expr.base, "coeff": str(expr.coeff),
                "transform": {"sign": expr.sign, "power": expr.power,
                              "qshift": expr.qshift},
            }
        elif expr is not None:
            entry["modular_product"] = [
                {"coeff": str(term.coeff), "qshift": str(term.qshift),
                 "numerator": [dict(_atom_json(a), power=p) for a, p in term.num],
                 "denominator": [dict(_atom_json(a), power=p) for a, p in term.den]}
                for term in expr
            ]
        out.append(entry)
    return out


# term rules for the two-sided 1psi1 instances (base q^2, z = q)
RULE_1PSI1_PHI = _rule(0, 1, 0, [_pf(-1, 0, 2, 0, 1, 1)])   # sum q^n (-1; q^2)_n
RULE_1PSI1_NU = _rule(0, 1, 0, [_pf(-1, 1, 2, 0, 1, 1)])    # sum q^n (-q; q^2)_n


def one_psi_one_instance(which: str, trunc) -> FracPowerSeries:
    """Two-sided sums whose product sides are the order-3 eta quotients."""
    rule = {"phi": RULE_1PSI1_PHI, "nu": RULE_1PSI1_NU}[which]
    return (sum_terms(rule, 0, +1, trunc, averaged=True)
            + sum_terms(rule, -1, -1, trunc, averaged=True))


# Fine-derived single-sided relations for the order-3 functions
RULE_FINE_PSI = _rule(1, 1, 0, [_pf(-1, 2, 2, 0, 1, 1)], coeff=2)    # 2q sum q^n (-q^2;q^2)_n
RULE_FINE_PHI = _rule(0, 0, 0, [_pf(1, 1, 2, 0, 1, 1)], alt=True)    # sum (-1)^n (q;q^2)_n
RULE_FINE_NU = _rule(0, 1, 0, [_pf(-1, 1, 2, 0, 1, 1)])              # sum q^n (-q;q^2)_n


def fine_relations(trunc) -> list[tuple[str, FracPowerSeries, FracPowerSeries]]:
    """The three single-sided rewrites of the order-3 functions.

    Returns (label, lhs, rhs) triples; lhs is the catalog side, rhs the
    transformed sum (the phi relation needs averaged summation).
    """
    return [
        ("2*psi(q)", expand_mock("3:psi", trunc).scaled(2),
         sum_terms(RULE_FINE_PSI, 0, +1, trunc)),
        ("phi(q)/2", expand_mock("3:phi", trunc).scaled(F(1, 2)),
         sum_terms(RULE_FINE_PHI, 0, +1, trunc, averaged=True)),
        ("nu(-q)", expand_mock("3:nu", trunc).substitute_power(-1, 1).truncate(trunc),
         sum_terms(RULE_FINE_NU, 0, +1, trunc)),
    ]
