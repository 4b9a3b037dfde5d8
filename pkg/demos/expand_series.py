"""Exact expansions: mock theta functions, bilateral series, classical forms.

Run:  python3 demos/expand_series.py
"""

from fractions import Fraction

from mockrad import (
    bilateral_combination,
    eta_series,
    expand_mock,
    list_catalog,
    modular_product,
    rr_series,
)


def show(label, series, count=8):
    head = ", ".join(f"{c}*q^{e}" for e, c in list(series.items())[:count])
    print(f"{label}:\n    {head} + ...\n")


print("The catalog holds", len(list_catalog()), "mock theta functions:")
print("   ", ", ".join(spec.name for spec in list_catalog()), "\n")

# Ramanujan's fifth-order f0 and its bilateral completion f0 + 2 psi0
show("f0(q)", expand_mock("5:f0", 30))
show("B(f0; q) = f0 + 2 psi0", bilateral_combination("5:f0", 30))
show("theta4*G + 4q K(q^2) H(q^4)  (the same modular form, as a product)",
     modular_product("5:f0", 30))

# third-order f, the function of Ramanujan's radial-limit claim
show("f(q) (third order)", expand_mock("3:f", 30))

# classical pieces live on a fractional exponent lattice when needed
show("eta(tau) = q^(1/24) (q;q)_inf", eta_series(1, 6))
show("Rogers-Ramanujan G (sum side)", rr_series("G", "sum", 30))

# every coefficient is an exact rational; nothing is floating point here
b = bilateral_combination("6:rho", 20)
print("B(rho; q) of order six starts with", b.coefficient(0), "+",
      b.coefficient(1), "q + ...   (exact Fractions:",
      repr(Fraction(b.coefficient(1))), ")")
