"""Coefficient-exact identity verification, three constructions per series.

Run:  python3 demos/verify_identities.py
"""

from mockrad import (
    FracPowerSeries,
    bilateral_combination,
    bilateral_direct,
    modular_product,
    mono,
    verify_identity,
    watson_c,
)

ORDER = 120

print(f"Watson's four combinations vanish identically (checked to q^{ORDER}):")
for i in (1, 2, 3, 4):
    print(f"    C{i}(q) == 0:", watson_c(i, ORDER).is_zero())

print(f"\nEach fifth-order bilateral series three ways, exact to q^{ORDER}:")
for name in ("5:f0", "5:f1", "5:F0", "5:F1"):
    comb = bilateral_combination(name, ORDER)
    r1 = verify_identity(comb, modular_product(name, ORDER), ORDER,
                         f"B({name}) combination", "modular product")
    r2 = verify_identity(comb, bilateral_direct(name, ORDER), ORDER,
                         f"B({name}) combination", "two-sided sum")
    print(f"    {name}: combination = product: {r1.status};"
          f" combination = direct sum: {r2.status}")

print("\nA deliberately perturbed pair reports its first mismatch:")
good = bilateral_combination("5:f0", 60)
bad = good + FracPowerSeries.from_monomial(mono(1, 7), 60)
report = verify_identity(good, bad, 50)
print("   ", report.status, "at exponent", report.first_mismatch[0])
