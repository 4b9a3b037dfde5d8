"""Radial limits at roots of unity against the closed finite-sum formulas.

Run:  python3 demos/radial_limits.py
"""

import mpmath as mp

from mockrad import Policy, RootOfUnity, check_limit, classify, closed_form, radial_scan

mp.mp.pretty = True

# f0 minus its bilateral series tends to 2 as q -> -1 radially
root = RootOfUnity(1, 2)           # zeta = e^(2 pi i / 2) = -1
case = classify("5:f0", root)
print(f"f0 at zeta = -1 falls under the '{case.label}' case;")
print("closed form:", mp.nstr(closed_form(case, root), 12), "\n")

report = radial_scan("5:f0", root, policy=Policy(j_lo=4, j_hi=10))
print("     r              f0(r z) - B(f0; r z)        residual")
for r, d, res in zip(report.r_grid, report.differences, report.residuals):
    print(f"  {mp.nstr(r, 10):14} {mp.nstr(d, 12):28} {mp.nstr(res, 4)}")

# phi0 has no theorem case at 6th roots of unity: the checker says so
rep = check_limit("5:phi0", RootOfUnity(1, 6))
print(f"\nphi0 at a primitive 6th root: verdict = {rep.verdict} ({rep.detail})")

# a complex root: F0 at the primitive cube root converges to i*sqrt(3)
root3 = RootOfUnity(1, 3)
rep = check_limit("5:F0", root3, Policy(j_lo=4, j_hi=10, tol=0.05))
print(f"\nF0 at e^(2 pi i/3): verdict = {rep.verdict};",
      "limit =", mp.nstr(rep.closed_form, 12))
