"""Radial classification, closed forms, scans, and the proof-side invariants."""

from fractions import Fraction

import mpmath as mp
import pytest

from mockrad.errors import GridTooCoarse, NoApplicableCase
from mockrad.radial import (
    Policy,
    RootOfUnity,
    _poch_root,
    _tail_ok,
    check_limit,
    classify,
    closed_form,
    radial_scan,
    smallest_admissible_orders,
)

F = Fraction


# ---------------------------------------------------------------- classify

def test_classify_f0_order_4():
    case = classify("5:f0", RootOfUnity(1, 4))
    assert case.shape == "2k" and case.c == 1


def test_classify_psi0_order_3():
    case = classify("5:psi0", RootOfUnity(1, 3))
    assert case.shape == "2k-1"


def test_classify_phi0_order_6_has_no_case():
    with pytest.raises(NoApplicableCase):
        classify("5:phi0", RootOfUnity(1, 6))


def test_classify_chi0_both_branches():
    assert classify("5:chi0", RootOfUnity(1, 3)).c == 2
    assert classify("5:chi0", RootOfUnity(1, 2)).c == -1


def test_root_of_unity_validation():
    with pytest.raises(ValueError):
        RootOfUnity(2, 4)
    assert RootOfUnity(1, 4).order_class == ("4k", 1)
    assert RootOfUnity(1, 6).order_class == ("4k-2", 2)
    assert RootOfUnity(1, 5).order_class == ("2k-1", 3)


def test_smallest_admissible_orders():
    assert smallest_admissible_orders("5:f0") == [2, 4]
    assert smallest_admissible_orders("5:psi0") == [1, 3]
    assert smallest_admissible_orders("5:phi0") == [1, 3]
    assert smallest_admissible_orders("5:chi0") == [1, 2]
    assert smallest_admissible_orders("3:phi") == [4, 8]
    assert smallest_admissible_orders("3:nu") == [2, 6]
    assert smallest_admissible_orders("8:V0") == [1, 3]


# ---------------------------------------------------------------- closed forms

def closed(name, h, m):
    root = RootOfUnity(h, m)
    return closed_form(classify(name, root), root, precision=96)


def test_closed_form_hand_values():
    assert abs(closed("5:f0", 1, 2) - 2) < 1e-25
    assert abs(closed("5:psi0", 1, 1) + 1) < 1e-25
    assert abs(closed("5:chi0", 1, 2) - 5) < 1e-25
    assert abs(closed("3:f", 1, 2) - 4) < 1e-25


def test_closed_form_F0_cube_root():
    # Thm value at k=2 reduces by hand to zeta - zeta^2 = i sqrt(3)
    got = closed("5:F0", 1, 3)
    with mp.workprec(96):
        assert abs(got - mp.mpc(0, 1) * mp.sqrt(3)) < 1e-25


# ---------------------------------------------------------------- scan policy

def test_radial_scan_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        radial_scan("5:f0", RootOfUnity(1, 2), r_grid=[mp.mpf("0.9"), mp.mpf("0.99")])


def test_radial_scan_grid_range_checked():
    bad = [mp.mpf("0.5"), mp.mpf("0.9"), mp.mpf("1.5")]
    with pytest.raises(ValueError):
        radial_scan("5:f0", RootOfUnity(1, 2), r_grid=bad)


def test_wrong_closed_form_fails_policy():
    pol = Policy(j_lo=4, j_hi=8, tol=5e-2)
    report = radial_scan("5:f0", RootOfUnity(1, 2), policy=pol)
    residuals_ok = [abs(d - report.closed_form) for d in report.differences]
    residuals_bad = [abs(d - (report.closed_form + 1)) for d in report.differences]
    assert _tail_ok(residuals_ok, pol.tol)[0]
    assert not _tail_ok(residuals_bad, pol.tol)[0]


def test_check_limit_shallow_pass():
    pol = Policy(j_lo=4, j_hi=8, tol=5e-2, extend_to=8)
    rep = check_limit("6:lambda", RootOfUnity(1, 2), pol)
    assert rep.verdict == "pass"
    assert len(rep.residuals) == 5


def test_check_limit_skipped_verdict():
    rep = check_limit("5:phi0", RootOfUnity(1, 6), Policy())
    assert rep.verdict == "skipped"
    assert "no theorem case" in rep.detail


def test_report_serialization():
    pol = Policy(j_lo=4, j_hi=7, tol=1e-1, extend_to=7)
    rep = check_limit("6:mu", RootOfUnity(1, 2), pol)
    doc = rep.to_json_dict()
    assert doc["verdict"] == "pass"
    assert len(doc["rows"]) == 4
    csv_text = rep.to_csv()
    assert csv_text.splitlines()[0] == "r,re_diff,im_diff,residual"
    assert len(csv_text.splitlines()) == 5


# ---------------------------------------------------------------- proof invariants

@pytest.mark.parametrize("m", [3, 5, 7])
def test_geometric_regrouping_at_odd_roots(m):
    # sum_{n>=0} zeta^(n^2)/(-zeta;zeta)_n == 1 + 2 sum_{n=1}^{m} ...,
    # using the 2^N block collapse of the partial products
    root = RootOfUnity(1, m)
    with mp.workprec(120):
        finite = 1 + 2 * sum(root.power(n * n) / _poch_root(root, -1, 1, 1, n)
                             for n in range(1, m + 1))
        acc = mp.mpc(0)
        den = mp.mpc(1)
        n = 0
        while True:
            if n > 0:
                den *= 1 + root.power(n)
            t = root.power(n * n) / den
            acc += t
            if n > m and abs(t) < mp.mpf(2) ** -90:
                break
            n += 1
        assert abs(acc - finite) < mp.mpf(2) ** -80
        # the block collapse itself: (-z;z)_{m+n} = 2 (-z;z)_n
        for n in range(1, m):
            lhs = _poch_root(root, -1, 1, 1, m + n)
            rhs = 2 * _poch_root(root, -1, 1, 1, n)
            assert abs(lhs - rhs) < mp.mpf(2) ** -90


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_truncation_vanishing_at_even_roots(m):
    # zeta of order 2k: (-zeta; zeta)_n = 0 for all n >= k, since zeta^k = -1
    root = RootOfUnity(1, m)
    k = m // 2
    assert (root.h * k) % root.m == root.m // 2   # exact statement zeta^k = -1
    with mp.workprec(100):
        for n in range(k, k + 4):
            assert abs(_poch_root(root, -1, 1, 1, n)) < mp.mpf(2) ** -50
        assert abs(_poch_root(root, -1, 1, 1, k - 1)) > mp.mpf(2) ** -50
