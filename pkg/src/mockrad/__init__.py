"""Exact q-series engine and radial-limit evaluator for mock theta functions.

The package verifies, coefficient-exactly or to arbitrary precision, the
classical identities tying mock theta functions of orders 3, 5, 6 and 8
to modular objects through their bilateral series, and evaluates the
radial limits of mock-minus-modular differences at roots of unity against
closed finite-sum formulas.
"""

from .series import FracPowerSeries, Monomial, mono, pochhammer, first_mismatch
from .forms import (
    b_series,
    eta_series,
    euler_product,
    k_series,
    rr_series,
    theta4_series,
)
from .catalog import MockThetaSpec, catalog_json, eval_mock, expand_mock, list_catalog
from .bilateral import (
    IdentityReport,
    bilateral_combination,
    bilateral_direct,
    modular_product,
    verify_identity,
    watson_c,
)
from .klein import klein_lemma_residual, klein_point
from .radial import Policy, RadialReport, RootOfUnity, check_limit, classify, closed_form, radial_scan

__version__ = "0.1.0"

__all__ = [
    "FracPowerSeries", "Monomial", "mono", "pochhammer", "first_mismatch",
    "b_series", "eta_series", "euler_product", "k_series", "rr_series",
    "theta4_series",
    "MockThetaSpec", "catalog_json", "eval_mock", "expand_mock", "list_catalog",
    "IdentityReport", "bilateral_combination", "bilateral_direct",
    "modular_product", "verify_identity", "watson_c",
    "klein_lemma_residual", "klein_point",
    "Policy", "RadialReport", "RootOfUnity", "check_limit", "classify",
    "closed_form", "radial_scan",
    "__version__",
]
