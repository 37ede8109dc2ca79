"""
Diagnostics for unbounded supercaloric functions.

Integrability trends and the class 𝔅 / class 𝔐 classifier, infinity
sets, the measure functional, inequality checkers and blow-up rates.
"""

from .bumps import CutoffFunction, TestFunction, TestFunctionSum
from .inequalities import (
    caccioppoli_check,
    harnack_check,
    log_caccioppoli_check,
    sobolev_check,
    weak_harnack_check,
)
from .infinity_sets import blowup_fraction, infinity_set_full, infinity_set_vertical
from .integrability import (
    alpha_slice_bound,
    classify,
    gradient_lq_trend,
    lq_spacetime_trend,
    max_trend,
    slice_sup_trend,
)
from .measure import DiracEstimate, default_bump_family, dirac_mass_estimate, measure_functional
from .rates import RateFit, blowup_rate_fit, minorant_check, rate_liminf

__all__ = [
    "CutoffFunction",
    "TestFunction",
    "TestFunctionSum",
    "caccioppoli_check",
    "harnack_check",
    "log_caccioppoli_check",
    "sobolev_check",
    "weak_harnack_check",
    "blowup_fraction",
    "infinity_set_full",
    "infinity_set_vertical",
    "alpha_slice_bound",
    "classify",
    "gradient_lq_trend",
    "lq_spacetime_trend",
    "max_trend",
    "slice_sup_trend",
    "DiracEstimate",
    "default_bump_family",
    "dirac_mass_estimate",
    "measure_functional",
    "RateFit",
    "blowup_rate_fit",
    "minorant_check",
    "rate_liminf",
]
