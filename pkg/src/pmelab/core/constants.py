"""
Constants definition
"""

# Logging related constants
LOG_CONFIG = {
    "level": "INFO",
    "format": "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} | {message}",
    "rotation": "1 day",
    "retention": "30 days",
}

# Exit codes of the command-line surface
EXIT_CODES = {
    "success": 0,
    "check_failure": 1,
    "config_error": 2,
    "numerical_abort": 3,
    "inconclusive": 4,
}

# CSV headers of every artifact written by the lab
CSV_HEADERS = {
    "trajectory": ["t", "r", "u"],
    "profile": ["r", "U"],
    "mass": ["t", "mass", "support_radius"],
    "experiment": [
        "k",
        "a_k",
        "direction",
        "slice_integral",
        "T_k",
        "rate_bound_ok",
        "label",
    ],
    "convergence": ["N", "l1_error", "relative_l1_error", "order"],
}

# Numerical defaults shared by the solvers and diagnostics
NUMERICS_CONFIG = {
    "min_cells": 8,
    "min_profile_points": 5,
    "dirac_min_shapes": 5,
    "shooting_scan_limit": 200,
    "shooting_bisection_limit": 200,
    "derivative_check_rtol": 1e-6,
    "derivative_check_step": 1e-4,
    "harnack_inf_samples": 64,
    "rate_min_samples": 5,
    "rate_min_decades": 1.0,
}

# Default test function family used for the dirac-mass identification
DIRAC_BUMP_FAMILY = [
    {"rho": 1.0, "tau": 1.0, "power": 3},
    {"rho": 0.5, "tau": 0.5, "power": 3},
    {"rho": 2.0, "tau": 0.25, "power": 4},
    {"rho": 0.75, "tau": 2.0, "power": 3},
    {"rho": 1.5, "tau": 1.0, "power": 5},
]

REPORT_SCHEMA_VERSION = 1

# Dichotomy family thresholds
DICHOTOMY_CONFIG = {
    "bound_radius": 0.25,
    "slice_radius": 0.5,
    "min_slice_growth": 4.0,
    # (k^n/a_k)^{m−1} must drop at least this much across the family
    "blowup_ratio_drop": 0.25,
    "ratio_convergence_rtol": 0.05,
    "pairing_rtol": 0.03,
    "pairing_radii": [0.5, 1.0, 2.0],
    "measure_time": 0.005,
}
