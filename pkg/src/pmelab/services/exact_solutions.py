"""
Closed-form solutions of the porous medium equation.

Barenblatt source solution, separable friendly giant, the exponential
fast blow-up family built on the elliptic profile, and a pointwise
finite-difference residual of u_t − Δ(u^m) used as an oracle.
"""

from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import quad

from ..core.base import CheckReport, PmeParams
from ..core.constants import NUMERICS_CONFIG
from ..core.exceptions import (
    DomainException,
    PreconditionException,
    QuadratureException,
    ValidationException,
)
from .elliptic_profile import GiantProfile

ArrayLike = Union[float, np.ndarray]


def _as_output(values: np.ndarray):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class BarenblattParams:
    """Parameters of the self-similar source solution"""
    pme: PmeParams
    C: float = 1.0
    t_shift: float = 0.0
    center: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.C) or self.C <= 0:
            raise ValidationException(f"Barenblatt constant must be positive, got {self.C}", field="C")

    @property
    def lam(self) -> float:
        return barenblatt_lambda(self.pme)

    @property
    def k(self) -> float:
        """Coefficient λ(m−1)/(2mn) of |x|² in the profile bracket"""
        return barenblatt_k(self.pme)


# Growth functions f(t) with derivatives for the fast blow-up family
GROWTH_FUNCTIONS: Dict[str, Tuple[Callable, Callable]] = {
    "zero": (lambda t: np.zeros_like(np.asarray(t, dtype=float)),
             lambda t: np.zeros_like(np.asarray(t, dtype=float))),
    "inverse": (lambda t: 1.0 / np.asarray(t, dtype=float),
                lambda t: -1.0 / np.asarray(t, dtype=float) ** 2),
}


@dataclass(frozen=True)
class FastBlowupParams:
    """V(x,t) = U(x) exp(f(t)/(m−1)) over an elliptic profile U"""
    profile: GiantProfile
    f: Callable
    f_prime: Optional[Callable] = None

    @classmethod
    def named(cls, profile: GiantProfile, name: str) -> "FastBlowupParams":
        if name not in GROWTH_FUNCTIONS:
            raise ValidationException(
                f"Unknown growth function '{name}'. Available: {list(GROWTH_FUNCTIONS)}",
                field="f",
            )
        f, fp = GROWTH_FUNCTIONS[name]
        return cls(profile=profile, f=f, f_prime=fp)


class FastBlowupValue(NamedTuple):
    """Value of the fast blow-up field with an overflow flag"""
    value: ArrayLike
    saturated: Union[bool, np.ndarray]


def barenblatt_lambda(pme: PmeParams) -> float:
    return pme.n / (pme.n * (pme.m - 1.0) + 2.0)


def barenblatt_k(pme: PmeParams) -> float:
    lam = barenblatt_lambda(pme)
    return lam * (pme.m - 1.0) / (2.0 * pme.m * pme.n)


def barenblatt_value(bp: BarenblattParams, x: ArrayLike, t: ArrayLike):
    """Evaluate the Barenblatt solution, exactly 0 for t ≤ t_shift"""
    m, n = bp.pme.m, bp.pme.n
    lam, k = bp.lam, bp.k
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x_hat = np.abs(x - bp.center)
    t_hat = t - bp.t_shift
    alive = t_hat > 0
    safe_t = np.where(alive, t_hat, 1.0)
    # clamp before the fractional power
    bracket = np.maximum(bp.C - k * x_hat ** 2 / safe_t ** (2.0 * lam / n), 0.0)
    values = safe_t ** (-lam) * bracket ** (1.0 / (m - 1.0))
    return _as_output(np.where(alive, values, 0.0))


def barenblatt_grad_um(bp: BarenblattParams, x: ArrayLike, t: ArrayLike):
    """Radial derivative of 𝓑^m in closed form"""
    m, n = bp.pme.m, bp.pme.n
    lam, k = bp.lam, bp.k
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x_hat = x - bp.center
    t_hat = t - bp.t_shift
    alive = t_hat > 0
    safe_t = np.where(alive, t_hat, 1.0)
    scale = safe_t ** (-2.0 * lam / n)
    bracket = np.maximum(bp.C - k * x_hat ** 2 * scale, 0.0)
    grad = (
        safe_t ** (-lam * m)
        * (m / (m - 1.0))
        * bracket ** (1.0 / (m - 1.0))
        * (-2.0 * k * x_hat * scale)
    )
    return _as_output(np.where(alive, grad, 0.0))


def barenblatt_support_radius(bp: BarenblattParams, t: float) -> float:
    if t <= bp.t_shift:
        raise ValidationException(
            f"Barenblatt solution vanishes identically for t={t} ≤ t_shift={bp.t_shift}",
            field="t",
        )
    return float(np.sqrt(bp.C / bp.k) * (t - bp.t_shift) ** (bp.lam / bp.pme.n))


def barenblatt_mass(bp: BarenblattParams, t: float, rtol: float = 1e-12) -> float:
    """Total mass ∫ 𝓑(x, t) dx via adaptive radial quadrature"""
    radius = barenblatt_support_radius(bp, t)
    omega, n = bp.pme.omega, bp.pme.n

    def integrand(r: float) -> float:
        return omega * r ** (n - 1) * barenblatt_value(bp, r + bp.center, t)

    value, error = quad(integrand, 0.0, radius, epsabs=0.0, epsrel=rtol, limit=200)
    if not np.isfinite(value) or error > max(1e3 * rtol, 1e-9) * abs(value):
        raise QuadratureException(
            f"Barenblatt mass quadrature did not converge (estimate {error:.3e})",
            error_estimate=error,
        )
    return float(value)


def barenblatt_mass_exponent(pme: PmeParams) -> float:
    """Mass scales as C^{1/(m−1) + n/2}"""
    return 1.0 / (pme.m - 1.0) + pme.n / 2.0


def barenblatt_c_for_mass(pme: PmeParams, mass: float) -> float:
    """Profile constant C whose Barenblatt solution carries the given mass"""
    if mass <= 0:
        raise ValidationException("Mass must be positive", field="mass")
    unit_mass = barenblatt_mass(BarenblattParams(pme, 1.0), 1.0)
    return float((mass / unit_mass) ** (1.0 / barenblatt_mass_exponent(pme)))


def giant_value(profile: GiantProfile, t0: float, x: ArrayLike, t: ArrayLike):
    """U(x)(t − t0)^{−1/(m−1)} for t > t0 and 0 otherwise"""
    m = profile.pme.m
    t = np.asarray(t, dtype=float)
    U = np.asarray(profile.evaluate(x), dtype=float)
    alive = t > t0
    dt = np.where(alive, t - t0, 1.0)
    return _as_output(np.where(alive, U * dt ** (-1.0 / (m - 1.0)), 0.0))


def giant_grad_um(profile: GiantProfile, t0: float, x: ArrayLike, t: ArrayLike):
    m = profile.pme.m
    t = np.asarray(t, dtype=float)
    dw = np.asarray(profile.evaluate_w_prime(x), dtype=float)
    alive = t > t0
    dt = np.where(alive, t - t0, 1.0)
    return _as_output(np.where(alive, dw * dt ** (-m / (m - 1.0)), 0.0))


def fast_blowup_value(fb: FastBlowupParams, x: ArrayLike, t: ArrayLike) -> FastBlowupValue:
    """U(x) e^{f(t)/(m−1)}, saturating at the largest finite double"""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainException("Fast blow-up family is defined for t > 0 only", point=float(np.min(t)))
    m = fb.profile.pme.m
    U = np.asarray(fb.profile.evaluate(x), dtype=float)
    big = np.finfo(float).max
    with np.errstate(over="ignore", invalid="ignore"):
        growth = np.exp(np.asarray(fb.f(t), dtype=float) / (m - 1.0))
        values = np.where(U > 0, U * growth, 0.0)
    saturated = (U > 0) & (~np.isfinite(values) | (values > big))
    if np.any(saturated):
        logger.warning(f"Fast blow-up value saturated at {int(np.sum(saturated))} points")
    values = np.where(saturated, big, values)
    if values.ndim == 0:
        return FastBlowupValue(float(values), bool(saturated))
    return FastBlowupValue(values, saturated)


def fast_blowup_grad_um(fb: FastBlowupParams, x: ArrayLike, t: ArrayLike):
    m = fb.profile.pme.m
    t = np.asarray(t, dtype=float)
    dw = np.asarray(fb.profile.evaluate_w_prime(x), dtype=float)
    with np.errstate(over="ignore"):
        growth = np.exp(m * np.asarray(fb.f(t), dtype=float) / (m - 1.0))
    return _as_output(np.minimum(dw * growth, np.finfo(float).max))


def pme_residual_pointwise(
    u: Callable,
    x: float,
    t: float,
    h: float,
    pme: Optional[PmeParams] = None,
) -> float:
    """Centered difference of u_t − Δ_radial(u^m); ≥ 0 means supersolution-like

    Points closer to the origin than h use the even reflection
    u(−r) = u(r); at r = 0 the Laplacian is n·∂_rr.
    """
    pme = pme or getattr(u, "pme", None)
    if pme is None:
        raise ValidationException("Equation parameters are required for the residual", field="pme")
    if h <= 0 or x < 0:
        raise ValidationException("Residual needs h > 0 and x ≥ 0", field="h")
    m, n = pme.m, pme.n

    def w(r: float) -> float:
        return float(u(abs(r), t)) ** m

    u_t = (float(u(x, t + h)) - float(u(x, t - h))) / (2.0 * h)
    w_c, w_p, w_m = w(x), w(x + h), w(x - h)
    if x == 0.0:
        lap = n * 2.0 * (w_p - w_c) / h ** 2
    else:
        w_rr = (w_p - 2.0 * w_c + w_m) / h ** 2
        w_r = (w_p - w_m) / (2.0 * h)
        lap = w_rr + (n - 1.0) / x * w_r
    return u_t - lap


def fast_blowup_condition_check(
    f: Callable,
    f_prime: Callable,
    t_grid: Sequence[float],
    tol: float = 0.0,
    spot_checks: int = 5,
) -> CheckReport:
    """Check f′(t) + e^{f(t)} ≥ −tol on a time grid"""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValidationException("Empty time grid", field="t_grid")

    rtol = NUMERICS_CONFIG["derivative_check_rtol"]
    indices = np.unique(np.linspace(0, t_grid.size - 1, min(spot_checks, t_grid.size)).astype(int))
    for i in indices:
        ti = float(t_grid[i])
        step = NUMERICS_CONFIG["derivative_check_step"] * max(abs(ti), 1e-3)
        fd = (float(f(ti + step)) - float(f(ti - step))) / (2.0 * step)
        fp = float(f_prime(ti))
        if abs(fd - fp) > rtol * max(abs(fp), 1.0):
            raise PreconditionException(
                f"Derivative input inconsistent at t={ti}: finite difference {fd}, given {fp}",
                operation="fast_blowup_condition_check",
            )

    with np.errstate(over="ignore"):
        condition = np.asarray(f_prime(t_grid), dtype=float) + np.exp(
            np.asarray(f(t_grid), dtype=float)
        )
    worst = int(np.argmin(condition))
    minimum = float(condition[worst])
    return CheckReport(
        name="fast_blowup_condition",
        lhs=-tol,
        rhs=minimum,
        fitted_constant=minimum,
        passed=bool(minimum >= -tol),
        details={"t_min": float(t_grid[worst]), "points": int(t_grid.size)},
    )
