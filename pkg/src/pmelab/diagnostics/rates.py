"""
Blow-up rates near a time slice and the friendly-giant minorant.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..core.base import BaseField, CheckReport
from ..core.constants import NUMERICS_CONFIG
from ..core.exceptions import PreconditionException, ValidationException
from ..fields.trajectory import as_field
from ..services.elliptic_profile import GiantProfile
from ..services.pme_solver import Trajectory

FieldLike = Union[BaseField, Trajectory]


@dataclass
class RateFit:
    """u(x0, t) ≈ amplitude·(t − t0)^exponent"""
    exponent: float
    amplitude: float
    samples: int
    decades: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "exponent": self.exponent,
            "amplitude": self.amplitude,
            "samples": self.samples,
            "decades": self.decades,
        }


def blowup_rate_fit(
    u: FieldLike,
    x0: float,
    t0: float,
    window: Optional[Tuple[float, float]] = None,
    samples: int = 32,
) -> RateFit:
    """Least-squares slope of log u(x0, t) against log(t − t0)

    Trajectories use their snapshots with t − t0 inside window; field
    functions are sampled geometrically across it.
    """
    if isinstance(u, Trajectory):
        lags = u.times - t0
        mask = lags > 0
        if window is not None:
            mask &= (lags >= window[0]) & (lags <= window[1])
        lags = lags[mask]
        sample_times = u.times[mask]
        field = as_field(u)
    else:
        if window is None:
            raise ValidationException("Field functions need a sampling window", field="window")
        if not 0 < window[0] < window[1]:
            raise ValidationException("Window must satisfy 0 < lo < hi", field="window")
        lags = np.geomspace(window[0], window[1], samples)
        sample_times = t0 + lags
        field = u

    if lags.size < NUMERICS_CONFIG["rate_min_samples"]:
        raise PreconditionException(
            f"Rate fit needs at least {NUMERICS_CONFIG['rate_min_samples']} samples, got {lags.size}",
            operation="blowup_rate_fit",
        )
    decades = float(np.log10(lags.max() / lags.min()))
    if decades < NUMERICS_CONFIG["rate_min_decades"]:
        raise PreconditionException(
            f"Rate fit needs one decade in t − t0, got {decades:.2f}", operation="blowup_rate_fit"
        )
    values = np.asarray(field.value(abs(x0), sample_times), dtype=float)
    if not np.all(values > 0):
        raise PreconditionException("Field must be positive near (x0, t0+)", operation="blowup_rate_fit")
    slope, intercept = np.polyfit(np.log(lags), np.log(values), 1)
    fit = RateFit(float(slope), float(np.exp(intercept)), int(lags.size), decades)
    logger.debug(f"Rate fit at x0={x0}: exponent {fit.exponent:.4f} over {decades:.1f} decades")
    return fit


def rate_liminf(u: FieldLike, radii: Sequence[float], t0: float, times: Sequence[float]) -> float:
    """min of u(x, t)(t − t0)^{1/(m−1)} over the sampled points

    Stays positive as the times approach t0 exactly when u blows up at
    the rate of a friendly giant everywhere on the sampled radii.
    """
    field = as_field(u)
    times = np.asarray(times, dtype=float)
    if np.any(times <= t0):
        raise ValidationException("Sample times must follow t0", field="times")
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(field.value(radii[None, :], times[:, None]), dtype=float)
    scale = (times - t0)[:, None] ** (1.0 / (field.pme.m - 1.0))
    return float(np.min(values * scale))


def minorant_check(
    u: FieldLike,
    profile: GiantProfile,
    t0: float = 0.0,
    window: Optional[Tuple[float, float]] = None,
    tol: float = 0.0,
    radii: Optional[Sequence[float]] = None,
    times: Optional[Sequence[float]] = None,
) -> CheckReport:
    """Check u(x, t) ≥ U(x)(t − t0)^{−1/(m−1)} − tol at sampled points

    Trajectories are checked at cell centers and snapshot times inside
    window; fields at radii × times. The field must blow up totally at t0.
    """
    m = profile.pme.m
    if isinstance(u, Trajectory):
        if profile.R > u.grid.R * (1.0 + 1e-12):
            raise PreconditionException("Profile domain exceeds the trajectory domain", operation="minorant_check")
        lo, hi = window if window is not None else (t0, np.inf)
        mask = (u.times > t0) & (u.times > lo) & (u.times < hi)
        if not np.any(mask):
            raise ValidationException("No snapshots inside the window", field="window")
        sample_times = u.times[mask]
        centers = u.grid.centers
        inside = centers < profile.R
        sample_radii = centers[inside]
        values = u.values[mask][:, inside]
    else:
        if profile.R > u.radius * (1.0 + 1e-12):
            raise PreconditionException("Profile domain exceeds the field domain", operation="minorant_check")
        if times is None:
            if window is None:
                raise ValidationException("Fields need sample times or a window", field="times")
            times = np.geomspace(window[0] - t0, window[1] - t0, 16) + t0
        sample_times = np.asarray(times, dtype=float)
        sample_radii = np.asarray(radii if radii is not None else np.linspace(0.0, 0.9 * profile.R, 32))
        values = np.asarray(u.value(sample_radii[None, :], sample_times[:, None]), dtype=float)

    inner = sample_radii[sample_radii <= 0.9 * profile.R]
    earliest = sample_times[: min(3, sample_times.size)]
    if inner.size == 0 or not rate_liminf(u, inner, t0, earliest) > 0:
        raise PreconditionException(
            f"No total blow-up at t0={t0}; the giant is not a minorant", operation="minorant_check"
        )

    bound = np.asarray(profile.evaluate(sample_radii), dtype=float)[None, :] * (
        (sample_times - t0)[:, None] ** (-1.0 / (m - 1.0))
    )
    deficit = float(np.max(bound - values))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, values / bound, np.inf)
    return CheckReport(
        name="minorant",
        lhs=deficit,
        rhs=tol,
        fitted_constant=float(np.min(ratio)),
        passed=bool(deficit <= tol),
        details={"points": int(values.size), "t0": t0, "t_first": float(sample_times[0])},
    )
