"""
Positive radial solutions of Δ(U^m) + U/(m−1) = 0 on a ball with zero
boundary values, found by shooting on w = U^m.

The ODE w″ + ((n−1)/r) w′ = −w^{1/m}/(m−1) is integrated outward with a
fixed-step RK4 scheme from the series start at r = 0. The initial value
w(0) is bracketed by a geometric scan and refined by bisection; the zero of
the final shot, just past R, is moved onto R by the scaling symmetry.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.interpolate import CubicSpline

from ..config import get_settings
from ..core.base import PmeParams
from ..core.constants import CSV_HEADERS, NUMERICS_CONFIG
from ..core.exceptions import (
    DomainException,
    IntegrationException,
    ShootingException,
    ValidationException,
)
from ..utils.file_utils import read_csv_columns, write_csv


@dataclass(frozen=True, eq=False)
class GiantProfile:
    """Sampled elliptic profile U on [0, R]"""
    pme: PmeParams
    R: float
    r_grid: np.ndarray
    U_values: np.ndarray
    w0: float
    residual_max: float = float("nan")
    steps: int = field(default=0)
    # unscaled shot: U at R and the distance δ from R to its zero
    boundary_value: float = 0.0
    boundary_shift: float = 0.0
    boundary_error: float = 0.0

    def __post_init__(self):
        r = np.array(self.r_grid, dtype=float)
        U = np.array(self.U_values, dtype=float)
        if r.ndim != 1 or r.shape != U.shape or r.size < 2:
            raise ValidationException("Profile grid and values must be matching 1-D arrays", field="r_grid")
        if r[0] != 0.0 or not np.isclose(r[-1], self.R, rtol=1e-12, atol=0.0):
            raise ValidationException("Profile grid must run from 0 to R", field="r_grid")
        if np.any(np.diff(r) <= 0):
            raise ValidationException("Profile grid must be strictly increasing", field="r_grid")
        if np.any(U < 0) or not np.all(np.isfinite(U)):
            raise ValidationException("Profile values must be finite and nonnegative", field="U_values")
        if U[0] <= 0:
            raise ValidationException("Profile must be positive at the origin", field="U_values")
        if np.any(np.diff(U) >= 0):
            raise ValidationException("Profile must be strictly decreasing in r", field="U_values")
        if U[-1] > get_settings().PROFILE_TOL * U[0]:
            raise ValidationException("Profile must vanish at r = R", field="U_values")
        r.setflags(write=False)
        U.setflags(write=False)
        object.__setattr__(self, "r_grid", r)
        object.__setattr__(self, "U_values", U)

    @cached_property
    def w_values(self) -> np.ndarray:
        return self.U_values ** self.pme.m

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.r_grid, self.w_values, bc_type=((1, 0.0), "not-a-knot"))

    def _checked(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        if np.any(r > self.R * (1.0 + 1e-12)):
            raise DomainException(
                f"Radius outside profile domain [0, {self.R}]", point=float(np.max(r))
            )
        return np.minimum(r, self.R)

    def evaluate_w(self, r):
        return np.maximum(self._spline(self._checked(r)), 0.0)

    def evaluate(self, r):
        """U(r) from the cubic spline of w = U^m"""
        values = self.evaluate_w(r) ** (1.0 / self.pme.m)
        return float(values) if np.ndim(values) == 0 else values

    def evaluate_w_prime(self, r):
        r = self._checked(r)
        values = np.where(r > 0, self._spline(r, 1), 0.0)
        return float(values) if np.ndim(values) == 0 else values

    @property
    def U0(self) -> float:
        return float(self.U_values[0])

    def to_dict(self) -> dict:
        return {
            "pme": self.pme.to_dict(),
            "R": self.R,
            "points": int(self.r_grid.size),
            "w0": self.w0,
            "U0": self.U0,
            "residual_max": self.residual_max,
            "boundary_value": self.boundary_value,
            "boundary_shift": self.boundary_shift,
            "boundary_error": self.boundary_error,
        }


def _shoot(w0: float, pme: PmeParams, R: float, steps: int) -> Tuple[List[float], bool]:
    """Integrate from r = 0; returns samples and whether w reached 0 by R"""
    m, n = pme.m, pme.n
    p = 1.0 / m
    c = 1.0 / (m - 1.0)
    nm1 = n - 1.0
    h = R / steps
    half = 0.5 * h

    # series start w ≈ w0 − w0^{1/m} r² / (2n(m−1))
    src0 = w0 ** p * c
    w = w0 - src0 * h * h / (2.0 * n)
    v = -src0 * h / n
    ws = [w0, w]
    if w <= 0:
        return ws, True

    for i in range(1, steps):
        r = i * h
        # clamp w^{1/m} to 0 for w ≤ 0
        k1w = v
        k1v = -c * (w if w > 0 else 0.0) ** p - nm1 / r * v
        w2 = w + half * k1w
        v2 = v + half * k1v
        k2w = v2
        k2v = -c * (w2 if w2 > 0 else 0.0) ** p - nm1 / (r + half) * v2
        w3 = w + half * k2w
        v3 = v + half * k2v
        k3w = v3
        k3v = -c * (w3 if w3 > 0 else 0.0) ** p - nm1 / (r + half) * v3
        w4 = w + h * k3w
        v4 = v + h * k3v
        k4w = v4
        k4v = -c * (w4 if w4 > 0 else 0.0) ** p - nm1 / (r + h) * v4
        w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (math.isfinite(w) and math.isfinite(v)):
            raise IntegrationException(
                f"Non-finite state at r={r + h} while shooting from w0={w0}",
                details={"w0": w0, "r": r + h},
            )
        ws.append(w)
        if w <= 0:
            return ws, True
    return ws, False


def _bracket(pme: PmeParams, R: float, steps: int, w_seed: float) -> Tuple[float, float]:
    """Geometric scan w0 = 2^j w_seed until the zero radius straddles R"""
    limit = NUMERICS_CONFIG["shooting_scan_limit"]
    _, low = _shoot(w_seed, pme, R, steps)
    factor = 0.5 if not low else 2.0
    previous = w_seed
    for j in range(1, limit + 1):
        candidate = w_seed * factor ** j
        _, hits = _shoot(candidate, pme, R, steps)
        if hits != low:
            return (candidate, previous) if low is False else (previous, candidate)
        previous = candidate
    raise ShootingException(
        f"No shooting bracket found for R={R}",
        scanned_range=(w_seed * min(factor ** limit, 1.0), w_seed * max(factor ** limit, 1.0)),
    )


def solve_profile(
    pme: PmeParams,
    R: float = 1.0,
    tol: Optional[float] = None,
    steps: Optional[int] = None,
    w_seed: Optional[float] = None,
) -> GiantProfile:
    """Shooting solve of the elliptic profile on B(0, R)"""
    settings = get_settings()
    tol = settings.PROFILE_TOL if tol is None else tol
    steps = settings.PROFILE_STEPS if steps is None else int(steps)
    if R <= 0 or tol <= 0:
        raise ValidationException("Profile solve needs R > 0 and tol > 0", field="R")
    if steps < NUMERICS_CONFIG["min_profile_points"]:
        raise ValidationException(f"Too few shooting steps: {steps}", field="steps")
    if w_seed is None:
        w_seed = R ** (2.0 * pme.m / (pme.m - 1.0))

    lo, hi = _bracket(pme, R, steps, w_seed)
    logger.debug(f"Shooting bracket for m={pme.m}, n={pme.n}, R={R}: [{lo:.6g}, {hi:.6g}]")
    for _ in range(NUMERICS_CONFIG["shooting_bisection_limit"]):
        if hi - lo <= 1e-14 * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        _, hits = _shoot(mid, pme, R, steps)
        if hits:
            lo = mid
        else:
            hi = mid

    ws, hits = _shoot(hi, pme, R, steps)
    w = np.asarray(ws, dtype=float)
    if hits or w.size != steps + 1:
        raise ShootingException(
            f"Shooting did not reach R={R} with a positive solution",
            scanned_range=(lo, hi),
        )
    m = pme.m
    h = R / steps
    # w is linear at its zero r* = R + δ; w_R(r) = λ^{−2m/(m−1)} w(λr), λ = r*/R,
    # vanishes at R up to the quadratic term w″δ²/2
    slope = (3.0 * w[-1] - 4.0 * w[-2] + w[-3]) / (2.0 * h)
    if not slope < 0:
        raise ShootingException(
            f"Shot for R={R} is not decreasing at the wall (w′={slope:.3e})",
            scanned_range=(lo, hi),
        )
    curvature = (w[-1] - 2.0 * w[-2] + w[-3]) / (h * h)
    shift = float(-w[-1] / slope)
    lam = (R + shift) / R
    U_scale = lam ** (-2.0 / (m - 1.0))
    U = U_scale * w ** (1.0 / m)
    boundary_value = float(w[-1] ** (1.0 / m))
    boundary_error = float(U_scale * (0.5 * abs(curvature) * shift * shift) ** (1.0 / m))
    if boundary_error > tol * U[0]:
        raise ShootingException(
            f"Boundary value |U(R)| ≈ {boundary_error:.3e} exceeds tol·U(0) = {tol * U[0]:.3e}",
            scanned_range=(lo, hi),
            details={"U_R": boundary_value, "shift": shift, "U0": float(U[0])},
        )
    U[-1] = 0.0
    r_grid = np.linspace(0.0, R, steps + 1) / lam
    r_grid[-1] = R
    residual = _residual(pme, r_grid, U, settings.PROFILE_BOUNDARY_BAND)
    if residual > settings.PROFILE_RESIDUAL_LIMIT:
        logger.warning(
            f"Profile residual {residual:.3e} above limit {settings.PROFILE_RESIDUAL_LIMIT:.1e}; "
            f"increase the number of steps ({steps})"
        )
    profile = GiantProfile(
        pme=pme, R=float(R), r_grid=r_grid, U_values=U, w0=float(hi) * lam ** (-2.0 * m / (m - 1.0)),
        residual_max=residual, steps=steps, boundary_value=boundary_value,
        boundary_shift=shift, boundary_error=boundary_error,
    )
    logger.info(
        f"Solved elliptic profile m={pme.m}, n={pme.n}, R={R}: "
        f"w0={profile.w0:.12g}, U(0)={profile.U0:.12g}, residual={residual:.3e}, δ={shift:.2e}"
    )
    return profile


def _residual(pme: PmeParams, r: np.ndarray, U: np.ndarray, band: float) -> float:
    if r.size < NUMERICS_CONFIG["min_profile_points"]:
        raise ValidationException("Profile residual needs at least 5 grid points", field="r_grid")
    m, n = pme.m, pme.n
    w = U ** m
    h1 = r[1:-1] - r[:-2]
    h2 = r[2:] - r[1:-1]
    denom = h1 * h2 * (h1 + h2)
    w_rr = 2.0 * (h1 * w[2:] - (h1 + h2) * w[1:-1] + h2 * w[:-2]) / denom
    w_r = (h1 ** 2 * w[2:] - h2 ** 2 * w[:-2] + (h2 ** 2 - h1 ** 2) * w[1:-1]) / denom
    ri = r[1:-1]
    res = np.abs(w_rr + (n - 1.0) / ri * w_r + w[1:-1] ** (1.0 / m) / (m - 1.0))
    # w'''' blows up at the wall where U ~ (R − r)^{1/m}
    keep = ri < r[-1] * (1.0 - band)
    return float(np.max(res[keep])) if np.any(keep) else 0.0


def profile_residual(p: GiantProfile, band: Optional[float] = None) -> float:
    """Max interior |w″ + ((n−1)/r)w′ + w^{1/m}/(m−1)| away from the wall band"""
    band = get_settings().PROFILE_BOUNDARY_BAND if band is None else band
    return _residual(p.pme, p.r_grid, p.U_values, band)


def rescale_profile(p: GiantProfile, R_new: float) -> GiantProfile:
    """U_new(x) = (R_new/R)^{2/(m−1)} U(x R/R_new), no new solve"""
    if R_new <= 0:
        raise ValidationException("Rescaled radius must be positive", field="R_new")
    if R_new == p.R:
        return p
    m = p.pme.m
    s = R_new / p.R
    r_grid = p.r_grid * s
    r_grid[-1] = R_new
    U = p.U_values * s ** (2.0 / (m - 1.0))
    return GiantProfile(
        pme=p.pme,
        R=float(R_new),
        r_grid=r_grid,
        U_values=U,
        w0=p.w0 * s ** (2.0 * m / (m - 1.0)),
        residual_max=p.residual_max * s ** (2.0 / (m - 1.0)),
        steps=p.steps,
        boundary_value=p.boundary_value * s ** (2.0 / (m - 1.0)),
        boundary_shift=p.boundary_shift * s,
        boundary_error=p.boundary_error * s ** (2.0 / (m - 1.0)),
    )


def whole_space_lower_bound(
    profile: GiantProfile,
    x: float,
    t: float,
    t0: float,
    radii: Iterable[float],
) -> np.ndarray:
    """Lower bounds U(x/ρ)(ρ²/(t−t0))^{1/(m−1)} from giants on growing balls

    A function with total blow-up at t0 on R^n dominates each of these; the
    bounds grow like ρ^{2/(m−1)}, so no finite function can.
    """
    if t <= t0:
        raise ValidationException("Lower bound needs t > t0", field="t")
    m = profile.pme.m
    radii = np.asarray(list(radii), dtype=float)
    if np.any(radii <= 0):
        raise ValidationException("Scaling radii must be positive", field="radii")
    scaled = abs(x) / radii
    if np.any(scaled > profile.R):
        raise DomainException("Point outside some rescaled ball", point=float(x))
    return profile.evaluate(scaled) * (radii ** 2 / (t - t0)) ** (1.0 / (m - 1.0))


def profile_to_csv(p: GiantProfile, path: Union[str, Path]) -> Path:
    rows = zip(p.r_grid.tolist(), p.U_values.tolist())
    return write_csv(path, CSV_HEADERS["profile"], rows)


def profile_from_csv(path: Union[str, Path], pme: PmeParams) -> GiantProfile:
    columns = read_csv_columns(path, CSV_HEADERS["profile"])
    r, U = columns["r"], columns["U"]
    return GiantProfile(
        pme=pme,
        R=float(r[-1]),
        r_grid=r,
        U_values=U,
        w0=float(U[0] ** pme.m),
        residual_max=_residual(pme, r, U, get_settings().PROFILE_BOUNDARY_BAND),
        steps=int(r.size - 1),
    )
