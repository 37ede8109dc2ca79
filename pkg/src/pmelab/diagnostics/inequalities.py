"""
Numerical checkers for the Harnack, weak Harnack, Caccioppoli and Sobolev
inequalities.

Each checker fits the constant the inequality needs on the given data and
repeats the evaluation at twice the resolution; refinement_stability is
the ratio of the larger to the smaller fitted constant.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from ..core.base import BaseField, CheckReport
from ..core.constants import NUMERICS_CONFIG
from ..core.exceptions import DomainException, PreconditionException, ValidationException
from ..fields.trajectory import as_field
from ..services.pme_solver import Trajectory
from .bumps import CutoffFunction
from .quadrature import SpaceTimeQuadrature, SpatialMesh, TimeMesh, uniform_nodes

FieldLike = Union[BaseField, Trajectory]
STABILITY_LIMIT = 2.0


def _stability(a: float, b: float) -> float:
    lo, hi = sorted((abs(a), abs(b)))
    if hi == 0.0:
        return 1.0
    if lo == 0.0 or not np.isfinite(hi):
        return float("inf")
    return hi / lo


def _inside(u: BaseField, x_extent: float, t_lo: float, t_hi: float) -> bool:
    f_lo, f_hi = u.t_range
    return x_extent <= u.radius * (1.0 + 1e-12) and t_lo >= f_lo and t_hi <= f_hi


@dataclass
class _Sampled:
    """Field and cut-off on a uniform midpoint mesh of the cut-off's support"""
    quad: SpaceTimeQuadrature
    u: np.ndarray
    du: np.ndarray
    zeta: np.ndarray
    dzeta: np.ndarray
    zeta_t: np.ndarray


def _sample(u: BaseField, zeta: CutoffFunction, cells: int, positive: bool = True) -> _Sampled:
    x_lo, x_hi = zeta.x_bounds
    t_lo, t_hi = zeta.t_bounds
    if not _inside(u, max(abs(x_lo), abs(x_hi)), t_lo, t_hi):
        raise DomainException("Cut-off support exceeds the field's domain", point=x_hi)
    n = u.pme.n
    if n > 1 and zeta.x_c != 0.0:
        raise PreconditionException("Radial cut-offs must be centered at the origin", operation="check")
    space = SpatialMesh.ball(n, zeta.x_c, zeta.rho, cells)
    time = TimeMesh.from_nodes(uniform_nodes(t_lo, t_hi, cells))
    quad = SpaceTimeQuadrature(space, time)
    coord = quad.X if n == 1 else quad.R
    values = quad.sample(u.value)
    if positive and not np.all(values > 0):
        raise PreconditionException(
            "Field must be strictly positive on the cut-off's support", operation="check"
        )
    du = quad.sample(u.grad) * (np.sign(quad.X) if n == 1 else 1.0)
    shape = quad.weights.shape
    return _Sampled(
        quad=quad,
        u=values,
        du=du,
        zeta=np.broadcast_to(zeta.value(coord, quad.T), shape),
        dzeta=np.broadcast_to(zeta.grad(coord, quad.T), shape),
        zeta_t=np.broadcast_to(zeta.zeta_t(coord, quad.T), shape),
    )


def _inf_over_ball(u: BaseField, x0: float, r: float, times: np.ndarray, samples: int) -> float:
    radii = np.linspace(max(0.0, abs(x0) - r), abs(x0) + r, samples)
    values = np.asarray(u.value(radii[None, :], np.atleast_1d(times)[:, None]), dtype=float)
    return float(np.min(values))


def _harnack_constants(
    u: BaseField,
    sample_points: Sequence[Tuple[float, float, float]],
    C2_grid: Sequence[float],
    samples: int,
) -> Tuple[Dict[float, float], Dict[float, Tuple[float, float]], int]:
    m = u.pme.m
    f_lo, f_hi = u.t_range
    c1_by_c2: Dict[float, float] = {}
    worst: Dict[float, Tuple[float, float]] = {}
    excluded = 0
    for C2 in C2_grid:
        ratios = []
        for x0, t0, r in sample_points:
            center = float(u.value(abs(x0), t0))
            if not center > 0:
                raise PreconditionException(
                    f"Harnack needs a positive solution, u({x0}, {t0}) = {center}", operation="harnack_check"
                )
            theta = C2 * r ** 2 / center ** (m - 1.0)
            if abs(x0) + 2.0 * r > u.radius or t0 - 2.0 * theta < f_lo or t0 + 2.0 * theta > f_hi:
                excluded += 1
                logger.warning(f"Harnack sample ({x0}, {t0}, {r}) leaves the domain for C2={C2}")
                continue
            inf = _inf_over_ball(u, x0, r, np.array([t0 + theta]), samples)
            if not inf > 0:
                raise PreconditionException(
                    "Harnack needs a positive solution on B(x0, r)", operation="harnack_check"
                )
            ratios.append((center / inf, center, inf))
        if ratios:
            ratio, center, inf = max(ratios)
            c1_by_c2[float(C2)] = ratio
            worst[float(C2)] = (center, inf)
    return c1_by_c2, worst, excluded


def harnack_check(
    u: FieldLike,
    sample_points: Sequence[Tuple[float, float, float]],
    C2_grid: Sequence[float] = (0.05, 0.1, 0.2),
    samples: Optional[int] = None,
) -> CheckReport:
    """Fit the smallest C1 with u(x0, t0) ≤ C1 inf_{B(x0, r)} u(·, t0 + θ)

    sample_points are (x0, t0, r); θ = C2 r²/u(x0, t0)^{m−1}.
    """
    u = as_field(u)
    samples = samples or NUMERICS_CONFIG["harnack_inf_samples"]
    if not sample_points or not C2_grid:
        raise ValidationException("Harnack check needs samples and a C2 grid", field="sample_points")
    coarse, worst, excluded = _harnack_constants(u, sample_points, C2_grid, samples)
    if not coarse:
        raise PreconditionException("Every Harnack sample left the domain", operation="harnack_check")
    fine, _, _ = _harnack_constants(u, sample_points, C2_grid, 2 * samples)
    best_c2 = min(coarse, key=lambda c: (coarse[c], c))
    C1 = fine[best_c2]
    stability = _stability(coarse[best_c2], C1)
    center, inf = worst[best_c2]
    return CheckReport(
        name="harnack",
        lhs=center,
        rhs=inf,
        fitted_constant=C1,
        passed=bool(np.isfinite(C1) and stability < STABILITY_LIMIT),
        refinement_stability=stability,
        details={
            "C2": best_c2,
            "C1_by_C2": {str(k): v for k, v in fine.items()},
            "excluded": excluded,
            "samples": len(sample_points),
        },
    )


def _ball_average(u: BaseField, x0: float, r: float, t0: float, cells: int) -> float:
    mesh = SpatialMesh.ball(u.pme.n, x0, r, cells)
    values = np.asarray(u.value(mesh.r, t0), dtype=float) * np.ones_like(mesh.r)
    return float(np.dot(values, mesh.weights) / np.sum(mesh.weights))


def _weak_harnack_frontier(
    u: BaseField,
    x0: float,
    r: float,
    t0: float,
    T: float,
    C1_grid: Sequence[float],
    cells: int,
) -> Tuple[float, Dict[float, float], Dict[float, float]]:
    m = u.pme.m
    avg = _ball_average(u, x0, r, t0, cells)
    c2_by_c1: Dict[float, float] = {}
    inf_by_c1: Dict[float, float] = {}
    for C1 in C1_grid:
        theta = min(T - t0, C1 * r ** 2 * avg ** (-(m - 1.0))) if avg > 0 else T - t0
        term = (C1 * r ** 2 / (T - t0)) ** (1.0 / (m - 1.0))
        times = np.linspace(t0 + theta / 2.0, t0 + theta, cells)
        inf_q = _inf_over_ball(u, x0, 4.0 * r, times, cells)
        excess = max(0.0, avg - term)
        if inf_q > 0:
            c2 = excess / inf_q
        else:
            c2 = 0.0 if excess == 0.0 else float("inf")
        c2_by_c1[float(C1)] = c2
        inf_by_c1[float(C1)] = inf_q
    return avg, c2_by_c1, inf_by_c1


def weak_harnack_check(
    u: FieldLike,
    x0: float,
    r: float,
    t0: float,
    T: Optional[float] = None,
    C1_grid: Sequence[float] = (0.1, 1.0, 10.0),
    cells: int = 64,
) -> CheckReport:
    """Fit C2 in ⨍_{B(x0,r)} u(·,t0) ≤ (C1 r²/(T−t0))^{1/(m−1)} + C2 inf_Q u for each C1

    The fitted constant is C2 at the smallest C1 of the grid.
    """
    u = as_field(u)
    T = u.t_range[1] if T is None else T
    if not np.isfinite(T):
        raise ValidationException("Weak Harnack needs a finite end time T", field="T")
    if r <= 0 or not t0 < T:
        raise PreconditionException("Weak Harnack needs r > 0 and t0 < T", operation="weak_harnack_check")
    if not _inside(u, abs(x0) + 8.0 * r, t0, T):
        raise PreconditionException(
            "B(x0, 8r) × (t0, T) must lie in the field's domain", operation="weak_harnack_check"
        )
    if u.pme.n > 1 and x0 != 0.0:
        raise PreconditionException(
            "Radial averages need x0 = 0 for n ≥ 2", operation="weak_harnack_check"
        )
    C1_grid = sorted(C1_grid)
    avg, coarse, infs = _weak_harnack_frontier(u, x0, r, t0, T, C1_grid, cells)
    _, fine, _ = _weak_harnack_frontier(u, x0, r, t0, T, C1_grid, 2 * cells)
    C1 = float(C1_grid[0])
    C2 = fine[C1]
    stability = _stability(coarse[C1], C2)
    term = (C1 * r ** 2 / (T - t0)) ** (1.0 / (u.pme.m - 1.0))
    return CheckReport(
        name="weak_harnack",
        lhs=avg,
        rhs=term + C2 * infs[C1],
        fitted_constant=C2,
        passed=bool(np.isfinite(C2) and stability < STABILITY_LIMIT),
        refinement_stability=stability,
        details={"C1": C1, "C2_by_C1": {str(k): v for k, v in fine.items()}, "T": T},
    )


def _caccioppoli_sides(s: _Sampled, m: float, eps: float) -> Tuple[float, float]:
    quad = s.quad
    weight = 1.0 / (eps * abs(1.0 - eps))
    grad_term = quad.integrate(m * s.u ** (m - eps - 2.0) * s.zeta ** 2 * s.du ** 2)
    sup_term = weight * float(np.max(quad.slice_integrals(s.u ** (1.0 - eps) * s.zeta ** 2)))
    rhs_grad = (m / eps ** 2) * quad.integrate(s.u ** (m - eps) * s.dzeta ** 2)
    rhs_time = weight * quad.integrate(s.u ** (1.0 - eps) * s.zeta * np.abs(s.zeta_t))
    return grad_term + sup_term, rhs_grad + rhs_time


def caccioppoli_check(
    u: FieldLike,
    zeta: CutoffFunction,
    eps: float,
    cells: int = 64,
) -> CheckReport:
    """Energy estimate with C1 = C2 = 1; the fitted constant is LHS/RHS"""
    if eps <= 0 or eps == 1.0:
        raise ValidationException("eps must be positive and different from 1", field="eps")
    u = as_field(u)
    m = u.pme.m
    lhs_c, rhs_c = _caccioppoli_sides(_sample(u, zeta, cells), m, eps)
    lhs, rhs = _caccioppoli_sides(_sample(u, zeta, 2 * cells), m, eps)
    fitted = lhs / rhs if rhs > 0 else float("inf")
    stability = _stability(lhs_c / rhs_c if rhs_c > 0 else float("inf"), fitted)
    return CheckReport(
        name="caccioppoli",
        lhs=lhs,
        rhs=rhs,
        fitted_constant=fitted,
        passed=bool(np.isfinite(lhs) and np.isfinite(fitted) and stability < STABILITY_LIMIT),
        refinement_stability=stability,
        details={"eps": eps, "cells": 2 * cells},
    )


def _log_caccioppoli_sides(s: _Sampled, m: float) -> Tuple[float, float]:
    quad = s.quad
    log_u = np.log(s.u)
    lhs = quad.integrate(m * s.u ** (m - 3.0) * s.zeta ** 2 * s.du ** 2) + float(
        np.max(np.abs(quad.slice_integrals(s.zeta ** 2 * log_u)))
    )
    rhs = 4.0 * m * quad.integrate(s.u ** (m - 1.0) * s.dzeta ** 2) + 4.0 * quad.integrate(
        s.zeta * np.abs(s.zeta_t) * np.abs(log_u)
    )
    return lhs, rhs


def log_caccioppoli_check(u: FieldLike, zeta: CutoffFunction, cells: int = 64) -> CheckReport:
    """Logarithmic energy estimate with the constants 4m and 4"""
    u = as_field(u)
    m = u.pme.m
    lhs_c, rhs_c = _log_caccioppoli_sides(_sample(u, zeta, cells), m)
    lhs, rhs = _log_caccioppoli_sides(_sample(u, zeta, 2 * cells), m)
    fitted = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else float("inf"))
    coarse = lhs_c / rhs_c if rhs_c > 0 else (0.0 if lhs_c == 0 else float("inf"))
    return CheckReport(
        name="log_caccioppoli",
        lhs=lhs,
        rhs=rhs,
        fitted_constant=fitted,
        passed=bool(lhs <= rhs and lhs_c <= rhs_c),
        refinement_stability=_stability(coarse, fitted),
        details={"C1": 4.0, "C2": 4.0, "cells": 2 * cells},
    )


def _sobolev_sides(s: _Sampled, p: float, r: float, q: float, exponent: float) -> Tuple[float, float]:
    quad = s.quad
    f = s.zeta * s.u
    df = s.zeta * s.du + s.u * s.dzeta
    lhs = quad.integrate(np.abs(f) ** q)
    gradient = quad.integrate(np.abs(df) ** p)
    sup = float(np.max(quad.slice_integrals(np.abs(f) ** r)))
    return lhs, gradient * sup ** exponent


def _sobolev_constant(lhs: float, rhs: float, q: float) -> float:
    if lhs == 0.0:
        return 0.0
    if rhs == 0.0:
        return float("inf")
    return (lhs / rhs) ** (1.0 / q)


def sobolev_check(
    w: FieldLike,
    zeta: CutoffFunction,
    p: float,
    r: float,
    cells: int = 64,
    exponent_mode: Optional[str] = None,
) -> CheckReport:
    """Fit C in ∬|ζw|^q ≤ C^q ∬|∇(ζw)|^p (sup_t ∫|ζw|^r)^e with q = p + pr/n

    e = q/n in "printed" mode and p/n in "balanced" mode.
    """
    if p < 1 or r <= 0:
        raise ValidationException("Sobolev check needs p ≥ 1 and r > 0", field="p")
    w = as_field(w)
    n = w.pme.n
    mode = exponent_mode or get_settings().SOBOLEV_EXPONENT_MODE
    if exponent_mode is None and mode not in ("printed", "balanced"):
        mode = "printed"
    if mode not in ("printed", "balanced"):
        raise ValidationException(f"Unknown exponent mode '{mode}'", field="exponent_mode")
    q = p + p * r / n
    exponent = q / n if mode == "printed" else p / n
    lhs_c, rhs_c = _sobolev_sides(_sample(w, zeta, cells, positive=False), p, r, q, exponent)
    lhs, rhs = _sobolev_sides(_sample(w, zeta, 2 * cells, positive=False), p, r, q, exponent)
    C = _sobolev_constant(lhs, rhs, q)
    stability = _stability(_sobolev_constant(lhs_c, rhs_c, q), C)
    return CheckReport(
        name="sobolev",
        lhs=lhs,
        rhs=rhs,
        fitted_constant=C,
        passed=bool(np.isfinite(C) and stability < STABILITY_LIMIT),
        refinement_stability=stability,
        details={"p": p, "r": r, "q": q, "exponent": exponent, "mode": mode},
    )
