"""
End-to-end constructions on top of the solver

- the k-indexed dichotomy family v_k with v_k(·, 0) = χ_{B(0,1/k)} on B(0, 1),
  compared against a shifted Barenblatt solution and un-rescaled by a_k
- the comparison harness for ordered pairs and sub-cylinders
- the friendly-giant minorant scenario
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import quad

from ..config import get_settings
from ..core.base import (
    CheckReport,
    ClassKind,
    ClassLabel,
    Direction,
    PmeParams,
    RefinementTrend,
    TrendVerdict,
)
from ..core.constants import CSV_HEADERS, DICHOTOMY_CONFIG, NUMERICS_CONFIG
from ..core.exceptions import (
    CheckFailedException,
    ComparisonViolationException,
    InconclusiveException,
    PreconditionException,
    ValidationException,
)
from ..diagnostics.bumps import TestFunction
from ..diagnostics.rates import minorant_check
from ..utils.file_utils import write_csv, write_json
from .elliptic_profile import GiantProfile, solve_profile
from .exact_solutions import (
    BarenblattParams,
    barenblatt_c_for_mass,
    barenblatt_k,
    barenblatt_lambda,
    barenblatt_support_radius,
    barenblatt_value,
)
from .pme_solver import (
    Field,
    Grid1D,
    SolveConfig,
    Trajectory,
    field_from_function,
    indicator_field,
    l1_distance,
    slice_integral,
    solve_ivp_many,
)


@dataclass(frozen=True)
class ARule:
    """a_k = coefficient·k^power"""
    coefficient: float = 1.0
    power: float = 1.0

    def __post_init__(self):
        if not self.coefficient > 0:
            raise ValidationException("a_k coefficient must be positive", field="a_rule")

    def __call__(self, k: int) -> float:
        return float(self.coefficient * float(k) ** self.power)

    def to_dict(self) -> Dict[str, float]:
        return {"coefficient": self.coefficient, "power": self.power}


@dataclass(frozen=True)
class DichotomyConfig:
    pme: PmeParams
    k_values: Tuple[int, ...] = ()
    a_rule: ARule = ARule()
    C0: Optional[float] = None
    cells: Optional[int] = None
    samples: int = 16
    cfl_safety: Optional[float] = None

    def __post_init__(self):
        settings = get_settings()
        ks = tuple(int(k) for k in (self.k_values or settings.EXPERIMENT_K_VALUES))
        object.__setattr__(self, "k_values", ks)
        if self.C0 is None:
            object.__setattr__(self, "C0", default_c0(self.pme))
        if self.cells is None:
            object.__setattr__(self, "cells", settings.EXPERIMENT_CELLS)
        if self.cfl_safety is None:
            object.__setattr__(self, "cfl_safety", settings.CFL_SAFETY)

        if any(k < 2 for k in ks):
            raise ValidationException("Family members need k ≥ 2", field="k_values")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValidationException("k_values must be strictly increasing", field="k_values")
        if not self.C0 > 0:
            raise ValidationException("C0 must be positive", field="C0")
        if self.cells < NUMERICS_CONFIG["min_cells"]:
            raise ValidationException(f"Too few cells: {self.cells}", field="cells")
        if self.cells * DICHOTOMY_CONFIG["bound_radius"] < 1 or self.cells < 2 * ks[-1]:
            raise ValidationException(
                f"{self.cells} cells cannot resolve B(0, 1/{ks[-1]})", field="cells"
            )
        if self.samples < 2:
            raise ValidationException("Need at least two snapshots per member", field="samples")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pme": self.pme.to_dict(),
            "k_values": list(self.k_values),
            "a_rule": self.a_rule.to_dict(),
            "C0": self.C0,
            "cells": self.cells,
            "samples": self.samples,
            "cfl_safety": self.cfl_safety,
        }


@dataclass(frozen=True)
class ExampleConstants:
    """Shifted Barenblatt data of one family member

    𝓑(x, t) = (t + t0)^{−λ}[C − κ|x|²(t + t0)^{−2λ/n}]₊^{1/(m−1)} vanishes on
    |x| = 1/k at t = 0 and on |x| = 1 at t = θ.
    """
    pme: PmeParams
    k: int
    C0: float
    beta: float
    C: float
    t0: float
    theta: float
    printed_theta: float

    @property
    def kappa(self) -> float:
        return barenblatt_k(self.pme)

    @property
    def barenblatt(self) -> BarenblattParams:
        return BarenblattParams(self.pme, self.C, t_shift=-self.t0)

    @property
    def bound_constant(self) -> float:
        """c with 𝓑(x, θ) ≥ c k^{−n} on B(0, 1/4)"""
        m, n = self.pme.m, self.pme.n
        e = 1.0 / (m - 1.0)
        inside = 1.0 - DICHOTOMY_CONFIG["bound_radius"] ** 2
        return float(self.C0 ** (n / 2.0 + e) * (self.kappa * inside) ** e)

    @property
    def bound(self) -> float:
        return self.bound_constant * float(self.k) ** (-self.pme.n)

    def bracket_residuals(self) -> Tuple[float, float]:
        """Brackets at (1/k, 0) and (1, θ); both vanish"""
        n = self.pme.n
        lam = barenblatt_lambda(self.pme)
        at_start = self.C - self.kappa * self.k ** -2.0 * self.t0 ** (-2.0 * lam / n)
        at_theta = self.C - self.kappa * (self.theta + self.t0) ** (-2.0 * lam / n)
        return float(at_start), float(at_theta)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "C0": self.C0,
            "beta": self.beta,
            "C": self.C,
            "t0": self.t0,
            "theta": self.theta,
            "printed_theta": self.printed_theta,
            "kappa": self.kappa,
            "bound_constant": self.bound_constant,
        }


def default_c0(pme: PmeParams) -> float:
    """C0 with 𝓑(0, 0) = C0^{n/2 + 1/(m−1)} κ^{1/(m−1)} = 1 for every k"""
    e = 1.0 / (pme.m - 1.0)
    return float(barenblatt_k(pme) ** (-e / (pme.n / 2.0 + e)))


def example_constants(pme: PmeParams, k: int, C0: float) -> ExampleConstants:
    if k < 1:
        raise ValidationException("k must be at least 1", field="k")
    if not C0 > 0:
        raise ValidationException("C0 must be positive", field="C0")
    m, n = pme.m, pme.n
    lam = barenblatt_lambda(pme)
    kappa = barenblatt_k(pme)
    beta = (m - 1.0) * n
    scale = C0 ** (-n / (2.0 * lam))
    C = C0 * kappa * float(k) ** (-2.0 * beta * lam / n)
    # n/λ = β + 2, so the vanishing condition at |x| = 1/k gives k^{−2}
    t0 = scale * float(k) ** -2.0
    theta = scale * (float(k) ** beta - float(k) ** -2.0)
    printed_theta = scale * float(k) ** beta * (1.0 - float(k) ** (n / lam))
    return ExampleConstants(pme, int(k), float(C0), beta, C, t0, theta, printed_theta)


@dataclass
class MemberResult:
    """One solved member v_k with its comparison record"""
    constants: ExampleConstants
    trajectory: Trajectory
    barenblatt: Trajectory
    tolerance: float
    comparison_deficit: float
    bound_min: float
    initial_slice: float

    @property
    def k(self) -> int:
        return self.constants.k

    @property
    def bound_ok(self) -> bool:
        return bool(self.bound_min >= self.constants.bound - self.tolerance)

    def slice_at(self, time: float, radius: float) -> float:
        return slice_integral(self.trajectory.at(time), radius)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constants": self.constants.to_dict(),
            "tolerance": self.tolerance,
            "comparison_deficit": self.comparison_deficit,
            "bound": self.constants.bound,
            "bound_min": self.bound_min,
            "bound_ok": self.bound_ok,
            "initial_slice": self.initial_slice,
            "steps": self.trajectory.steps,
        }


@lru_cache(maxsize=64)
def _solve_member(
    pme: PmeParams,
    C0: float,
    cells: int,
    cfl_safety: float,
    samples: int,
    k: int,
    extra_times: Tuple[float, ...],
) -> MemberResult:
    consts = example_constants(pme, k, C0)
    bp = consts.barenblatt
    grid = Grid1D.radial(1.0, cells, pme.n)
    v0 = indicator_field(grid, pme, 1.0 / k)
    exact0 = field_from_function(grid, pme, lambda r: barenblatt_value(bp, r, 0.0))
    b0 = v0.with_values(np.minimum(exact0.values, v0.values))

    theta = consts.theta
    times = np.concatenate(([0.0], np.geomspace(theta * 1e-3, theta, samples), extra_times))
    times = sorted(set(float(t) for t in times))
    cfg = SolveConfig(t_end=times[-1], snapshot_times=times, cfl_safety=cfl_safety)
    v_traj, b_traj = solve_ivp_many([v0, b0], cfg)

    checked = [i for i, t in enumerate(v_traj.times) if t <= theta]
    exact = np.vstack([barenblatt_value(bp, grid.centers, v_traj.times[i]) for i in checked])
    tolerance = 2.0 * float(np.max(np.abs(b_traj.values[checked] - exact)))
    gap = exact - v_traj.values[checked]
    snap, cell = np.unravel_index(int(np.argmax(gap)), gap.shape)
    deficit = float(gap[snap, cell])
    if deficit > tolerance:
        raise ComparisonViolationException(
            f"v_{k} falls below the shifted Barenblatt by {deficit:.3e} (tolerance {tolerance:.3e})",
            snapshot=int(checked[snap]),
            cell=int(cell),
            details={"k": k, "time": float(v_traj.times[checked[snap]])},
        )

    inner = grid.centers < DICHOTOMY_CONFIG["bound_radius"]
    bound_min = float(np.min(v_traj.at(theta).values[inner]))
    result = MemberResult(
        constants=consts,
        trajectory=v_traj,
        barenblatt=b_traj,
        tolerance=tolerance,
        comparison_deficit=deficit,
        bound_min=bound_min,
        initial_slice=slice_integral(v0),
    )
    if not result.bound_ok:
        logger.warning(
            f"v_{k}(·, θ) = {bound_min:.4e} on B(0, 1/4) is below c k^-n = {consts.bound:.4e}"
        )
    logger.info(f"Member k={k}: θ={theta:.4g}, {v_traj.steps} steps, deficit {deficit:.3e}")
    return result


def run_dichotomy_member(
    cfg: DichotomyConfig, k: int, extra_times: Sequence[float] = ()
) -> MemberResult:
    """Solve v_k on B(0, 1) and compare it with the shifted Barenblatt on (0, θ)"""
    extras = tuple(sorted(float(t) for t in extra_times))
    if any(t <= 0 for t in extras):
        raise ValidationException("Extra snapshot times must be positive", field="extra_times")
    return _solve_member(cfg.pme, cfg.C0, cfg.cells, cfg.cfl_safety, cfg.samples, int(k), extras)


@dataclass
class DichotomyResult:
    direction: Direction
    label: ClassLabel
    members: List[MemberResult]
    a_values: List[float]
    evidence: Dict[str, Any] = field(default_factory=dict)
    config: Optional[DichotomyConfig] = None

    @property
    def rows(self) -> List[List[Any]]:
        m = self.members[0].constants.pme.m if self.members else 2.0
        slices = self.evidence.get("slice_integrals", [])
        rows = []
        for member, a_k, s in zip(self.members, self.a_values, slices):
            T_k = member.constants.theta * a_k ** (1.0 - m)
            rows.append(
                [member.k, a_k, self.direction.value, s, T_k, member.bound_ok, self.label.label.value]
            )
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction": self.direction.value,
            "label": self.label.to_dict(),
            "members": [m.to_dict() for m in self.members],
            "a_values": self.a_values,
            "evidence": self.evidence,
            "config": self.config.to_dict() if self.config else None,
        }


def _ratios(cfg: DichotomyConfig, direction: Direction) -> List[float]:
    m, n = cfg.pme.m, cfg.pme.n
    if direction == Direction.BLOWUP:
        return [(k ** n / cfg.a_rule(k)) ** (m - 1.0) for k in cfg.k_values]
    return [cfg.a_rule(k) / k ** n for k in cfg.k_values]


def _trend_label(trend: RefinementTrend, expected: TrendVerdict, label: ClassKind) -> ClassLabel:
    if trend.verdict != expected:
        raise InconclusiveException(
            f"Slice integrals across k are {trend.verdict.value}, expected {expected.value}",
            trend=trend,
        )
    return ClassLabel(label=label, q=1.0, evidence=trend)


def giant_rate_constants(members: Sequence[MemberResult], m: float) -> List[float]:
    """c_k = min_{B(0, 1/4)} v_k(·, θ) θ^{1/(m−1)} for each member

    u_k(x, T_k) ≥ c_k T_k^{−1/(m−1)}, so the family keeps a giant rate only
    while min_k c_k is positive and finite.
    """
    constants = [mem.bound_min * mem.constants.theta ** (1.0 / (m - 1.0)) for mem in members]
    bad = [mem.k for mem, c in zip(members, constants) if not (np.isfinite(c) and c > 0.0)]
    if bad:
        raise CheckFailedException(
            f"Giant-rate constant is not positive and finite for k in {bad}",
            failures=bad,
            details={"rate_constants": constants},
        )
    return constants


def _classify_blowup(cfg: DichotomyConfig) -> DichotomyResult:
    ratios = _ratios(cfg, Direction.BLOWUP)
    if any(b >= a for a, b in zip(ratios, ratios[1:])):
        raise PreconditionException(
            "(k^n/a_k)^{m−1} must decrease along k_values", operation="classify_dichotomy_limit"
        )
    if len(ratios) >= get_settings().TREND_MIN_LEVELS and ratios[-1] > DICHOTOMY_CONFIG["blowup_ratio_drop"] * ratios[0]:
        raise PreconditionException(
            f"(k^n/a_k)^{{m−1}} only drops to {ratios[-1] / ratios[0]:.3f} of its first value",
            operation="classify_dichotomy_limit",
        )

    m = cfg.pme.m
    members = [run_dichotomy_member(cfg, k) for k in cfg.k_values]
    a_values = [cfg.a_rule(k) for k in cfg.k_values]
    # u_k(x, T_k) = a_k v_k(x, θ) with T_k = θ a_k^{1−m}
    slices = [
        a * mem.slice_at(mem.constants.theta, DICHOTOMY_CONFIG["slice_radius"])
        for mem, a in zip(members, a_values)
    ]
    failures = [mem.k for mem in members if not mem.bound_ok]
    if failures:
        raise CheckFailedException(
            f"u_k(·, T_k) misses the giant-rate bound for k in {failures}", failures=failures
        )
    rate_constants = giant_rate_constants(members, m)
    growth = slices[-1] / slices[0]
    if any(b < a for a, b in zip(slices, slices[1:])):
        logger.warning("Slice integrals are not monotone in k")
    if len(slices) > 1 and growth < DICHOTOMY_CONFIG["min_slice_growth"]:
        logger.warning(f"Slice integrals grow only by {growth:.2f} across the family")

    trend = RefinementTrend.from_levels(
        list(zip(cfg.k_values, slices)), quantity="slice integral over B(0, 1/2) at T_k"
    )
    label = _trend_label(trend, TrendVerdict.DIVERGENT, ClassKind.CLASS_M)
    evidence = {
        "ratios": ratios,
        "slice_integrals": slices,
        "slice_growth": growth,
        "rate_constants": rate_constants,
        "rate_constant_min": min(rate_constants),
    }
    return DichotomyResult(Direction.BLOWUP, label, members, a_values, evidence, cfg)


def _pairing(pme: PmeParams, k: int, a_k: float, rho: float) -> float:
    """∫ a_k χ_{B(0,1/k)} φ with φ the bump of radius rho at t = 0"""
    phi = TestFunction(rho=rho)
    value, _ = quad(
        lambda r: pme.omega * r ** (pme.n - 1) * phi.value(r, 0.0),
        0.0,
        min(1.0 / k, rho),
        epsabs=0.0,
        epsrel=1e-12,
    )
    return float(a_k * value)


def _classify_measure(cfg: DichotomyConfig) -> DichotomyResult:
    ratios = _ratios(cfg, Direction.MEASURE)
    if len(ratios) >= 2 and abs(ratios[-1] - ratios[-2]) > DICHOTOMY_CONFIG["ratio_convergence_rtol"] * ratios[-1]:
        raise PreconditionException(
            f"a_k/k^n does not settle: {ratios[-2]:.4g} then {ratios[-1]:.4g}",
            operation="classify_dichotomy_limit",
        )
    pme = cfg.pme
    a = ratios[-1]
    mass = a * pme.ball_volume(1.0)
    k_last = cfg.k_values[-1]

    pairings = {}
    for rho in DICHOTOMY_CONFIG["pairing_radii"]:
        target = mass * float(TestFunction(rho=rho).value(0.0, 0.0))
        pairings[rho] = (_pairing(pme, k_last, cfg.a_rule(k_last), rho), target)
    missed = [
        rho for rho, (got, target) in pairings.items()
        if abs(got - target) > DICHOTOMY_CONFIG["pairing_rtol"] * abs(target)
    ]
    if missed:
        raise CheckFailedException(
            f"Initial data does not pair to {a:.4g}·|B_1|·φ(0) for bump radii {missed}",
            failures=missed,
        )

    t_fixed = DICHOTOMY_CONFIG["measure_time"]
    limit = BarenblattParams(pme, barenblatt_c_for_mass(pme, mass))
    if barenblatt_support_radius(limit, t_fixed) >= 1.0:
        raise PreconditionException(
            "The limiting Barenblatt profile reaches the wall at the comparison time",
            operation="classify_dichotomy_limit",
        )

    m = pme.m
    members, a_values, slices, l1_errors = [], [], [], []
    for k in cfg.k_values:
        a_k = cfg.a_rule(k)
        tau_k = a_k ** (m - 1.0) * t_fixed
        member = run_dichotomy_member(cfg, k, extra_times=(tau_k,))
        snap = member.trajectory.at(tau_k)
        u_k = snap.with_values(a_k * snap.values, time=t_fixed)
        l1_errors.append(l1_distance(u_k, lambda r: barenblatt_value(limit, r, t_fixed)) / mass)
        slices.append(
            a_k * max(slice_integral(s, DICHOTOMY_CONFIG["slice_radius"]) for s in member.trajectory.snapshots)
        )
        members.append(member)
        a_values.append(a_k)
    if any(b > a for a, b in zip(l1_errors, l1_errors[1:])):
        logger.warning(f"L¹ distances to the limit are not decreasing in k: {l1_errors}")

    trend = RefinementTrend.from_levels(
        list(zip(cfg.k_values, slices)), quantity="sup slice integral over B(0, 1/2)"
    )
    label = _trend_label(trend, TrendVerdict.FINITE, ClassKind.CLASS_B)
    evidence = {
        "ratios": ratios,
        "a": a,
        "limit_mass": mass,
        "limit_C": limit.C,
        "initial_masses": [a_k * mem.initial_slice for a_k, mem in zip(a_values, members)],
        "pairings": [
            {"rho": rho, "value": got, "target": target} for rho, (got, target) in pairings.items()
        ],
        "relative_l1_errors": l1_errors,
        "slice_integrals": slices,
    }
    return DichotomyResult(Direction.MEASURE, label, members, a_values, evidence, cfg)


def classify_dichotomy_limit(cfg: DichotomyConfig, direction: Union[Direction, str]) -> DichotomyResult:
    """Class of the limit of u_k = a_k v_k(·, a_k^{m−1}t) along k_values"""
    direction = Direction(direction)
    if direction == Direction.BLOWUP:
        result = _classify_blowup(cfg)
    else:
        result = _classify_measure(cfg)
    logger.info(f"Dichotomy {direction.value}: {result.label.record()}")
    return result


def _coarsen(fine: np.ndarray, volumes: np.ndarray) -> np.ndarray:
    """Volume-weighted average over pairs of fine cells"""
    weighted = (fine * volumes).reshape(-1, 2).sum(axis=1)
    return weighted / volumes.reshape(-1, 2).sum(axis=1)


def comparison_harness(
    u0: Field,
    v0: Field,
    cfg: SolveConfig,
    sub_cells: Optional[int] = None,
    level: Optional[float] = None,
) -> CheckReport:
    """Co-evolve u0 ≥ v0 and check the ordering at every snapshot

    With sub_cells, a third run h starts from min(u0, level) on the first
    sub_cells cells with zero wall data and must stay below u there.
    """
    if u0.grid != v0.grid or u0.time != v0.time:
        raise ValidationException("Compared fields must share grid and start time", field="v0")
    if np.any(u0.values < v0.values):
        cell = int(np.argmax(v0.values - u0.values))
        raise PreconditionException(
            f"Initial data is not ordered at cell {cell}", operation="comparison_harness"
        )

    fields = [u0, v0]
    if sub_cells is not None:
        sub = u0.grid.sub_grid(sub_cells)
        h_values = u0.values[:sub_cells]
        if level is not None:
            h_values = np.minimum(h_values, level)
        fields.append(Field(sub, h_values, u0.time, u0.pme))
    trajectories = solve_ivp_many(fields, cfg)
    u_traj, v_traj = trajectories[0], trajectories[1]

    gaps = [("pair", v_traj.values - u_traj.values)]
    if sub_cells is not None:
        gaps.append(("sub_cylinder", trajectories[2].values - u_traj.values[:, :sub_cells]))

    worst = 0.0
    for name, gap in gaps:
        snap, cell = np.unravel_index(int(np.argmax(gap)), gap.shape)
        excess = float(gap[snap, cell])
        if excess > 1e-12:
            raise ComparisonViolationException(
                f"Ordering lost ({name}) by {excess:.3e} at t={u_traj.times[snap]:.6g}",
                snapshot=int(snap),
                cell=int(cell),
                details={"check": name},
            )
        worst = max(worst, excess)
    return CheckReport(
        name="comparison",
        lhs=worst,
        rhs=1e-12,
        fitted_constant=float(np.min(u_traj.values - v_traj.values)),
        passed=True,
        details={
            "snapshots": int(u_traj.times.size),
            "sub_cells": sub_cells,
            "level": level,
            "steps": u_traj.steps,
        },
    )


def rescaling_check(
    pme: PmeParams,
    amplitude: float,
    tau: float,
    cells: int = 128,
    radius: float = 0.25,
) -> CheckReport:
    """Evolving a·χ for a^{1−m}τ against a·(χ evolved for τ)"""
    if not amplitude > 0 or not tau > 0:
        raise ValidationException("Amplitude and time must be positive", field="amplitude")
    grid = Grid1D.radial(1.0, cells, pme.n)
    fine = Grid1D.radial(1.0, 2 * cells, pme.n)
    scaled_end = amplitude ** (1.0 - pme.m) * tau

    scaled = solve_ivp_many(
        [indicator_field(grid, pme, radius, height=amplitude)], SolveConfig(t_end=scaled_end)
    )[0].snapshots[-1]
    unit, unit_fine = (
        solve_ivp_many([indicator_field(g, pme, radius)], SolveConfig(t_end=tau))[0].snapshots[-1]
        for g in (grid, fine)
    )
    difference = l1_distance(scaled, unit.with_values(amplitude * unit.values))
    error = amplitude * float(
        np.dot(np.abs(unit.values - _coarsen(unit_fine.values, fine.volumes)), grid.volumes)
    )
    return CheckReport(
        name="rescaling",
        lhs=difference,
        rhs=2.0 * error,
        fitted_constant=difference / error if error > 0 else 0.0,
        passed=bool(difference <= 2.0 * error),
        details={"amplitude": amplitude, "tau": tau, "cells": cells},
    )


def _bump(r, R: float, height: float):
    return height * np.maximum(1.0 - (2.0 * np.asarray(r, dtype=float) / R) ** 2, 0.0) ** 2


def minorant_scenario(
    pme: PmeParams,
    profile: Optional[GiantProfile] = None,
    amplitude: float = 50.0,
    cells: int = 48,
    window: Tuple[float, float] = (0.05, 0.5),
    samples: int = 12,
    bump: float = 0.0,
) -> CheckReport:
    """Run from amplitude·U + bump and check the giant U(x)t^{−1/(m−1)} stays below

    At the start time amplitude^{1−m} the giant equals amplitude·U, so the
    initial data dominate it by the bump bump·(1 − (2r/R)²)²₊. The tolerance
    is twice the gap to a doubled-resolution run.
    """
    if bump < 0:
        raise ValidationException("Bump height must be nonnegative", field="bump")
    profile = profile if profile is not None else solve_profile(pme)
    if profile.pme != pme:
        raise ValidationException("Profile belongs to other PME parameters", field="profile")
    start = amplitude ** (1.0 - pme.m)
    if not start < window[0] < window[1]:
        raise ValidationException(
            f"Window must start after t={start:.4g} and be increasing", field="window"
        )
    times = np.geomspace(window[0], window[1], samples)
    cfg = SolveConfig(t_end=float(times[-1]), snapshot_times=times)

    runs = []
    for N in (cells, 2 * cells):
        grid = Grid1D.radial(profile.R, N, pme.n)
        u0 = field_from_function(
            grid, pme, lambda r: amplitude * profile.evaluate(r) + _bump(r, profile.R, bump), time=start
        )
        runs.append(solve_ivp_many([u0], cfg)[0])
    coarse, fine = runs
    volumes = fine.grid.volumes
    tol = 2.0 * max(
        float(np.max(np.abs(c.values - _coarsen(f.values, volumes))))
        for c, f in zip(coarse.snapshots, fine.snapshots)
    )
    report = minorant_check(coarse, profile, t0=0.0, tol=tol)
    report.details.update({"amplitude": amplitude, "bump": bump, "cells": cells, "start": start})
    logger.info(f"Minorant scenario: deficit {report.lhs:.3e}, tolerance {tol:.3e}")
    return report


def write_experiment(results: Sequence[DichotomyResult], out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    """One table row per member and direction plus a JSON manifest with every constant"""
    out_dir = Path(out_dir)
    rows = [row for result in results for row in result.rows]
    csv_path = write_csv(out_dir / "dichotomy.csv", CSV_HEADERS["experiment"], rows)
    manifest = write_json(
        out_dir / "dichotomy.json",
        {"runs": [result.to_dict() for result in results]},
    )
    return csv_path, manifest
