"""
Explicit monotone finite-volume solver for u_t = Δ(u^m).

Cells cover [0, R] in slab or radial geometry. Fluxes act on w = u^m,
the face at r = 0 carries no flux and the wall r = R holds u = 0 through
the antisymmetric ghost value w_ghost = −w_{N−1}. Under the CFL limit the
update is monotone, so ordered data stay ordered.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from ..core.base import BaseField, Geometry, PmeParams, sphere_area
from ..core.constants import CSV_HEADERS, NUMERICS_CONFIG
from ..core.exceptions import (
    CFLViolationException,
    NumericalAbortException,
    ValidationException,
)
from ..utils.file_utils import read_csv_columns, write_csv, write_json


class SamplingMode(str, Enum):
    """Where a closed-form field is sampled on each cell"""
    CENTER = "center"
    INNER_EDGE = "inner_edge"


@dataclass(frozen=True, eq=False)
class Grid1D:
    """N cells of width h = R/N with centers (i + 1/2)h"""
    geometry: Geometry
    R: float
    N: int
    n: int = 1

    def __post_init__(self):
        if self.N < NUMERICS_CONFIG["min_cells"]:
            raise ValidationException(f"Grid needs at least 8 cells, got {self.N}", field="N")
        if not self.R > 0:
            raise ValidationException("Grid radius must be positive", field="R")
        if self.n < 1:
            raise ValidationException("Grid dimension must be positive", field="n")

    @classmethod
    def slab(cls, R: float, N: int) -> "Grid1D":
        return cls(Geometry.SLAB, float(R), int(N), 1)

    @classmethod
    def radial(cls, R: float, N: int, n: int) -> "Grid1D":
        return cls(Geometry.RADIAL, float(R), int(N), int(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid1D) and (
            self.geometry, self.R, self.N, self.n
        ) == (other.geometry, other.R, other.N, other.n)

    def __hash__(self) -> int:
        return hash((self.geometry, self.R, self.N, self.n))

    @property
    def h(self) -> float:
        return self.R / self.N

    @cached_property
    def faces(self) -> np.ndarray:
        faces = np.arange(self.N + 1, dtype=float) * self.h
        faces[-1] = self.R
        return faces

    @cached_property
    def centers(self) -> np.ndarray:
        return (np.arange(self.N, dtype=float) + 0.5) * self.h

    @cached_property
    def inner_edges(self) -> np.ndarray:
        return self.faces[:-1].copy()

    @cached_property
    def omega(self) -> float:
        return sphere_area(self.n)

    def measure_below(self, r: np.ndarray) -> np.ndarray:
        """Measure of [0, r] in this geometry"""
        r = np.asarray(r, dtype=float)
        if self.geometry == Geometry.SLAB:
            return r
        return self.omega * r ** self.n / self.n

    @cached_property
    def volumes(self) -> np.ndarray:
        return np.diff(self.measure_below(self.faces))

    @cached_property
    def face_areas(self) -> np.ndarray:
        if self.geometry == Geometry.SLAB:
            return np.ones(self.N + 1)
        return self.omega * self.faces ** (self.n - 1)

    @cached_property
    def diagonal_weights(self) -> np.ndarray:
        """Coefficient of w_i in the update of cell i, per unit dt

        The face at r = 0 carries no flux; the wall face counts twice
        because of the antisymmetric ghost.
        """
        inner = self.face_areas[:-1].copy()
        inner[0] = 0.0
        outer = self.face_areas[1:].copy()
        outer[-1] *= 2.0
        return (inner + outer) / (self.volumes * self.h)

    @cached_property
    def max_diagonal_weight(self) -> float:
        return float(np.max(self.diagonal_weights))

    def sub_grid(self, cells: int) -> "Grid1D":
        """The first `cells` cells as a grid of its own"""
        if not NUMERICS_CONFIG["min_cells"] <= cells <= self.N:
            raise ValidationException(f"Sub-grid size {cells} out of range", field="cells")
        return Grid1D(self.geometry, self.h * cells, int(cells), self.n)

    def to_dict(self) -> Dict:
        return {"geometry": self.geometry.value, "R": self.R, "N": self.N, "n": self.n}


@dataclass(eq=False)
class Field:
    """Cell values of u at one time"""
    grid: Grid1D
    values: np.ndarray
    time: float
    pme: PmeParams

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.N,):
            raise ValidationException(
                f"Field has {values.shape} values for {self.grid.N} cells", field="values"
            )
        if np.any(values < 0):
            raise ValidationException("Field values must be nonnegative", field="values")
        if self.grid.geometry == Geometry.RADIAL and self.grid.n != self.pme.n:
            raise ValidationException("Radial grid dimension must match n", field="grid")
        values.setflags(write=False)
        self.values = values

    @property
    def max(self) -> float:
        return float(np.max(self.values))

    def with_values(self, values: np.ndarray, time: Optional[float] = None) -> "Field":
        return Field(self.grid, values, self.time if time is None else time, self.pme)


@dataclass
class SolveConfig:
    t_end: float
    snapshot_times: Sequence[float] = ()
    cfl_safety: Optional[float] = None
    dt_max: Optional[float] = None

    def __post_init__(self):
        settings = get_settings()
        if self.cfl_safety is None:
            self.cfl_safety = settings.CFL_SAFETY
        if self.dt_max is None:
            self.dt_max = settings.DT_MAX
        if not 0 < self.cfl_safety <= 1:
            raise ValidationException("cfl_safety must lie in (0, 1]", field="cfl_safety")
        if self.dt_max <= 0:
            raise ValidationException("dt_max must be positive", field="dt_max")
        times = [float(t) for t in self.snapshot_times]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationException("Snapshot times must be strictly increasing", field="snapshot_times")
        self.snapshot_times = times

    def validate_start(self, start: float) -> None:
        if not self.t_end > start:
            raise ValidationException(f"t_end={self.t_end} must exceed start time {start}", field="t_end")
        if self.snapshot_times and (
            self.snapshot_times[0] < start or self.snapshot_times[-1] > self.t_end
        ):
            raise ValidationException("Snapshot times must lie in [start, t_end]", field="snapshot_times")

    def to_dict(self) -> Dict:
        return {
            "t_end": self.t_end,
            "snapshot_times": list(self.snapshot_times),
            "cfl_safety": self.cfl_safety,
            "dt_max": self.dt_max,
        }


@dataclass(eq=False)
class Trajectory:
    """Snapshots of one run with per-step statistics"""
    snapshots: List[Field]
    dt_history: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mass_history: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if not self.snapshots:
            raise ValidationException("Trajectory needs at least one snapshot", field="snapshots")
        times = [s.time for s in self.snapshots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationException("Snapshot times must be strictly increasing", field="snapshots")
        grids = {s.grid for s in self.snapshots}
        if len(grids) != 1:
            raise ValidationException("Snapshots must share one grid", field="snapshots")
        self.dt_history = np.asarray(self.dt_history, dtype=float)
        self.mass_history = np.asarray(self.mass_history, dtype=float)

    @property
    def grid(self) -> Grid1D:
        return self.snapshots[0].grid

    @property
    def pme(self) -> PmeParams:
        return self.snapshots[0].pme

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])

    @property
    def values(self) -> np.ndarray:
        """Snapshot-major matrix of cell values"""
        return np.vstack([s.values for s in self.snapshots])

    @property
    def steps(self) -> int:
        return int(self.dt_history.size)

    @property
    def mass_drift(self) -> float:
        if self.mass_history.size < 2 or self.mass_history[0] == 0:
            return 0.0
        return float(np.max(np.abs(self.mass_history - self.mass_history[0])) / self.mass_history[0])

    def at(self, time: float) -> Field:
        for snap in self.snapshots:
            if snap.time == time:
                return snap
        raise ValidationException(f"No snapshot at t={time}", field="time")


def cfl_limit(
    f: Field,
    cfl_safety: Optional[float] = None,
    dt_max: Optional[float] = None,
) -> float:
    """safety/(m max(u)^{m−1} max_i d_i + ε_floor), capped by dt_max

    d_i are the diagonal weights of the grid, so every safety factor in
    (0, 1] keeps the update monotone, wall cell included.
    """
    settings = get_settings()
    safety = settings.CFL_SAFETY if cfl_safety is None else cfl_safety
    dt_max = settings.DT_MAX if dt_max is None else dt_max
    m = f.pme.m
    # overflow gives a zero step, which the caller reports as an abort
    with np.errstate(over="ignore"):
        denom = m * np.power(f.max, m - 1.0) * f.grid.max_diagonal_weight + settings.EPS_FLOOR
    return float(min(safety / denom, dt_max))


def _increment(f: Field, dt: float) -> np.ndarray:
    grid = f.grid
    w = f.values ** f.pme.m
    flux = np.empty(grid.N + 1)
    flux[0] = 0.0
    flux[1:-1] = grid.face_areas[1:-1] * (w[1:] - w[:-1]) / grid.h
    # ghost w = −w_{N−1} at the wall
    flux[-1] = -2.0 * grid.face_areas[-1] * w[-1] / grid.h
    return dt / grid.volumes * (flux[1:] - flux[:-1])


def _advance(
    f: Field,
    dt: float,
    new_time: float,
    step_index: Optional[int],
    details: Optional[Dict] = None,
) -> Field:
    new_values = np.maximum(f.values + _increment(f, dt), 0.0)
    if not np.all(np.isfinite(new_values)):
        raise NumericalAbortException(
            f"Non-finite value at step {step_index} (t={f.time:.6g})",
            step_index=step_index,
            details={"time": f.time, **(details or {})},
        )
    return Field(f.grid, new_values, new_time, f.pme)


def step(
    f: Field,
    dt: float,
    cfl_safety: Optional[float] = None,
    dt_max: Optional[float] = None,
    step_index: Optional[int] = None,
) -> Field:
    """One explicit conservative update; rejects dt above the CFL limit"""
    limit = cfl_limit(f, cfl_safety, dt_max)
    if dt <= 0 or dt > limit * (1.0 + 1e-12):
        raise CFLViolationException(
            f"Time step {dt:.3e} outside (0, {limit:.3e}]", dt=dt, limit=limit
        )
    return _advance(f, dt, f.time + dt, step_index)


def slice_integral(f: Field, sub_radius: Optional[float] = None) -> float:
    """Σ u_i V_i over cells inside sub_radius, partial cells clipped"""
    grid = f.grid
    if sub_radius is None:
        return float(np.dot(f.values, grid.volumes))
    if sub_radius < 0 or sub_radius > grid.R * (1.0 + 1e-12):
        raise ValidationException(f"Sub-radius {sub_radius} outside [0, {grid.R}]", field="sub_radius")
    upper = np.minimum(grid.faces[1:], sub_radius)
    lower = np.minimum(grid.faces[:-1], sub_radius)
    clipped = grid.measure_below(upper) - grid.measure_below(lower)
    return float(np.dot(f.values, clipped))


def l1_distance(f: Field, exact: Union[Field, Callable]) -> float:
    """Grid L¹ distance to another field or to u(r) sampled at centers"""
    if isinstance(exact, Field):
        other = exact.values
    else:
        other = np.asarray(exact(f.grid.centers), dtype=float)
    return float(np.dot(np.abs(f.values - other), f.grid.volumes))


def solve_ivp_many(fields: Sequence[Field], cfg: SolveConfig) -> List[Trajectory]:
    """Co-evolve fields with a common time step

    dt is the minimum of the individual CFL limits, so ordered inputs on the
    same grid stay ordered step by step.
    """
    if not fields:
        raise ValidationException("Nothing to solve", field="fields")
    start = fields[0].time
    if any(f.time != start for f in fields):
        raise ValidationException("Co-evolved fields must share their start time", field="fields")
    cfg.validate_start(start)

    targets = sorted(set(cfg.snapshot_times) | {cfg.t_end})
    targets = [t for t in targets if t > start]
    current = list(fields)
    snapshots: List[List[Field]] = [[] for _ in fields]
    if cfg.snapshot_times and cfg.snapshot_times[0] == start:
        for i, f in enumerate(current):
            snapshots[i].append(f)
    snapshot_set = set(cfg.snapshot_times)

    dts: List[float] = []
    masses: List[List[float]] = [[slice_integral(f)] for f in fields]
    t = start
    step_index = 0
    for target in targets:
        while t < target:
            dt = min(cfl_limit(f, cfg.cfl_safety, cfg.dt_max) for f in current)
            if not dt > 0:
                raise NumericalAbortException(
                    f"Stable time step underflowed at step {step_index} (t={t:.6g})",
                    step_index=step_index,
                    details={"time": t},
                )
            hit = dt >= target - t
            if hit:
                dt = target - t
            new_time = target if hit else t + dt
            current = [
                _advance(f, dt, new_time, step_index, {"field": i}) for i, f in enumerate(current)
            ]
            t = target if hit else t + dt
            dts.append(dt)
            for i, f in enumerate(current):
                masses[i].append(slice_integral(f))
            step_index += 1
        if target in snapshot_set:
            for i, f in enumerate(current):
                snapshots[i].append(f)
            logger.debug(f"Snapshot at t={target:.6g} after {step_index} steps")

    if not snapshots[0]:
        for i, f in enumerate(current):
            snapshots[i].append(f)
    trajectories = [
        Trajectory(snaps, np.asarray(dts), np.asarray(mass))
        for snaps, mass in zip(snapshots, masses)
    ]
    logger.info(
        f"Solved {len(fields)} field(s) to t={cfg.t_end:.6g} in {step_index} steps, "
        f"mass drift {trajectories[0].mass_drift:.3e}"
    )
    return trajectories


def solve_ivp(u0: Field, cfg: SolveConfig) -> Trajectory:
    """Advance u0 to cfg.t_end, hitting every snapshot time exactly"""
    return solve_ivp_many([u0], cfg)[0]


def field_from_function(
    grid: Grid1D,
    pme: PmeParams,
    func: Callable,
    time: float = 0.0,
    mode: SamplingMode = SamplingMode.CENTER,
) -> Field:
    points = grid.centers if mode == SamplingMode.CENTER else grid.inner_edges
    values = np.asarray(func(points), dtype=float) * np.ones(grid.N)
    return Field(grid, values, time, pme)


def indicator_field(
    grid: Grid1D,
    pme: PmeParams,
    radius: float,
    height: float = 1.0,
    time: float = 0.0,
) -> Field:
    """height·χ_{B(0, radius)} with exact cell-volume fractions"""
    if radius <= 0 or radius > grid.R:
        raise ValidationException(f"Indicator radius {radius} outside (0, {grid.R}]", field="radius")
    inside = grid.measure_below(np.minimum(grid.faces[1:], radius)) - grid.measure_below(
        np.minimum(grid.faces[:-1], radius)
    )
    return Field(grid, height * np.clip(inside / grid.volumes, 0.0, 1.0), time, pme)


def sample_trajectory(
    u: BaseField,
    grid: Grid1D,
    times: Sequence[float],
    mode: SamplingMode = SamplingMode.CENTER,
) -> Trajectory:
    """Snapshots of a closed-form field sampled on a grid"""
    snaps = [
        field_from_function(grid, u.pme, lambda r, t=t: u.value(r, t), float(t), mode)
        for t in times
    ]
    return Trajectory(snaps)


def convergence_order(resolutions: Sequence[float], errors: Sequence[float]) -> float:
    """Empirical order −d log(error)/d log(N) by least squares"""
    slope = np.polyfit(np.log(np.asarray(resolutions, float)), np.log(np.asarray(errors, float)), 1)[0]
    return float(-slope)


def trajectory_to_csv(traj: Trajectory, path: Union[str, Path], cfg: Optional[SolveConfig] = None) -> Tuple[Path, Path]:
    """Rows `t,r,u` snapshot-major plus a JSON sidecar"""
    centers = traj.grid.centers
    rows = (
        (snap.time, r, u)
        for snap in traj.snapshots
        for r, u in zip(centers.tolist(), snap.values.tolist())
    )
    csv_path = write_csv(path, CSV_HEADERS["trajectory"], rows)
    sidecar = write_json(
        Path(path).with_suffix(".json"),
        {
            "pme": traj.pme.to_dict(),
            "grid": traj.grid.to_dict(),
            "config": cfg.to_dict() if cfg else None,
            "total_steps": traj.steps,
            "mass_drift": traj.mass_drift,
            "snapshot_times": traj.times.tolist(),
        },
    )
    return csv_path, sidecar


def trajectory_from_csv(path: Union[str, Path], grid: Grid1D, pme: PmeParams) -> Trajectory:
    columns = read_csv_columns(path, CSV_HEADERS["trajectory"])
    t, u = columns["t"], columns["u"]
    if t.size % grid.N:
        raise ValidationException("Trajectory CSV does not match the grid size", field="path")
    snaps = [
        Field(grid, u[i : i + grid.N], float(t[i]), pme)
        for i in range(0, t.size, grid.N)
    ]
    return Trajectory(snaps)
