"""
Solver trajectories seen as field functions.
"""

from functools import cached_property
from typing import Any, Dict, Tuple, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ..core.base import BaseField, Geometry, PmeParams
from ..core.exceptions import DomainException, ValidationException
from ..services.pme_solver import Grid1D, Trajectory, trajectory_from_csv


class TrajectoryField(BaseField):
    """Piecewise-linear interpolation in (t, r) over snapshots

    Radial nodes are 0, the cell centers and R; the value at 0 repeats the
    first cell and the wall value is 0. ∂_r(u^m) comes from centered
    differences on the same nodes and is zero at r = 0.
    """

    def __init__(self, traj: Trajectory):
        if len(traj.snapshots) < 2:
            raise ValidationException("Interpolation needs at least two snapshots", field="traj")
        super().__init__(traj.pme)
        self.traj = traj

    @classmethod
    def from_config(cls, pme: PmeParams, params: Dict[str, Any]) -> "TrajectoryField":
        if "path" not in params:
            raise ValidationException("Trajectory field needs a CSV path", field="path")
        grid = Grid1D(
            Geometry(params.get("geometry", Geometry.RADIAL.value)),
            float(params.get("R", 1.0)),
            int(params["N"]),
            pme.n,
        )
        return cls(trajectory_from_csv(params["path"], grid, pme))

    @cached_property
    def _nodes(self) -> np.ndarray:
        grid = self.traj.grid
        return np.concatenate([[0.0], grid.centers, [grid.R]])

    @cached_property
    def _node_values(self) -> np.ndarray:
        u = self.traj.values
        return np.hstack([u[:, :1], u, np.zeros((u.shape[0], 1))])

    @cached_property
    def _value_interp(self) -> RegularGridInterpolator:
        return RegularGridInterpolator((self.traj.times, self._nodes), self._node_values)

    @cached_property
    def _grad_interp(self) -> RegularGridInterpolator:
        w = self._node_values ** self.pme.m
        g = np.gradient(w, self._nodes, axis=1)
        g[:, 0] = 0.0
        return RegularGridInterpolator((self.traj.times, self._nodes), g)

    @property
    def radius(self) -> float:
        return self.traj.grid.R

    @property
    def t_range(self) -> Tuple[float, float]:
        times = self.traj.times
        return (float(times[0]), float(times[-1]))

    def _points(self, r, t) -> Tuple[np.ndarray, Tuple[int, ...]]:
        r, t = np.broadcast_arrays(np.abs(np.asarray(r, dtype=float)), np.asarray(t, dtype=float))
        t_lo, t_hi = self.t_range
        if np.any(r > self.radius * (1.0 + 1e-12)):
            raise DomainException("Radius outside trajectory domain", point=float(np.max(r)))
        if np.any((t < t_lo) | (t > t_hi)):
            raise DomainException("Time outside trajectory range", point=float(np.min(t)))
        pts = np.stack([t.ravel(), np.minimum(r, self.radius).ravel()], axis=-1)
        return pts, r.shape

    def _evaluate(self, interp: RegularGridInterpolator, r, t):
        pts, shape = self._points(r, t)
        out = interp(pts).reshape(shape)
        return float(out) if out.ndim == 0 else out

    def value(self, r, t):
        return self._evaluate(self._value_interp, r, t)

    def grad_um(self, r, t):
        return self._evaluate(self._grad_interp, r, t)

    def describe(self) -> Dict[str, Any]:
        return {
            **super().describe(),
            "grid": self.traj.grid.to_dict(),
            "snapshots": len(self.traj.snapshots),
        }


def as_field(u: Union[BaseField, Trajectory]) -> BaseField:
    """Accept a closed-form field or a trajectory wherever a field is needed"""
    if isinstance(u, BaseField):
        return u
    if isinstance(u, Trajectory):
        return TrajectoryField(u)
    raise ValidationException(f"Cannot use {type(u).__name__} as a field", field="u")
