"""
Tensor-product midpoint quadrature on space-time boxes.

Meshes are either uniform or geometrically graded toward a focus point:
nodes a + (b − a)·[0, 10^{−D}, ..., 1] with a fixed number of cells per
decade, so refining D keeps every coarser cell and adds cells next to the
focus only.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..config import get_settings
from ..core.base import BaseField, SpaceTimeRegion, sphere_area
from ..core.exceptions import DomainException, ValidationException


def uniform_nodes(a: float, b: float, cells: int) -> np.ndarray:
    if not b > a or cells < 1:
        raise ValidationException("Uniform mesh needs a < b and at least one cell", field="cells")
    return np.linspace(a, b, cells + 1)


def _one_sided(length: float, decades: float, cells_per_decade: int) -> np.ndarray:
    count = int(round(decades * cells_per_decade))
    return length * np.concatenate([[0.0], np.logspace(-decades, 0.0, count + 1)])


def graded_nodes(
    a: float,
    b: float,
    focus: Optional[float],
    decades: float,
    cells_per_decade: Optional[int] = None,
) -> np.ndarray:
    """Nodes on [a, b] graded geometrically toward focus from both sides"""
    cells_per_decade = cells_per_decade or get_settings().QUAD_CELLS_PER_DECADE
    if not b > a:
        raise ValidationException("Graded mesh needs a < b", field="b")
    if decades <= 0:
        raise ValidationException("Graded mesh needs a positive number of decades", field="decades")
    if focus is None:
        return uniform_nodes(a, b, int(round(decades * cells_per_decade)))
    focus = min(max(focus, a), b)
    parts = []
    if focus > a:
        parts.append(focus - _one_sided(focus - a, decades, cells_per_decade)[::-1])
    if focus < b:
        right = focus + _one_sided(b - focus, decades, cells_per_decade)
        parts.append(right[1:] if parts else right)
    nodes = np.concatenate(parts)
    nodes[0], nodes[-1] = a, b
    return nodes


@dataclass
class SpatialMesh:
    """Midpoint rule in space: signed coordinate, radius and cell measures"""
    x: np.ndarray
    weights: np.ndarray

    @property
    def r(self) -> np.ndarray:
        return np.abs(self.x)

    @property
    def sign(self) -> np.ndarray:
        return np.sign(self.x)

    @classmethod
    def radial(cls, nodes: np.ndarray, n: int) -> "SpatialMesh":
        nodes = np.asarray(nodes, dtype=float)
        if nodes[0] < 0:
            raise ValidationException("Radial nodes must be nonnegative", field="nodes")
        weights = sphere_area(n) * np.diff(nodes ** n) / n
        return cls(0.5 * (nodes[1:] + nodes[:-1]), weights)

    @classmethod
    def line(cls, nodes: np.ndarray) -> "SpatialMesh":
        nodes = np.asarray(nodes, dtype=float)
        return cls(0.5 * (nodes[1:] + nodes[:-1]), np.diff(nodes))

    @classmethod
    def ball(
        cls,
        n: int,
        center: float,
        radius: float,
        cells: int,
        graded_decades: Optional[float] = None,
    ) -> "SpatialMesh":
        """B(center, radius): signed line cells for n = 1, radial shells otherwise

        A graded mesh concentrates cells at the origin.
        """
        if n == 1:
            lo, hi = center - radius, center + radius
            if graded_decades is None:
                return cls.line(uniform_nodes(lo, hi, cells))
            focus = 0.0 if lo < 0.0 < hi else (lo if abs(lo) < abs(hi) else hi)
            return cls.line(graded_nodes(lo, hi, focus, graded_decades))
        if center != 0.0:
            raise ValidationException("Radial meshes for n ≥ 2 must be centered at the origin", field="center")
        if graded_decades is None:
            return cls.radial(uniform_nodes(0.0, radius, cells), n)
        return cls.radial(graded_nodes(0.0, radius, 0.0, graded_decades), n)


@dataclass
class TimeMesh:
    t: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_nodes(cls, nodes: np.ndarray) -> "TimeMesh":
        nodes = np.asarray(nodes, dtype=float)
        return cls(0.5 * (nodes[1:] + nodes[:-1]), np.diff(nodes))


@dataclass
class SpaceTimeQuadrature:
    """Products of a time mesh (rows) and a spatial mesh (columns)"""
    space: SpatialMesh
    time: TimeMesh

    @property
    def R(self) -> np.ndarray:
        return self.space.r[None, :]

    @property
    def X(self) -> np.ndarray:
        return self.space.x[None, :]

    @property
    def T(self) -> np.ndarray:
        return self.time.t[:, None]

    @property
    def weights(self) -> np.ndarray:
        return self.time.weights[:, None] * self.space.weights[None, :]

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(np.broadcast_to(values, self.weights.shape) * self.weights))

    def slice_integrals(self, values: np.ndarray) -> np.ndarray:
        """∫ values(·, t) dx for every time row"""
        return np.broadcast_to(values, self.weights.shape) @ self.space.weights

    def sample(self, func: Callable) -> np.ndarray:
        return np.broadcast_to(np.asarray(func(self.R, self.T), dtype=float), self.weights.shape)

    @classmethod
    def for_region(
        cls,
        region: SpaceTimeRegion,
        n: int,
        decades: float,
        focus: Optional[float],
        cells_per_decade: Optional[int] = None,
    ) -> "SpaceTimeQuadrature":
        """Radial mesh on B(0, r_max) graded toward 0, time graded toward focus"""
        r_nodes = graded_nodes(0.0, region.r_max, 0.0, decades, cells_per_decade)
        t_nodes = graded_nodes(region.t_min, region.t_max, focus, decades, cells_per_decade)
        return cls(SpatialMesh.radial(r_nodes, n), TimeMesh.from_nodes(t_nodes))


def check_region(u: BaseField, region: SpaceTimeRegion) -> None:
    """Reject boxes that leave the field's domain"""
    t_lo, t_hi = u.t_range
    if region.r_max > u.radius * (1.0 + 1e-12):
        raise DomainException(
            f"Region radius {region.r_max} exceeds field radius {u.radius}", point=region.r_max
        )
    if region.t_min < t_lo or region.t_max > t_hi:
        raise DomainException(
            f"Region times [{region.t_min}, {region.t_max}] outside [{t_lo}, {t_hi}]",
            point=region.t_min,
        )


def time_focus(u: BaseField, region: SpaceTimeRegion) -> float:
    """Explicit focus, else the field's singular time inside the box, else t_min"""
    if region.t_focus is not None:
        return region.t_focus
    ts = u.singular_time
    if ts is not None and region.t_min <= ts <= region.t_max:
        return ts
    return region.t_min


def trend_decades(levels: int) -> np.ndarray:
    """Refinement depths D_j = base·2^j in decades"""
    base = get_settings().TREND_BASE_DECADES
    return base * 2.0 ** np.arange(levels)
