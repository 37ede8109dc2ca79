"""
Infinity sets of a trajectory at a time slice t0.

For the i-th threshold k_i a cell qualifies when u exceeds k_i over the
first s_i = max(min_snapshots, S >> i) snapshots after t0 (S of them in
total). The full variant also takes the minimum over neighboring cells
|j − i| ≤ ν_i = max(1, ν0 >> i), so its result is a subset of the
vertical one.
"""

from typing import FrozenSet, Optional, Sequence

import numpy as np
from loguru import logger

from ..core.exceptions import PreconditionException, ValidationException
from ..services.pme_solver import Trajectory


def _after(traj: Trajectory, t0: float, thresholds: Sequence[float], min_snapshots: int):
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.size == 0 or np.any(np.diff(thresholds) <= 0):
        raise ValidationException("Thresholds must be a nonempty increasing list", field="thresholds")
    if min_snapshots < 1:
        raise ValidationException("min_snapshots must be positive", field="min_snapshots")
    mask = traj.times > t0
    count = int(np.sum(mask))
    if count < max(min_snapshots, 2):
        raise PreconditionException(
            f"Only {count} snapshots after t0={t0}", operation="infinity_set"
        )
    return traj.values[mask], thresholds


def _schedule(count: int, index: int, min_snapshots: int) -> int:
    return min(count, max(min_snapshots, count >> index))


def infinity_set_vertical(
    traj: Trajectory,
    t0: float,
    thresholds: Sequence[float],
    min_snapshots: int = 3,
) -> FrozenSet[int]:
    """Cells where u → ∞ as t ↓ t0 along the vertical segment"""
    values, thresholds = _after(traj, t0, thresholds, min_snapshots)
    keep = np.ones(values.shape[1], dtype=bool)
    for i, k in enumerate(thresholds):
        s = _schedule(values.shape[0], i, min_snapshots)
        keep &= np.min(values[:s], axis=0) > k
    cells = frozenset(int(c) for c in np.flatnonzero(keep))
    logger.debug(f"Vertical infinity set at t0={t0}: {len(cells)} of {values.shape[1]} cells")
    return cells


def _neighborhood_min(row: np.ndarray, radius: int) -> np.ndarray:
    padded = np.pad(row, radius, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * radius + 1)
    return windows.min(axis=1)


def infinity_set_full(
    traj: Trajectory,
    t0: float,
    thresholds: Sequence[float],
    min_snapshots: int = 3,
    neighborhood: Optional[int] = None,
) -> FrozenSet[int]:
    """Cells where u → ∞ as (x, t) → (x0, t0) with t > t0"""
    values, thresholds = _after(traj, t0, thresholds, min_snapshots)
    cells = values.shape[1]
    nu0 = max(1, cells // 8) if neighborhood is None else neighborhood
    if nu0 < 1:
        raise ValidationException("Neighborhood must be at least one cell", field="neighborhood")
    keep = np.ones(cells, dtype=bool)
    for i, k in enumerate(thresholds):
        s = _schedule(values.shape[0], i, min_snapshots)
        radius = max(1, nu0 >> i)
        keep &= _neighborhood_min(np.min(values[:s], axis=0), radius) > k
    return frozenset(int(c) for c in np.flatnonzero(keep))


def blowup_fraction(cells: FrozenSet[int], total: int) -> float:
    return len(cells) / float(total)
