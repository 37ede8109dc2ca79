"""
Integrability trends and the class 𝔅 / class 𝔐 classifier.

Every trend evaluates a functional on nested meshes of increasing depth
and hands the (resolution, value) levels to RefinementTrend.from_levels.
Space-time functionals use the graded depth D (in decades) as the
resolution; slice suprema use 1/δ for windows (t_a + δ, t_b).
"""

from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from ..core.base import (
    BaseField,
    ClassKind,
    ClassLabel,
    RefinementTrend,
    SpaceTimeRegion,
    TrendVerdict,
)
from ..core.exceptions import DomainException, InconclusiveException, ValidationException
from ..fields.derived import PowerField
from ..fields.trajectory import as_field
from ..services.pme_solver import Trajectory, slice_integral
from .quadrature import (
    SpaceTimeQuadrature,
    SpatialMesh,
    check_region,
    graded_nodes,
    time_focus,
    trend_decades,
)

FieldLike = Union[BaseField, Trajectory]


def _levels(levels: Optional[int]) -> int:
    levels = get_settings().TREND_MIN_LEVELS + 1 if levels is None else levels
    if levels < 1:
        raise ValidationException("At least one refinement level is required", field="levels")
    return levels


def _spacetime_levels(
    u: BaseField,
    region: SpaceTimeRegion,
    levels: int,
    functional: Callable[[SpaceTimeQuadrature], float],
) -> List[Tuple[float, float]]:
    check_region(u, region)
    focus = time_focus(u, region)
    out = []
    for decades in trend_decades(levels):
        quad = SpaceTimeQuadrature.for_region(region, u.pme.n, decades, focus)
        out.append((float(decades), functional(quad)))
    return out


def lq_spacetime_trend(
    u: FieldLike,
    region: SpaceTimeRegion,
    q: float,
    levels: Optional[int] = None,
) -> RefinementTrend:
    """Refinement trend of ∬_region u^q"""
    if q <= 0:
        raise ValidationException("Exponent q must be positive", field="q")
    field = as_field(u)

    def functional(quad: SpaceTimeQuadrature) -> float:
        return quad.integrate(quad.sample(field.value) ** q)

    trend = RefinementTrend.from_levels(
        _spacetime_levels(field, region, _levels(levels), functional), quantity=f"L^{q:g}"
    )
    logger.debug(f"L^{q:g} trend {trend.verdict.value}, growth {trend.growth_exponent:.3f}")
    return trend


def gradient_lq_trend(
    u: FieldLike,
    region: SpaceTimeRegion,
    q: float,
    levels: Optional[int] = None,
) -> RefinementTrend:
    """Refinement trend of ∬_region |∇(u^m)|^q"""
    if q < 1:
        raise ValidationException("Gradient exponent q must be at least 1", field="q")
    field = as_field(u)

    def functional(quad: SpaceTimeQuadrature) -> float:
        return quad.integrate(np.abs(quad.sample(field.grad_um)) ** q)

    return RefinementTrend.from_levels(
        _spacetime_levels(field, region, _levels(levels), functional), quantity=f"grad L^{q:g}"
    )


def max_trend(u: FieldLike, region: SpaceTimeRegion, levels: Optional[int] = None) -> RefinementTrend:
    """Trend of the largest sampled value; FINITE means bounded"""
    field = as_field(u)

    def functional(quad: SpaceTimeQuadrature) -> float:
        return float(np.max(quad.sample(field.value)))

    return RefinementTrend.from_levels(
        _spacetime_levels(field, region, _levels(levels), functional), quantity="max"
    )


def _radial_slice(field: BaseField, sub_radius: float, times: np.ndarray) -> np.ndarray:
    settings = get_settings()
    mesh = SpatialMesh.radial(graded_nodes(0.0, sub_radius, 0.0, settings.TREND_BASE_DECADES * 2), field.pme.n)
    values = np.asarray(field.value(mesh.r[None, :], times[:, None]), dtype=float)
    return np.broadcast_to(values, (times.size, mesh.r.size)) @ mesh.weights


def slice_sup_trend(
    u: FieldLike,
    sub_radius: float,
    window: Tuple[float, float],
    samples: int = 64,
    levels: Optional[int] = None,
) -> RefinementTrend:
    """sup over (t_a + δ, t_b) of ∫_{B(0, sub_radius)} u(·, t) as δ shrinks

    Trajectories use their snapshots in the window; field functions are
    sampled at times geometric in t − t_a.
    """
    t_a, t_b = window
    if not t_b > t_a:
        raise ValidationException("Window needs t_a < t_b", field="window")
    if samples < 2:
        raise ValidationException("At least two sample times per level", field="samples")
    levels = _levels(levels)
    deltas = (t_b - t_a) / 10.0 * 4.0 ** (-np.arange(levels))
    out = []

    if isinstance(u, Trajectory):
        times = u.times
        if t_a < times[0] or t_b > times[-1]:
            raise DomainException("Window outside the trajectory time range", point=t_a)
        slices = np.array([slice_integral(s, sub_radius) for s in u.snapshots])
        for delta in deltas:
            mask = (times >= t_a + delta) & (times <= t_b)
            if not np.any(mask):
                raise ValidationException(
                    f"No snapshots in ({t_a + delta:.3g}, {t_b:.3g})", field="window"
                )
            out.append((1.0 / delta, float(np.max(slices[mask]))))
    else:
        if sub_radius > u.radius * (1.0 + 1e-12):
            raise DomainException("Sub-ball leaves the field's domain", point=sub_radius)
        t_lo, t_hi = u.t_range
        if t_a < t_lo or t_b > t_hi:
            raise DomainException("Window outside the field's time range", point=t_a)
        for delta in deltas:
            times = t_a + np.geomspace(delta, t_b - t_a, samples)
            out.append((1.0 / delta, float(np.max(_radial_slice(u, sub_radius, times)))))
    return RefinementTrend.from_levels(out, quantity="slice_sup")


def alpha_slice_bound(
    u: BaseField,
    sub_radius: float,
    window: Tuple[float, float],
    alpha: float,
    samples: int = 64,
) -> Dict[str, float]:
    """Hölder bound sup ∫_D u^α ≤ (sup ∫_D u)^α |D|^{1−α} for 0 < α < 1"""
    if not 0.0 < alpha < 1.0:
        raise ValidationException("alpha must lie in (0, 1)", field="alpha")
    t_a, t_b = window
    times = np.linspace(t_a, t_b, samples)
    lhs = float(np.max(_radial_slice(PowerField(u, alpha), sub_radius, times)))
    mass = float(np.max(_radial_slice(u, sub_radius, times)))
    volume = u.pme.ball_volume(sub_radius)
    rhs = mass ** alpha * volume ** (1.0 - alpha)
    return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs * (1.0 + 1e-9))}


def classify(u: FieldLike, region: SpaceTimeRegion, levels: Optional[int] = None) -> ClassLabel:
    """BOUNDED, CLASS_B or CLASS_M from refinement trends

    Raises InconclusiveException when the pressure trend is inconclusive.
    """
    field = as_field(u)
    q = field.pme.m - 1.0
    bound = max_trend(field, region, levels)
    evidence = lq_spacetime_trend(field, region, q, levels)

    focus = time_focus(field, region)
    slice_sup = None
    if focus < region.t_max:
        slice_sup = slice_sup_trend(u, region.r_max / 2.0, (focus, region.t_max), levels=levels)

    if bound.verdict == TrendVerdict.FINITE:
        label = ClassKind.BOUNDED
    elif evidence.verdict == TrendVerdict.FINITE:
        label = ClassKind.CLASS_B
    elif evidence.verdict == TrendVerdict.DIVERGENT:
        label = ClassKind.CLASS_M
    else:
        raise InconclusiveException(
            f"Pressure trend inconclusive (growth {evidence.growth_exponent:.3f})",
            trend=evidence,
        )

    if slice_sup is not None and label != ClassKind.BOUNDED:
        expected = TrendVerdict.FINITE if label == ClassKind.CLASS_B else TrendVerdict.DIVERGENT
        if slice_sup.verdict != expected:
            logger.warning(
                f"Slice supremum trend {slice_sup.verdict.value} disagrees with {label.value}"
            )
    result = ClassLabel(label=label, q=q, evidence=evidence, max_trend=bound, slice_sup=slice_sup)
    logger.info(f"Classified {field.describe()['kind']}: {result.record()}")
    return result
