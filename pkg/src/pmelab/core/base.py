"""
Base classes for the porous medium lab.

Defines the shared value types (equation parameters, refinement trends,
check reports, class labels) and the abstract field-function interface
consumed by every diagnostic.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import gamma

from ..config import get_settings
from .constants import REPORT_SCHEMA_VERSION
from .exceptions import ValidationException


class Geometry(str, Enum):
    """Spatial geometry of a grid"""
    SLAB = "slab"
    RADIAL = "radial"


class TrendVerdict(str, Enum):
    """Outcome of a refinement study"""
    FINITE = "FINITE"
    DIVERGENT = "DIVERGENT"
    INCONCLUSIVE = "INCONCLUSIVE"


class ClassKind(str, Enum):
    """Dichotomy classes of unbounded supercaloric functions"""
    CLASS_B = "CLASS_B"
    CLASS_M = "CLASS_M"
    BOUNDED = "BOUNDED"


class Direction(str, Enum):
    """Limit directions of the dichotomy family"""
    BLOWUP = "BLOWUP"
    MEASURE = "MEASURE"


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n (2 for n = 1)"""
    return float(2.0 * np.pi ** (n / 2.0) / gamma(n / 2.0))


@dataclass(frozen=True, eq=False)
class PmeParams:
    """Exponent and dimension of u_t = Δ(u^m)"""
    m: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.m) or self.m <= 1.0:
            raise ValidationException(
                f"Slow diffusion requires m > 1, got m={self.m}", field="m"
            )
        if int(self.n) != self.n or self.n < 1:
            raise ValidationException(
                f"Dimension must be a positive integer, got n={self.n}", field="n"
            )

    def __eq__(self, other) -> bool:
        return isinstance(other, PmeParams) and (self.m, self.n) == (other.m, other.n)

    def __hash__(self) -> int:
        return hash((self.m, self.n))

    @cached_property
    def omega(self) -> float:
        """ω_{n−1}, the radial measure is ω r^{n−1} dr"""
        return sphere_area(self.n)

    @property
    def pressure_exponent(self) -> float:
        return self.m - 1.0

    def ball_volume(self, radius: float) -> float:
        return self.omega * radius ** self.n / self.n

    def to_dict(self) -> Dict[str, Any]:
        return {"m": self.m, "n": self.n}


@dataclass(frozen=True)
class SpaceTimeRegion:
    """Box B(0, r_max) × (t_min, t_max) with a focus time for refinement"""
    r_max: float
    t_min: float
    t_max: float
    t_focus: Optional[float] = None

    def __post_init__(self):
        if self.r_max <= 0:
            raise ValidationException("Region radius must be positive", field="r_max")
        if not self.t_min < self.t_max:
            raise ValidationException("Region needs t_min < t_max", field="t_min")
        if self.t_focus is not None and not self.t_min <= self.t_focus <= self.t_max:
            raise ValidationException(
                "Focus time must lie inside the region", field="t_focus"
            )

    @property
    def focus(self) -> float:
        return self.t_min if self.t_focus is None else self.t_focus

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r_max": self.r_max,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "t_focus": self.focus,
        }


@dataclass
class RefinementTrend:
    """Values of a functional at increasing resolutions plus a verdict"""
    levels: List[Tuple[float, float]]
    verdict: TrendVerdict
    growth_exponent: float
    quantity: str = ""

    def __post_init__(self):
        resolutions = [res for res, _ in self.levels]
        if any(b <= a for a, b in zip(resolutions, resolutions[1:])):
            raise ValidationException(
                "Trend resolutions must be strictly increasing", field="levels"
            )

    @classmethod
    def from_levels(
        cls,
        levels: List[Tuple[float, float]],
        quantity: str = "",
        slope_threshold: Optional[float] = None,
        plateau_tol: Optional[float] = None,
        min_levels: Optional[int] = None,
    ) -> "RefinementTrend":
        """Fit the growth exponent and apply the verdict rules"""
        settings = get_settings()
        slope_threshold = (
            settings.TREND_SLOPE_THRESHOLD if slope_threshold is None else slope_threshold
        )
        plateau_tol = settings.TREND_PLATEAU_TOL if plateau_tol is None else plateau_tol
        min_levels = settings.TREND_MIN_LEVELS if min_levels is None else min_levels

        levels = [(float(res), float(val)) for res, val in levels]
        resolutions = np.array([res for res, _ in levels])
        values = np.array([val for _, val in levels])

        growth = 0.0
        if len(levels) >= 2 and np.all(values > 0) and np.all(np.isfinite(values)):
            growth = float(np.polyfit(np.log(resolutions), np.log(values), 1)[0])
        elif len(levels) >= 2 and not np.all(np.isfinite(values)):
            growth = float("inf")

        if len(levels) < min_levels:
            verdict = TrendVerdict.INCONCLUSIVE
        else:
            last, prev = values[-1], values[-2]
            scale = max(abs(last), abs(prev))
            if np.isfinite(scale) and abs(last - prev) <= plateau_tol * scale:
                verdict = TrendVerdict.FINITE
            elif growth > slope_threshold and np.all(np.diff(values) > 0):
                verdict = TrendVerdict.DIVERGENT
            else:
                verdict = TrendVerdict.INCONCLUSIVE
        return cls(levels=levels, verdict=verdict, growth_exponent=growth, quantity=quantity)

    @property
    def values(self) -> List[float]:
        return [val for _, val in self.levels]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "levels": [{"resolution": r, "value": v} for r, v in self.levels],
            "verdict": self.verdict.value,
            "growth_exponent": self.growth_exponent,
        }


@dataclass
class ClassLabel:
    """Dichotomy verdict with its supporting evidence"""
    label: ClassKind
    q: float
    evidence: RefinementTrend
    max_trend: Optional[RefinementTrend] = None
    slice_sup: Optional[RefinementTrend] = None

    def record(self) -> str:
        """Machine readable one-line record `label,q,growth_exponent`"""
        return f"{self.label.value},{self.q:.17g},{self.evidence.growth_exponent:.17g}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "label": self.label.value,
            "q": self.q,
            "evidence": self.evidence.to_dict(),
            "max_trend": self.max_trend.to_dict() if self.max_trend else None,
            "slice_sup": self.slice_sup.to_dict() if self.slice_sup else None,
        }


@dataclass
class CheckReport:
    """Both sides of a checked inequality with the fitted constant"""
    name: str
    lhs: float
    rhs: float
    fitted_constant: float
    passed: bool
    refinement_stability: float = 1.0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "fitted_constant": self.fitted_constant,
            "pass": bool(self.passed),
            "refinement_stability": self.refinement_stability,
            "details": self.details,
        }


class BaseField(ABC):
    """Abstract nonnegative radial field u(r, t)

    Implementations evaluate vectorized over broadcast arrays of radii and
    times and provide the radial derivative of u^m.
    """

    def __init__(self, pme: PmeParams):
        self.pme = pme

    @property
    def radius(self) -> float:
        """Radius of the spatial domain"""
        return float("inf")

    @property
    def t_range(self) -> Tuple[float, float]:
        """Closed time interval on which the field may be evaluated"""
        return (-float("inf"), float("inf"))

    @property
    def singular_time(self) -> Optional[float]:
        """Time slice where the field concentrates or blows up, if any"""
        return None

    @abstractmethod
    def value(self, r, t) -> np.ndarray:
        """u(r, t)"""

    @abstractmethod
    def grad_um(self, r, t) -> np.ndarray:
        """∂_r (u^m)(r, t)"""

    def grad(self, r, t) -> np.ndarray:
        """∂_r u, recovered from ∂_r(u^m) where u > 0"""
        u = np.asarray(self.value(r, t), dtype=float)
        g = np.asarray(self.grad_um(r, t), dtype=float)
        m = self.pme.m
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(u > 0, g / (m * np.power(u, m - 1.0)), 0.0)
        return out

    def __call__(self, r, t) -> np.ndarray:
        return self.value(r, t)

    def describe(self) -> Dict[str, Any]:
        return {"kind": type(self).__name__, "pme": self.pme.to_dict()}
