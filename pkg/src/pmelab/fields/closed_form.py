"""
Field-function adapters over the closed-form solutions.
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.base import BaseField, PmeParams
from ..core.exceptions import ValidationException
from ..services.elliptic_profile import GiantProfile, solve_profile
from ..services.exact_solutions import (
    BarenblattParams,
    FastBlowupParams,
    barenblatt_grad_um,
    barenblatt_value,
    fast_blowup_grad_um,
    fast_blowup_value,
    giant_grad_um,
    giant_value,
)


class BarenblattField(BaseField):
    """Source solution centered at the origin, zero before its shift time"""

    def __init__(self, bp: BarenblattParams):
        if bp.center != 0.0:
            raise ValidationException("Radial fields must be centered at the origin", field="center")
        super().__init__(bp.pme)
        self.bp = bp

    @classmethod
    def from_config(cls, pme: PmeParams, params: Dict[str, Any]) -> "BarenblattField":
        return cls(BarenblattParams(pme, C=params.get("C", 1.0), t_shift=params.get("t_shift", 0.0)))

    @property
    def singular_time(self) -> Optional[float]:
        return self.bp.t_shift

    def value(self, r, t):
        return barenblatt_value(self.bp, r, t)

    def grad_um(self, r, t):
        return barenblatt_grad_um(self.bp, r, t)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "C": self.bp.C, "t_shift": self.bp.t_shift}


class GiantField(BaseField):
    """U(x)(t − t0)^{−1/(m−1)} on B(0, R), zero up to t0"""

    def __init__(self, profile: GiantProfile, t0: float = 0.0):
        super().__init__(profile.pme)
        self.profile = profile
        self.t0 = float(t0)

    @classmethod
    def from_config(cls, pme: PmeParams, params: Dict[str, Any]) -> "GiantField":
        profile = solve_profile(pme, R=params.get("R", 1.0), steps=params.get("steps"))
        return cls(profile, params.get("t0", 0.0))

    @property
    def radius(self) -> float:
        return self.profile.R

    @property
    def singular_time(self) -> Optional[float]:
        return self.t0

    def value(self, r, t):
        return giant_value(self.profile, self.t0, r, t)

    def grad_um(self, r, t):
        return giant_grad_um(self.profile, self.t0, r, t)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "R": self.profile.R, "t0": self.t0}


class FastBlowupField(BaseField):
    """U(x) e^{f(t)/(m−1)}, defined for t > 0"""

    def __init__(self, fb: FastBlowupParams, growth: str = "custom"):
        super().__init__(fb.profile.pme)
        self.fb = fb
        self.growth = growth

    @classmethod
    def from_config(cls, pme: PmeParams, params: Dict[str, Any]) -> "FastBlowupField":
        profile = solve_profile(pme, R=params.get("R", 1.0), steps=params.get("steps"))
        growth = params.get("growth", "inverse")
        return cls(FastBlowupParams.named(profile, growth), growth)

    @property
    def radius(self) -> float:
        return self.fb.profile.R

    @property
    def t_range(self) -> Tuple[float, float]:
        return (0.0, float("inf"))

    @property
    def singular_time(self) -> Optional[float]:
        return 0.0

    def value(self, r, t):
        return fast_blowup_value(self.fb, r, t).value

    def grad_um(self, r, t):
        return fast_blowup_grad_um(self.fb, r, t)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "R": self.fb.profile.R, "growth": self.growth}


class ConstantField(BaseField):
    def __init__(self, pme: PmeParams, c: float, radius: float = float("inf")):
        if c < 0:
            raise ValidationException("Constant field must be nonnegative", field="value")
        super().__init__(pme)
        self.c = float(c)
        self._radius = float(radius)

    @classmethod
    def from_config(cls, pme: PmeParams, params: Dict[str, Any]) -> "ConstantField":
        return cls(pme, params.get("value", 1.0), params.get("radius", float("inf")))

    @property
    def radius(self) -> float:
        return self._radius

    def value(self, r, t):
        shape = np.broadcast(np.asarray(r, dtype=float), np.asarray(t, dtype=float)).shape
        out = np.full(shape, self.c)
        return float(out) if out.ndim == 0 else out

    def grad_um(self, r, t):
        return self.value(r, t) * 0.0

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "value": self.c}
