"""
Fields built from other fields: truncations, powers and intrinsic rescaling.
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.base import BaseField
from ..core.exceptions import ValidationException


class _WrappedField(BaseField):
    def __init__(self, base: BaseField):
        super().__init__(base.pme)
        self.base = base

    @property
    def radius(self) -> float:
        return self.base.radius

    @property
    def t_range(self) -> Tuple[float, float]:
        return self.base.t_range

    @property
    def singular_time(self) -> Optional[float]:
        return self.base.singular_time


class TruncatedField(_WrappedField):
    """min{max{u, lower}, upper}; ∇ vanishes where a bound is active"""

    def __init__(self, base: BaseField, upper: float = float("inf"), lower: float = 0.0):
        if not 0.0 <= lower < upper:
            raise ValidationException("Truncation needs 0 ≤ lower < upper", field="upper")
        super().__init__(base)
        self.upper = float(upper)
        self.lower = float(lower)

    @property
    def singular_time(self) -> Optional[float]:
        return None if np.isfinite(self.upper) else self.base.singular_time

    def value(self, r, t):
        return np.clip(self.base.value(r, t), self.lower, self.upper)

    def grad_um(self, r, t):
        u = np.asarray(self.base.value(r, t), dtype=float)
        g = np.asarray(self.base.grad_um(r, t), dtype=float)
        return np.where((u > self.lower) & (u < self.upper), g, 0.0)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "base": self.base.describe(), "lower": self.lower, "upper": self.upper}


class PowerField(_WrappedField):
    """w = u^γ, used to feed Sobolev checks"""

    def __init__(self, base: BaseField, gamma: float):
        if gamma <= 0:
            raise ValidationException("Power must be positive", field="gamma")
        super().__init__(base)
        self.gamma = float(gamma)

    def value(self, r, t):
        return np.power(np.asarray(self.base.value(r, t), dtype=float), self.gamma)

    def grad(self, r, t):
        u = np.asarray(self.base.value(r, t), dtype=float)
        du = np.asarray(self.base.grad(r, t), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(u > 0, self.gamma * np.power(u, self.gamma - 1.0) * du, 0.0)
        return out

    def grad_um(self, r, t):
        m = self.pme.m
        w = self.value(r, t)
        return m * np.power(w, m - 1.0) * self.grad(r, t)

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "base": self.base.describe(), "gamma": self.gamma}


class RescaledField(_WrappedField):
    """u_s(x, t) = s·u(x, s^{m−1} t), again a solution when u is"""

    def __init__(self, base: BaseField, s: float):
        if s <= 0:
            raise ValidationException("Rescaling factor must be positive", field="s")
        super().__init__(base)
        self.s = float(s)

    @property
    def time_factor(self) -> float:
        return self.s ** (self.pme.m - 1.0)

    @property
    def t_range(self) -> Tuple[float, float]:
        a, b = self.base.t_range
        return (a / self.time_factor, b / self.time_factor)

    @property
    def singular_time(self) -> Optional[float]:
        ts = self.base.singular_time
        return None if ts is None else ts / self.time_factor

    def value(self, r, t):
        return self.s * np.asarray(self.base.value(r, np.asarray(t) * self.time_factor), dtype=float)

    def grad_um(self, r, t):
        g = np.asarray(self.base.grad_um(r, np.asarray(t) * self.time_factor), dtype=float)
        return self.s ** self.pme.m * g

    def describe(self) -> Dict[str, Any]:
        return {**super().describe(), "base": self.base.describe(), "s": self.s}
