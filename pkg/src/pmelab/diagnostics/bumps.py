"""
Polynomial bumps with closed-form derivatives.

Test functions φ = A(1 − s²)₊^p(1 − σ²)₊^p with s = (x − x_c)/ρ and
σ = (t − t_c)/τ, and cut-offs ζ ∈ [0, 1] equal to 1 on a plateau. The
spatial coordinate is the signed line coordinate for n = 1 and the radius
otherwise (then x_c = 0).
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..core.exceptions import ValidationException


def _profile(s: np.ndarray, power: int) -> Tuple[np.ndarray, np.ndarray]:
    """(1 − s²)₊^p and its derivative in s"""
    s = np.asarray(s, dtype=float)
    base = np.maximum(1.0 - s ** 2, 0.0)
    value = base ** power
    deriv = np.where(base > 0, -2.0 * power * s * base ** (power - 1), 0.0)
    return value, deriv


def _plateau_profile(d: np.ndarray, inner: float, outer: float, power: int) -> Tuple[np.ndarray, np.ndarray]:
    """1 on |d| ≤ inner, bump decay to 0 at |d| = outer; derivative in d"""
    d = np.asarray(d, dtype=float)
    dist = np.abs(d)
    width = outer - inner
    s = np.clip((dist - inner) / width, 0.0, None)
    value, ds = _profile(s, power)
    value = np.where(dist <= inner, 1.0, value)
    deriv = np.where(dist <= inner, 0.0, ds * np.sign(d) / width)
    return value, deriv


@dataclass(frozen=True)
class TestFunction:
    """Nonnegative space-time bump φ"""
    __test__ = False

    x_c: float = 0.0
    t_c: float = 0.0
    rho: float = 1.0
    tau: float = 1.0
    amplitude: float = 1.0
    power: int = 3

    def __post_init__(self):
        if self.rho <= 0 or self.tau <= 0:
            raise ValidationException("Bump radii must be positive", field="rho")
        if self.power < 2:
            raise ValidationException("Bump power must be at least 2", field="power")

    @property
    def x_bounds(self) -> Tuple[float, float]:
        return (self.x_c - self.rho, self.x_c + self.rho)

    @property
    def t_bounds(self) -> Tuple[float, float]:
        return (self.t_c - self.tau, self.t_c + self.tau)

    def _factors(self, x, t):
        sx, dsx = _profile((np.asarray(x, dtype=float) - self.x_c) / self.rho, self.power)
        st, dst = _profile((np.asarray(t, dtype=float) - self.t_c) / self.tau, self.power)
        return sx, dsx / self.rho, st, dst / self.tau

    def value(self, x, t):
        sx, _, st, _ = self._factors(x, t)
        return self.amplitude * sx * st

    def phi_t(self, x, t):
        sx, _, _, dst = self._factors(x, t)
        return self.amplitude * sx * dst

    def grad(self, x, t):
        _, dsx, st, _ = self._factors(x, t)
        return self.amplitude * dsx * st

    def terms(self) -> List[Tuple[float, "TestFunction"]]:
        return [(1.0, self)]

    def __add__(self, other) -> "TestFunctionSum":
        return TestFunctionSum(self.terms() + other.terms())

    def __mul__(self, coef: float) -> "TestFunctionSum":
        return TestFunctionSum([(coef * c, f) for c, f in self.terms()])

    __rmul__ = __mul__


class TestFunctionSum:
    """Finite linear combination of bumps"""
    __test__ = False

    def __init__(self, terms: List[Tuple[float, TestFunction]]):
        if not terms:
            raise ValidationException("Empty combination of test functions", field="terms")
        self._terms = list(terms)

    def terms(self) -> List[Tuple[float, TestFunction]]:
        return list(self._terms)

    @property
    def x_bounds(self) -> Tuple[float, float]:
        return (min(f.x_bounds[0] for _, f in self._terms), max(f.x_bounds[1] for _, f in self._terms))

    @property
    def t_bounds(self) -> Tuple[float, float]:
        return (min(f.t_bounds[0] for _, f in self._terms), max(f.t_bounds[1] for _, f in self._terms))

    def value(self, x, t):
        return sum(c * f.value(x, t) for c, f in self._terms)

    def phi_t(self, x, t):
        return sum(c * f.phi_t(x, t) for c, f in self._terms)

    def grad(self, x, t):
        return sum(c * f.grad(x, t) for c, f in self._terms)

    def __add__(self, other) -> "TestFunctionSum":
        return TestFunctionSum(self.terms() + other.terms())

    def __mul__(self, coef: float) -> "TestFunctionSum":
        return TestFunctionSum([(coef * c, f) for c, f in self._terms])

    __rmul__ = __mul__


@dataclass(frozen=True)
class CutoffFunction:
    """ζ = 1 on B(x_c, rho_in) × [t_c − tau_in, t_c + tau_in], supported in the outer box"""
    x_c: float = 0.0
    t_c: float = 0.0
    rho_in: float = 0.5
    rho: float = 1.0
    tau_in: float = 0.5
    tau: float = 1.0
    power: int = 3

    def __post_init__(self):
        if not 0.0 <= self.rho_in < self.rho:
            raise ValidationException("Cut-off needs 0 ≤ rho_in < rho", field="rho_in")
        if not 0.0 <= self.tau_in < self.tau:
            raise ValidationException("Cut-off needs 0 ≤ tau_in < tau", field="tau_in")
        if self.power < 2:
            raise ValidationException("Cut-off power must be at least 2", field="power")

    @property
    def x_bounds(self) -> Tuple[float, float]:
        return (self.x_c - self.rho, self.x_c + self.rho)

    @property
    def t_bounds(self) -> Tuple[float, float]:
        return (self.t_c - self.tau, self.t_c + self.tau)

    def _factors(self, x, t):
        sx, dsx = _plateau_profile(np.asarray(x, dtype=float) - self.x_c, self.rho_in, self.rho, self.power)
        st, dst = _plateau_profile(np.asarray(t, dtype=float) - self.t_c, self.tau_in, self.tau, self.power)
        return sx, dsx, st, dst

    def value(self, x, t):
        sx, _, st, _ = self._factors(x, t)
        return sx * st

    def zeta_t(self, x, t):
        sx, _, _, dst = self._factors(x, t)
        return sx * dst

    def grad(self, x, t):
        _, dsx, st, _ = self._factors(x, t)
        return dsx * st
