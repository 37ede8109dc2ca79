"""
Harnack, weak Harnack, Caccioppoli and Sobolev checkers
"""
import numpy as np
import pytest

from pmelab.core.exceptions import DomainException, PreconditionException, ValidationException
from pmelab.diagnostics import (
    CutoffFunction,
    caccioppoli_check,
    harnack_check,
    log_caccioppoli_check,
    sobolev_check,
    weak_harnack_check,
)
from pmelab.fields import BarenblattField, ConstantField, PowerField, RescaledField, TruncatedField
from pmelab.services.exact_solutions import BarenblattParams


@pytest.fixture(scope="module")
def shifted(pme_21):
    """Source solution started at t = −1, positive near the origin for t ≥ 0"""
    return BarenblattField(BarenblattParams(pme_21, C=1.0, t_shift=-1.0))


@pytest.fixture(scope="module")
def interior_cutoff():
    return CutoffFunction(x_c=0.0, t_c=1.0, rho_in=0.25, rho=0.5, tau_in=0.25, tau=0.5)


SAMPLES = [(0.2, 1.0, 0.2), (0.0, 0.5, 0.3), (0.5, 2.0, 0.1)]


class TestHarnack:
    """Intrinsic Harnack inequality"""

    def test_source_solution(self, shifted):
        report = harnack_check(shifted, SAMPLES)
        assert report.passed
        assert np.isfinite(report.fitted_constant)
        assert report.fitted_constant >= 1.0
        assert report.refinement_stability < 2.0
        assert report.details["C2"] in (0.05, 0.1, 0.2)

    def test_invariant_under_rescaling(self, shifted):
        s = 3.0
        scaled = RescaledField(shifted, s)
        factor = scaled.time_factor
        report = harnack_check(shifted, SAMPLES)
        rescaled = harnack_check(scaled, [(x0, t0 / factor, r) for x0, t0, r in SAMPLES])
        assert rescaled.details["C2"] == report.details["C2"]
        assert rescaled.fitted_constant == pytest.approx(report.fitted_constant, rel=1e-9)

    def test_constant_field(self, pme_21):
        report = harnack_check(ConstantField(pme_21, 2.0), SAMPLES)
        assert report.fitted_constant == pytest.approx(1.0)
        assert report.passed

    def test_needs_positive_center(self, pme_21):
        with pytest.raises(PreconditionException):
            harnack_check(ConstantField(pme_21, 0.0), SAMPLES)

    def test_needs_samples(self, shifted):
        with pytest.raises(ValidationException):
            harnack_check(shifted, [])


class TestWeakHarnack:
    """Weak Harnack inequality for supersolutions"""

    def test_source_solution(self, shifted):
        report = weak_harnack_check(shifted, 0.0, 0.1, 1.0, T=2.0)
        assert report.passed
        assert np.isfinite(report.fitted_constant)

    def test_giant_after_blowup(self, giant_field_21):
        report = weak_harnack_check(giant_field_21, 0.0, 0.1, 0.5, T=1.0)
        assert report.passed
        assert report.details["T"] == 1.0

    def test_ball_leaves_domain(self, giant_field_21):
        with pytest.raises(PreconditionException):
            weak_harnack_check(giant_field_21, 0.0, 0.2, 0.5, T=1.0)

    def test_needs_finite_end(self, shifted):
        with pytest.raises(ValidationException):
            weak_harnack_check(shifted, 0.0, 0.1, 1.0)


class TestCaccioppoli:
    """Energy estimates on truncated solutions"""

    def test_truncated_source(self, shifted, interior_cutoff):
        report = caccioppoli_check(TruncatedField(shifted, upper=10.0), interior_cutoff, eps=0.5)
        assert report.passed
        assert np.isfinite(report.fitted_constant)

    def test_near_m(self, shifted, interior_cutoff, pme_21):
        report = caccioppoli_check(TruncatedField(shifted, upper=10.0), interior_cutoff, eps=pme_21.m - 0.01)
        assert np.isfinite(report.lhs)
        assert np.isfinite(report.rhs)

    def test_rejects_eps_one(self, shifted, interior_cutoff):
        with pytest.raises(ValidationException):
            caccioppoli_check(shifted, interior_cutoff, eps=1.0)

    def test_log_estimate(self, shifted, interior_cutoff):
        field = TruncatedField(shifted, upper=10.0, lower=0.01)
        report = log_caccioppoli_check(field, interior_cutoff)
        assert report.passed
        assert report.details["C1"] == 4.0

    def test_log_estimate_giant(self, giant_field_21, interior_cutoff):
        field = TruncatedField(giant_field_21, upper=1e3, lower=0.01)
        assert log_caccioppoli_check(field, interior_cutoff).passed

    def test_cutoff_outside_domain(self, giant_field_21):
        with pytest.raises(DomainException):
            caccioppoli_check(giant_field_21, CutoffFunction(t_c=1.0, rho_in=0.5, rho=1.5), eps=0.5)


class TestSobolev:
    """Parabolic Sobolev inequality"""

    def test_zero_function(self, pme_21, interior_cutoff):
        report = sobolev_check(ConstantField(pme_21, 0.0), interior_cutoff, p=2.0, r=1.0)
        assert report.lhs == 0.0
        assert report.fitted_constant == 0.0
        assert report.passed

    @pytest.mark.parametrize("mode", ["printed", "balanced"])
    def test_pressure_power(self, shifted, interior_cutoff, mode):
        w = PowerField(shifted, 0.5)
        report = sobolev_check(w, interior_cutoff, p=2.0, r=1.0, exponent_mode=mode)
        assert np.isfinite(report.fitted_constant)
        assert report.fitted_constant > 0
        assert report.details["q"] == pytest.approx(4.0)
        assert report.details["mode"] == mode

    def test_unknown_mode(self, shifted, interior_cutoff):
        with pytest.raises(ValidationException):
            sobolev_check(shifted, interior_cutoff, p=2.0, r=1.0, exponent_mode="other")


if __name__ == "__main__":
    pytest.main([__file__])
