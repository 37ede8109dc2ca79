"""
Blow-up rates and the friendly-giant minorant
"""
import numpy as np
import pytest

from pmelab.core.exceptions import PreconditionException, ValidationException
from pmelab.diagnostics import blowup_rate_fit, minorant_check, rate_liminf
from pmelab.services.pme_solver import Grid1D, sample_trajectory


class TestRateFit:
    """Exponent of u(x0, t) against t − t0"""

    def test_giant(self, giant_field_21):
        fit = blowup_rate_fit(giant_field_21, 0.3, 0.0, window=(1e-4, 1e-1))
        assert fit.exponent == pytest.approx(-1.0, rel=0.05)
        assert fit.amplitude == pytest.approx(giant_field_21.profile.evaluate(0.3), rel=1e-6)

    def test_source_solution(self, barenblatt_field_21):
        fit = blowup_rate_fit(barenblatt_field_21, 0.0, 0.0, window=(1e-4, 1e-1))
        assert fit.exponent == pytest.approx(-1.0 / 3.0, rel=0.05)

    def test_trajectory(self, giant_field_21):
        traj = sample_trajectory(giant_field_21, Grid1D.radial(1.0, 40, 1), np.geomspace(1e-3, 1.0, 12))
        fit = blowup_rate_fit(traj, traj.grid.centers[0], 0.0)
        assert fit.exponent == pytest.approx(-1.0, rel=0.05)
        assert fit.samples == 12

    def test_needs_window(self, giant_field_21):
        with pytest.raises(ValidationException):
            blowup_rate_fit(giant_field_21, 0.3, 0.0)

    def test_needs_decade(self, giant_field_21):
        with pytest.raises(PreconditionException):
            blowup_rate_fit(giant_field_21, 0.3, 0.0, window=(0.5, 1.0))


class TestMinorant:
    """u ≥ U(x)(t − t0)^{−1/(m−1)} after a total blow-up"""

    def test_giant_saturates(self, giant_field_21, profile_21):
        report = minorant_check(giant_field_21, profile_21, window=(0.01, 1.0), tol=1e-9)
        assert report.passed
        assert report.fitted_constant == pytest.approx(1.0, rel=1e-9)

    def test_liminf(self, giant_field_21):
        assert rate_liminf(giant_field_21, [0.0, 0.5], 0.0, [1e-3, 1e-2]) > 0

    def test_source_is_not_minorized(self, barenblatt_field_21, profile_21):
        with pytest.raises(PreconditionException):
            minorant_check(barenblatt_field_21, profile_21, window=(1e-6, 1e-2))


if __name__ == "__main__":
    pytest.main([__file__])
