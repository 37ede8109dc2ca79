"""
Shooting solve of the elliptic profile
"""
import numpy as np
import pytest

from pmelab.config import get_settings
from pmelab.core.base import PmeParams
from pmelab.core.exceptions import DomainException, ShootingException, ValidationException
from pmelab.services.elliptic_profile import (
    GiantProfile,
    profile_from_csv,
    profile_residual,
    profile_to_csv,
    rescale_profile,
    solve_profile,
    whole_space_lower_bound,
)


class TestSolveProfile:
    """Profile shape and residual"""

    def test_shape(self, profile_21):
        U = profile_21.U_values
        assert profile_21.U0 > 0
        assert U[-1] == 0.0
        assert np.all(np.diff(U) < 0)
        assert profile_21.w0 == pytest.approx(profile_21.U0 ** 2, rel=1e-12)

    def test_residual(self, profile_21):
        assert profile_residual(profile_21) <= get_settings().PROFILE_RESIDUAL_LIMIT
        assert profile_21.residual_max == pytest.approx(profile_residual(profile_21))

    def test_radial_profile(self, pme_22):
        profile = solve_profile(pme_22, R=1.0)
        assert profile_residual(profile) <= get_settings().PROFILE_RESIDUAL_LIMIT
        assert profile.evaluate(0.5) < profile.U0

    def test_boundary_in_u_space(self, profile_21):
        """The computed endpoint is kept and the snapped zero is within tol·U(0)"""
        tol = get_settings().PROFILE_TOL
        assert profile_21.U_values[-1] == 0.0
        assert profile_21.r_grid[-1] == 1.0
        assert profile_21.boundary_value > 0.0
        assert 0.0 < profile_21.boundary_shift < 1e-6
        assert profile_21.boundary_error <= tol * profile_21.U0
        payload = profile_21.to_dict()
        assert payload["boundary_value"] == profile_21.boundary_value
        assert payload["boundary_shift"] == profile_21.boundary_shift

    @pytest.mark.parametrize("m, n", [(2.0, 1), (3.0, 1), (3.0, 2)])
    def test_default_tolerance_met(self, m, n):
        profile = solve_profile(PmeParams(m, n), R=1.0)
        assert profile.boundary_error <= get_settings().PROFILE_TOL * profile.U0
        assert np.all(np.diff(profile.r_grid) > 0)

    def test_unreachable_tolerance(self, pme_21):
        with pytest.raises(ShootingException, match=r"tol·U\(0\)") as info:
            solve_profile(pme_21, R=1.0, tol=1e-300)
        assert info.value.details["U_R"] > 0.0

    def test_rescaling_carries_boundary_record(self, profile_21):
        scaled = rescale_profile(profile_21, 2.0)
        assert scaled.boundary_shift == pytest.approx(2.0 * profile_21.boundary_shift)
        assert scaled.boundary_value == pytest.approx(4.0 * profile_21.boundary_value)

    def test_evaluate_outside_domain(self, profile_21):
        with pytest.raises(DomainException):
            profile_21.evaluate(1.01)

    def test_rejects_invalid_input(self, pme_21):
        with pytest.raises(ValidationException):
            solve_profile(pme_21, R=-1.0)
        with pytest.raises(ValidationException):
            solve_profile(pme_21, R=1.0, steps=3)

    def test_profile_validation(self, pme_21):
        r = np.linspace(0.0, 1.0, 5)
        with pytest.raises(ValidationException):
            GiantProfile(pme_21, 1.0, r, np.array([1.0, 1.2, 0.5, 0.2, 0.0]), w0=1.0)
        with pytest.raises(ValidationException):
            GiantProfile(pme_21, 1.0, r, np.array([1.0, 0.8, 0.5, 0.2, 0.1]), w0=1.0)


class TestRescaling:
    """Scaling of the profile with the ball radius"""

    def test_round_trip(self, profile_21):
        back = rescale_profile(rescale_profile(profile_21, 2.0), 1.0)
        assert np.max(np.abs(back.U_values - profile_21.U_values)) <= 1e-10

    def test_matches_direct_solve(self, profile_21, pme_21):
        scaled = rescale_profile(profile_21, 2.0)
        direct = solve_profile(pme_21, R=2.0)
        r = np.linspace(0.0, 1.9, 64)
        ref = direct.evaluate(r)
        assert np.max(np.abs(scaled.evaluate(r) - ref) / ref) <= 1e-6

    def test_scaling_factor(self, profile_21):
        # U scales like R^{2/(m−1)}
        assert rescale_profile(profile_21, 3.0).U0 == pytest.approx(9.0 * profile_21.U0, rel=1e-12)


class TestWholeSpaceBound:
    """Lower bounds forced by total blow-up on R^n"""

    def test_grows_quadratically(self, profile_21):
        radii = [1.0, 2.0, 4.0, 8.0]
        bounds = whole_space_lower_bound(profile_21, 0.0, 1.0, 0.0, radii)
        np.testing.assert_allclose(bounds / bounds[0], np.square(radii), rtol=1e-12)

    def test_point_outside_ball(self, profile_21):
        with pytest.raises(DomainException):
            whole_space_lower_bound(profile_21, 3.0, 1.0, 0.0, [1.0])


class TestProfileCsv:
    """Profile artifacts"""

    def test_read_back(self, profile_21, tmp_path):
        path = profile_to_csv(profile_21, tmp_path / "profile.csv")
        loaded = profile_from_csv(path, profile_21.pme)
        assert loaded.R == profile_21.R
        assert loaded.U0 == profile_21.U0
        assert loaded.evaluate(0.5) == pytest.approx(profile_21.evaluate(0.5), rel=1e-12)


if __name__ == "__main__":
    pytest.main([__file__])
