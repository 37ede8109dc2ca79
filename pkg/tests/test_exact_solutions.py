"""
Closed-form solutions and the pointwise residual oracle
"""
import numpy as np
import pytest

from pmelab.core.exceptions import DomainException, PreconditionException, ValidationException
from pmelab.services.exact_solutions import (
    BarenblattParams,
    FastBlowupParams,
    barenblatt_c_for_mass,
    barenblatt_grad_um,
    barenblatt_k,
    barenblatt_lambda,
    barenblatt_mass,
    barenblatt_support_radius,
    barenblatt_value,
    fast_blowup_condition_check,
    fast_blowup_value,
    giant_value,
    pme_residual_pointwise,
)
from pmelab.fields import FastBlowupField


class TestBarenblatt:
    """Source solution"""

    def test_exponents(self, pme_21):
        assert barenblatt_lambda(pme_21) == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert barenblatt_k(pme_21) == pytest.approx(1.0 / 12.0, abs=1e-15)

    def test_support_radius(self, barenblatt_21):
        assert barenblatt_support_radius(barenblatt_21, 1.0) == pytest.approx(np.sqrt(12.0), rel=1e-12)
        assert barenblatt_value(barenblatt_21, np.sqrt(12.0) + 1e-9, 1.0) == 0.0
        assert barenblatt_value(barenblatt_21, 0.0, 1.0) == pytest.approx(1.0)

    def test_zero_before_shift(self, pme_21):
        bp = BarenblattParams(pme_21, C=1.0, t_shift=0.5)
        values = barenblatt_value(bp, np.linspace(0.0, 1.0, 5), 0.5)
        assert np.all(values == 0.0)
        with pytest.raises(ValidationException):
            barenblatt_support_radius(bp, 0.5)

    def test_rejects_nonpositive_constant(self, pme_21):
        with pytest.raises(ValidationException):
            BarenblattParams(pme_21, C=0.0)

    def test_mass_closed_form(self, barenblatt_21):
        # ∫ (1 − x²/12)_+ dx = 4√12/3 at t = 1
        assert barenblatt_mass(barenblatt_21, 1.0) == pytest.approx(4.0 * np.sqrt(12.0) / 3.0, rel=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_mass_conserved(self, n):
        from pmelab.core.base import PmeParams

        bp = BarenblattParams(PmeParams(2.0, n), C=0.7)
        masses = [barenblatt_mass(bp, t) for t in (0.5, 1.0, 1.5, 10.0)]
        assert (max(masses) - min(masses)) / max(masses) <= 1e-8

    def test_c_for_mass(self, pme_21):
        target = 2.0 * barenblatt_mass(BarenblattParams(pme_21, 1.0), 1.0)
        C = barenblatt_c_for_mass(pme_21, target)
        assert C == pytest.approx(2.0 ** (2.0 / 3.0), rel=1e-10)
        assert barenblatt_mass(BarenblattParams(pme_21, C), 3.0) == pytest.approx(target, rel=1e-9)

    def test_gradient_matches_difference(self, barenblatt_21):
        x, t, h = 1.3, 1.0, 1e-6
        w = lambda r: barenblatt_value(barenblatt_21, r, t) ** 2
        fd = (w(x + h) - w(x - h)) / (2.0 * h)
        assert barenblatt_grad_um(barenblatt_21, x, t) == pytest.approx(fd, rel=1e-6)

    def test_residual_second_order(self, barenblatt_21, pme_21):
        """Max residual over interior points shrinks like h²"""
        u = lambda r, t: barenblatt_value(barenblatt_21, r, t)
        points = np.linspace(0.1, 3.3, 20)
        hs = [1e-2, 5e-3, 2.5e-3]
        residuals = [
            max(abs(pme_residual_pointwise(u, float(x), 1.0, h, pme_21)) for x in points) for h in hs
        ]
        order = np.polyfit(np.log(hs), np.log(residuals), 1)[0]
        assert order == pytest.approx(2.0, abs=0.3)

    def test_residual_needs_parameters(self, barenblatt_21):
        u = lambda r, t: barenblatt_value(barenblatt_21, r, t)
        with pytest.raises(ValidationException):
            pme_residual_pointwise(u, 0.5, 1.0, 1e-3)


class TestGiant:
    """Separable friendly giant"""

    def test_separable_decay(self, profile_21):
        x = 0.3
        u1 = giant_value(profile_21, 0.0, x, 1.0)
        u2 = giant_value(profile_21, 0.0, x, 2.0)
        assert u2 == pytest.approx(u1 / 2.0, rel=1e-12)
        assert giant_value(profile_21, 0.0, x, 0.0) == 0.0

    def test_is_a_solution(self, giant_field_21, pme_21):
        for x in (0.0, 0.2, 0.5, 0.7):
            res = pme_residual_pointwise(giant_field_21, x, 1.0, 1e-3, pme_21)
            assert abs(res) < 1e-3


class TestFastBlowup:
    """Exponential blow-up family"""

    @pytest.fixture
    def inverse(self, profile_21):
        return FastBlowupParams.named(profile_21, "inverse")

    def test_supersolution_residual(self, inverse, pme_21):
        field = FastBlowupField(inverse, "inverse")
        for x in np.linspace(0.1, 0.8, 8):
            assert pme_residual_pointwise(field, float(x), 1.0, 1e-3, pme_21) >= 0.0

    def test_condition_holds_for_inverse(self):
        report = fast_blowup_condition_check(
            lambda t: 1.0 / t, lambda t: -1.0 / t ** 2, np.geomspace(0.01, 10.0, 200)
        )
        assert report.passed
        assert report.fitted_constant > 0.0

    def test_condition_fails(self):
        report = fast_blowup_condition_check(
            lambda t: -5.0 * t, lambda t: -5.0 + 0.0 * t, np.linspace(0.1, 2.0, 20)
        )
        assert not report.passed

    def test_inconsistent_derivative(self):
        with pytest.raises(PreconditionException):
            fast_blowup_condition_check(lambda t: 1.0 / t, lambda t: 1.0 / t ** 2, [0.5, 1.0])

    def test_saturation(self, inverse):
        result = fast_blowup_value(inverse, 0.0, 1e-3)
        assert result.saturated
        assert result.value == np.finfo(float).max
        assert not fast_blowup_value(inverse, 0.0, 1.0).saturated

    def test_domain(self, inverse):
        with pytest.raises(DomainException):
            fast_blowup_value(inverse, 0.0, 0.0)

    def test_unknown_growth(self, profile_21):
        with pytest.raises(ValidationException):
            FastBlowupParams.named(profile_21, "cubic")


if __name__ == "__main__":
    pytest.main([__file__])
