"""
Field adapters and the field factory
"""
import numpy as np
import pytest

from pmelab.core.base import BaseField
from pmelab.core.exceptions import ConfigurationException, DomainException, ValidationException
from pmelab.fields import (
    BarenblattField,
    ConstantField,
    FieldFactory,
    FieldKind,
    PowerField,
    RescaledField,
    TrajectoryField,
    TruncatedField,
    as_field,
)
from pmelab.services.exact_solutions import pme_residual_pointwise
from pmelab.services.pme_solver import Grid1D, sample_trajectory


class TestFieldFactory:
    """Creation by name"""

    def test_all_kinds_registered(self):
        for kind in FieldKind:
            assert FieldFactory.is_registered(kind)

    def test_create_barenblatt(self, pme_21):
        field = FieldFactory.create("barenblatt", pme_21, {"C": 2.0, "t_shift": -1.0})
        assert isinstance(field, BarenblattField)
        assert field.describe()["C"] == 2.0
        assert field.singular_time == -1.0

    def test_create_constant(self, pme_21):
        field = FieldFactory.create("constant", pme_21, {"value": 3.0})
        assert field.value(np.zeros(4), 1.0).tolist() == [3.0] * 4
        assert field.grad(0.5, 1.0) == 0.0

    def test_unknown_kind(self, pme_21):
        with pytest.raises(ConfigurationException):
            FieldFactory.create("heat_kernel", pme_21)


class TestDerivedFields:
    """Truncations, powers and rescalings"""

    def test_truncation(self, barenblatt_field_21):
        field = TruncatedField(barenblatt_field_21, upper=0.5)
        r = np.linspace(0.0, 3.0, 7)
        assert np.all(field.value(r, 1.0) <= 0.5)
        # gradient vanishes where the cap is active
        assert field.grad_um(0.0, 1.0) == 0.0
        assert field.singular_time is None

    def test_truncation_bounds(self, barenblatt_field_21):
        with pytest.raises(ValidationException):
            TruncatedField(barenblatt_field_21, upper=1.0, lower=2.0)

    def test_power_gradient(self, barenblatt_field_21):
        field = PowerField(barenblatt_field_21, 2.0)
        x, h = 1.2, 1e-6
        fd = (field.value(x + h, 1.0) - field.value(x - h, 1.0)) / (2.0 * h)
        assert float(field.grad(x, 1.0)) == pytest.approx(fd, rel=1e-6)

    def test_rescaled_is_a_solution(self, barenblatt_field_21, pme_21):
        field = RescaledField(barenblatt_field_21, 4.0)
        assert field.time_factor == 4.0
        for x in (0.2, 0.6, 1.0):
            assert abs(pme_residual_pointwise(field, x, 1.0, 1e-4, pme_21)) < 1e-4


class TestTrajectoryField:
    """Interpolated solver output"""

    @pytest.fixture
    def sampled(self, barenblatt_field_21):
        grid = Grid1D.radial(5.0, 200, 1)
        return TrajectoryField(sample_trajectory(barenblatt_field_21, grid, [1.0, 1.5, 2.0]))

    def test_interpolates(self, sampled, barenblatt_field_21):
        r = np.array([0.3, 1.0, 2.5])
        np.testing.assert_allclose(sampled.value(r, 1.5), barenblatt_field_21.value(r, 1.5), rtol=1e-3)
        assert sampled.value(5.0, 1.0) == 0.0
        assert sampled.t_range == (1.0, 2.0)

    def test_domain(self, sampled):
        with pytest.raises(DomainException):
            sampled.value(0.0, 2.5)
        with pytest.raises(DomainException):
            sampled.value(6.0, 1.5)

    def test_as_field(self, sampled, barenblatt_field_21):
        assert as_field(barenblatt_field_21) is barenblatt_field_21
        assert isinstance(as_field(sampled.traj), BaseField)
        with pytest.raises(ValidationException):
            as_field(np.zeros(3))

    def test_needs_two_snapshots(self, barenblatt_field_21):
        traj = sample_trajectory(barenblatt_field_21, Grid1D.radial(5.0, 20, 1), [1.0])
        with pytest.raises(ValidationException):
            TrajectoryField(traj)


class TestConstantField:
    def test_negative(self, pme_21):
        with pytest.raises(ValidationException):
            ConstantField(pme_21, -1.0)


if __name__ == "__main__":
    pytest.main([__file__])
