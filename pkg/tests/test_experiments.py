"""
Dichotomy family, comparison harness and rescaling scenarios
"""
import json
from dataclasses import replace

import numpy as np
import pytest

from pmelab.core.base import ClassKind, Direction, PmeParams
from pmelab.core.exceptions import CheckFailedException, PreconditionException, ValidationException
from pmelab.services.exact_solutions import barenblatt_value
from pmelab.services.experiments import (
    ARule,
    DichotomyConfig,
    classify_dichotomy_limit,
    comparison_harness,
    default_c0,
    example_constants,
    giant_rate_constants,
    minorant_scenario,
    rescaling_check,
    run_dichotomy_member,
    write_experiment,
)
from pmelab.services.pme_solver import Field, Grid1D, SolveConfig, field_from_function

K_VALUES = (4, 8, 16, 32)


@pytest.fixture(scope="module")
def family(pme_21):
    return DichotomyConfig(pme_21, k_values=K_VALUES, a_rule=ARule(1.0, 2.0), cells=64)


class TestExampleConstants:
    """Shifted Barenblatt data of the family"""

    def test_default_c0(self, pme_21):
        assert default_c0(pme_21) == pytest.approx(12.0 ** (2.0 / 3.0), rel=1e-14)

    @pytest.mark.parametrize("pme", [PmeParams(2.0, 1), PmeParams(3.0, 2), PmeParams(1.5, 3)])
    @pytest.mark.parametrize("k", [2, 4, 32])
    def test_brackets_vanish(self, pme, k):
        consts = example_constants(pme, k, default_c0(pme))
        at_start, at_theta = consts.bracket_residuals()
        assert abs(at_start) <= 1e-10 * consts.C
        assert abs(at_theta) <= 1e-10 * consts.C
        assert consts.theta > 0
        assert consts.printed_theta < 0

    def test_start_shift(self, pme_21):
        C0 = 2.0
        consts = example_constants(pme_21, 8, C0)
        scale = C0 ** (-pme_21.n / (2.0 * (1.0 / 3.0)))
        assert consts.t0 == pytest.approx(scale * 8.0 ** -2, rel=1e-12)
        assert barenblatt_value(consts.barenblatt, 1.0 / 8.0, 0.0) == pytest.approx(0.0, abs=1e-10)

    def test_normalized_peak(self, pme_21):
        for k in K_VALUES:
            consts = example_constants(pme_21, k, default_c0(pme_21))
            assert barenblatt_value(consts.barenblatt, 0.0, 0.0) == pytest.approx(1.0, rel=1e-10)

    def test_theta_values(self, pme_21):
        c0 = default_c0(pme_21)
        assert example_constants(pme_21, 4, c0).theta == pytest.approx(0.328, abs=1e-3)
        assert example_constants(pme_21, 32, c0).theta == pytest.approx(2.667, abs=1e-3)

    def test_bound(self, pme_21):
        consts = example_constants(pme_21, 4, default_c0(pme_21))
        assert consts.bound_constant == pytest.approx(15.0 / 16.0, rel=1e-12)
        # 𝓑(1/4, θ) sits exactly on the bound
        assert barenblatt_value(consts.barenblatt, 0.25, consts.theta) == pytest.approx(consts.bound, rel=1e-10)

    def test_invalid(self, pme_21):
        with pytest.raises(ValidationException):
            example_constants(pme_21, 0, 1.0)
        with pytest.raises(ValidationException):
            example_constants(pme_21, 4, -1.0)


class TestDichotomyConfig:
    def test_defaults(self, pme_21):
        cfg = DichotomyConfig(pme_21)
        assert cfg.k_values == (4, 8, 16, 32)
        assert cfg.C0 == pytest.approx(default_c0(pme_21))
        assert cfg.cells == 256

    def test_validation(self, pme_21):
        with pytest.raises(ValidationException):
            DichotomyConfig(pme_21, k_values=(8, 4))
        with pytest.raises(ValidationException):
            DichotomyConfig(pme_21, k_values=(1, 4))
        with pytest.raises(ValidationException):
            DichotomyConfig(pme_21, k_values=(4, 32), cells=32)
        with pytest.raises(ValidationException):
            ARule(0.0, 1.0)


class TestMember:
    """One rescaled run v_k"""

    @pytest.fixture(scope="class")
    def member(self, pme_21):
        return run_dichotomy_member(DichotomyConfig(pme_21, k_values=(4,), cells=64), 4)

    def test_comparison_holds(self, member):
        assert member.comparison_deficit <= member.tolerance
        assert member.tolerance > 0

    def test_initial_slice(self, member):
        assert member.initial_slice == pytest.approx(2.0 / 4.0, rel=1e-12)

    def test_rate_bound(self, member):
        assert member.bound_ok
        assert member.bound_min > 0

    def test_snapshots(self, member):
        assert member.trajectory.times[0] == 0.0
        assert member.trajectory.times[-1] == pytest.approx(member.constants.theta)
        assert member.to_dict()["bound_ok"]

    def test_rate_constant(self, member, pme_21):
        (c,) = giant_rate_constants([member], pme_21.m)
        assert c == pytest.approx(member.bound_min * member.constants.theta)
        assert 0.0 < c < np.inf

    @pytest.mark.parametrize("bound_min", [0.0, -1.0, np.inf, np.nan])
    def test_degenerate_rate_constant(self, member, pme_21, bound_min):
        broken = replace(member, bound_min=bound_min)
        with pytest.raises(CheckFailedException, match="positive and finite") as info:
            giant_rate_constants([member, broken], pme_21.m)
        assert info.value.failures == [4]

    def test_rejects_nonpositive_extra_time(self, pme_21):
        with pytest.raises(ValidationException):
            run_dichotomy_member(DichotomyConfig(pme_21, k_values=(4,), cells=64), 4, extra_times=(0.0,))


@pytest.mark.slow
class TestDichotomyLimit:
    """Both directions of the family"""

    def test_blowup_is_class_m(self, family):
        result = classify_dichotomy_limit(family, "BLOWUP")
        assert result.direction == Direction.BLOWUP
        assert result.label.label == ClassKind.CLASS_M
        assert result.evidence["slice_growth"] >= 4.0
        assert all(member.bound_ok for member in result.members)
        assert 0.0 < result.evidence["rate_constant_min"] < np.inf

    @pytest.mark.parametrize("coefficient", [3.0, 1.0])
    def test_measure_is_class_b(self, pme_21, coefficient):
        cfg = DichotomyConfig(pme_21, k_values=K_VALUES, a_rule=ARule(coefficient, 1.0), cells=64)
        result = classify_dichotomy_limit(cfg, Direction.MEASURE)
        assert result.label.label == ClassKind.CLASS_B
        assert result.evidence["a"] == pytest.approx(coefficient)
        assert result.evidence["limit_mass"] == pytest.approx(2.0 * coefficient)
        for mass in result.evidence["initial_masses"]:
            assert mass == pytest.approx(2.0 * coefficient, rel=1e-12)

    def test_write_experiment(self, family, tmp_path):
        result = classify_dichotomy_limit(family, Direction.BLOWUP)
        csv_path, manifest = write_experiment([result], tmp_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "k,a_k,direction,slice_integral,T_k,rate_bound_ok,label"
        assert len(lines) == 1 + len(K_VALUES)
        assert lines[1].startswith("4,16,BLOWUP,")
        payload = json.loads(manifest.read_text())
        assert payload["runs"][0]["config"]["k_values"] == list(K_VALUES)
        assert "printed_theta" in payload["runs"][0]["members"][0]["constants"]


class TestDichotomyPreconditions:
    def test_blowup_needs_decreasing_ratio(self, pme_21):
        cfg = DichotomyConfig(pme_21, k_values=K_VALUES, a_rule=ARule(1.0, 1.0), cells=64)
        with pytest.raises(PreconditionException):
            classify_dichotomy_limit(cfg, Direction.BLOWUP)

    def test_measure_needs_converging_ratio(self, pme_21):
        cfg = DichotomyConfig(pme_21, k_values=K_VALUES, a_rule=ARule(1.0, 2.0), cells=64)
        with pytest.raises(PreconditionException):
            classify_dichotomy_limit(cfg, Direction.MEASURE)


class TestComparisonHarness:
    """Ordered pairs and sub-cylinders"""

    def test_ordered_pair(self, barenblatt_21):
        grid = Grid1D.radial(4.0, 64, 1)
        u0 = field_from_function(grid, barenblatt_21.pme, lambda r: barenblatt_value(barenblatt_21, r, 0.5), 0.5)
        report = comparison_harness(u0, u0.with_values(0.5 * u0.values), SolveConfig(1.0, [0.75, 1.0]))
        assert report.passed
        assert report.fitted_constant >= 0.0
        assert report.details["snapshots"] == 2

    def test_sub_cylinder(self, giant_field_21, profile_21):
        grid = Grid1D.radial(profile_21.R, 32, 1)
        u0 = field_from_function(grid, profile_21.pme, lambda r: giant_field_21.value(r, 0.1), 0.1)
        report = comparison_harness(
            u0, u0.with_values(np.zeros(32)), SolveConfig(0.2, [0.15, 0.2]), sub_cells=16, level=5.0
        )
        assert report.passed
        assert report.details["sub_cells"] == 16

    def test_unordered(self, pme_21):
        grid = Grid1D.radial(1.0, 16, 1)
        u0 = Field(grid, np.linspace(1.0, 0.0, 16), 0.0, pme_21)
        v0 = Field(grid, np.full(16, 0.5), 0.0, pme_21)
        with pytest.raises(PreconditionException):
            comparison_harness(u0, v0, SolveConfig(0.01))


class TestRescaling:
    def test_indicator_rescaling(self, pme_21):
        report = rescaling_check(pme_21, amplitude=4.0, tau=0.01, cells=64)
        assert report.passed
        assert report.lhs <= report.rhs

    def test_invalid(self, pme_21):
        with pytest.raises(ValidationException):
            rescaling_check(pme_21, amplitude=0.0, tau=0.01)


class TestMinorantScenario:
    @pytest.mark.slow
    def test_giant_below_solution(self, pme_21, profile_21):
        report = minorant_scenario(pme_21, profile_21, amplitude=50.0, cells=48)
        assert report.passed
        assert report.details["start"] == pytest.approx(0.02)

    @pytest.mark.slow
    def test_perturbed_start(self, pme_21, profile_21):
        """Initial data strictly above the giant keep it as a minorant"""
        plain = minorant_scenario(pme_21, profile_21, amplitude=50.0, cells=48)
        bumped = minorant_scenario(pme_21, profile_21, amplitude=50.0, cells=48, bump=20.0)
        assert bumped.passed
        assert bumped.details["bump"] == 20.0
        # a larger start gives a larger solution, so the deficit can only drop
        assert bumped.lhs <= plain.lhs + bumped.rhs

    def test_rejects_negative_bump(self, pme_21, profile_21):
        with pytest.raises(ValidationException):
            minorant_scenario(pme_21, profile_21, bump=-1.0)

    def test_window_after_start(self, pme_21, profile_21):
        with pytest.raises(ValidationException):
            minorant_scenario(pme_21, profile_21, amplitude=2.0, window=(0.05, 0.5))

    def test_profile_mismatch(self, pme_22, profile_21):
        with pytest.raises(ValidationException):
            minorant_scenario(pme_22, profile_21)


if __name__ == "__main__":
    pytest.main([__file__])
