"""
Vertical and full infinity sets at a time slice
"""
import numpy as np
import pytest

from pmelab.core.base import ClassKind, SpaceTimeRegion
from pmelab.core.exceptions import PreconditionException, ValidationException
from pmelab.diagnostics import blowup_fraction, classify, infinity_set_full, infinity_set_vertical
from pmelab.fields import ConstantField
from pmelab.services.experiments import DichotomyConfig, run_dichotomy_member
from pmelab.services.pme_solver import Grid1D, SamplingMode, sample_trajectory


@pytest.fixture(scope="module")
def source_traj(barenblatt_field_21):
    """Source solution sampled at inner cell edges, so cell 0 sees r = 0"""
    grid = Grid1D.radial(1.0, 50, 1)
    return sample_trajectory(
        barenblatt_field_21, grid, np.geomspace(1e-12, 1e-6, 40), SamplingMode.INNER_EDGE
    )


@pytest.fixture(scope="module")
def giant_traj(giant_field_21):
    grid = Grid1D.radial(1.0, 50, 1)
    return sample_trajectory(giant_field_21, grid, np.geomspace(1e-9, 1e-3, 30))


THRESHOLDS = [10.0, 50.0, 200.0]


class TestVertical:
    """Limits along vertical segments"""

    def test_source_point_only(self, source_traj):
        assert infinity_set_vertical(source_traj, 0.0, THRESHOLDS) == frozenset({0})

    def test_giant_total(self, giant_traj):
        cells = infinity_set_vertical(giant_traj, 0.0, [1.0, 10.0, 100.0])
        assert blowup_fraction(cells, giant_traj.grid.N) >= 0.9

    def test_bounded_field_empty(self, pme_21):
        traj = sample_trajectory(ConstantField(pme_21, 3.0), Grid1D.radial(1.0, 20, 1), [0.1, 0.2, 0.3, 0.4])
        assert infinity_set_vertical(traj, 0.0, THRESHOLDS) == frozenset()


class TestFull:
    """Limits over shrinking space-time neighborhoods"""

    def test_source_point_empty(self, source_traj):
        assert infinity_set_full(source_traj, 0.0, THRESHOLDS) == frozenset()

    def test_giant_total(self, giant_traj):
        cells = infinity_set_full(giant_traj, 0.0, [1.0, 10.0, 100.0])
        assert blowup_fraction(cells, giant_traj.grid.N) >= 0.9

    def test_subset_of_vertical(self, source_traj, giant_traj):
        for traj, thresholds in ((source_traj, THRESHOLDS), (giant_traj, [1.0, 10.0, 100.0])):
            full = infinity_set_full(traj, 0.0, thresholds)
            assert full <= infinity_set_vertical(traj, 0.0, thresholds)

    def test_all_or_nothing(self, source_traj, giant_traj):
        for traj in (source_traj, giant_traj):
            fraction = blowup_fraction(infinity_set_vertical(traj, 0.0, [1.0, 10.0, 100.0]), traj.grid.N)
            assert fraction <= 2.0 / traj.grid.N or fraction >= 0.9


class TestCorpus:
    """Infinity sets over a sweep of t0 against the classifier

    Every set is either at most two cells or nearly the whole ball, and a
    solution is CLASS_M exactly when some t0 has a near-total vertical set.
    """

    T0_SWEEP = [0.0, 0.25, 0.5]
    GRID = Grid1D.radial(1.0, 50, 1)

    @pytest.fixture(scope="class")
    def member(self, pme_21):
        return run_dichotomy_member(DichotomyConfig(pme_21, k_values=(4,), cells=64), 4)

    def _closed_form_fractions(self, field):
        fractions = []
        for t0 in self.T0_SWEEP:
            times = t0 + np.geomspace(1e-12, 1e-6, 40)
            traj = sample_trajectory(field, self.GRID, times, SamplingMode.INNER_EDGE)
            cells = infinity_set_vertical(traj, t0, THRESHOLDS)
            fractions.append(blowup_fraction(cells, traj.grid.N))
        return fractions

    def _trajectory_fractions(self, traj):
        fractions = []
        for t0 in traj.times[: -3 : max(1, (len(traj.times) - 3) // 4)]:
            cells = infinity_set_vertical(traj, float(t0), THRESHOLDS)
            fractions.append(blowup_fraction(cells, traj.grid.N))
        return fractions

    @pytest.fixture(scope="class")
    def corpus(self, pme_21, barenblatt_field_21, giant_field_21, member):
        """name -> (classifier label, vertical fractions over the t0 sweep)"""
        box = SpaceTimeRegion(1.0, 0.0, 1.0)
        theta = member.constants.theta
        return {
            "constant": (
                classify(ConstantField(pme_21, 3.0), box),
                self._closed_form_fractions(ConstantField(pme_21, 3.0)),
            ),
            "source": (
                classify(barenblatt_field_21, box),
                self._closed_form_fractions(barenblatt_field_21),
            ),
            "giant": (
                classify(giant_field_21, SpaceTimeRegion(0.5, 0.0, 1.0)),
                self._closed_form_fractions(giant_field_21),
            ),
            "member": (
                classify(member.trajectory, SpaceTimeRegion(0.5, 0.0, theta)),
                self._trajectory_fractions(member.trajectory),
            ),
        }

    def test_all_or_nothing(self, corpus):
        for name, (_, fractions) in corpus.items():
            assert fractions, name
            for fraction in fractions:
                assert fraction <= 2.0 / 50 or fraction >= 0.9, name

    def test_class_m_iff_total_set(self, corpus):
        for name, (label, fractions) in corpus.items():
            total = any(fraction >= 0.9 for fraction in fractions)
            assert (label.label == ClassKind.CLASS_M) == total, name
        # both sides of the equivalence occur
        assert corpus["giant"][0].label == ClassKind.CLASS_M
        assert corpus["source"][0].label == ClassKind.CLASS_B
        assert corpus["member"][0].label == ClassKind.BOUNDED
        assert corpus["source"][1][0] > 0.0


class TestPreconditions:
    def test_thresholds_increasing(self, source_traj):
        with pytest.raises(ValidationException):
            infinity_set_vertical(source_traj, 0.0, [10.0, 5.0])

    def test_too_few_snapshots(self, source_traj):
        with pytest.raises(PreconditionException):
            infinity_set_full(source_traj, 1.0, THRESHOLDS)


if __name__ == "__main__":
    pytest.main([__file__])
