"""
Settings, exceptions and artifact file helpers
"""
import pytest

from pmelab.config import Settings
from pmelab.core.constants import NUMERICS_CONFIG
from pmelab.core.base import PmeParams, RefinementTrend, SpaceTimeRegion, TrendVerdict
from pmelab.core.exceptions import (
    ConfigurationException,
    InconclusiveException,
    PmeLabException,
    ValidationException,
)
from pmelab.utils.file_utils import (
    read_csv_columns,
    read_json,
    staging_directory,
    write_csv,
    write_json,
)


class TestSettings:
    """Environment-driven settings"""

    def test_defaults(self):
        settings = Settings()
        assert settings.CFL_SAFETY == 0.4
        assert settings.TREND_MIN_LEVELS == 3
        assert settings.EXPERIMENT_K_VALUES == [4, 8, 16, 32]
        assert settings.CSV_FLOAT_FORMAT == "{:.17g}"

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("PMELAB_CFL_SAFETY", "0.25")
        monkeypatch.setenv("PMELAB_LOG_LEVEL", "DEBUG")
        settings = Settings()
        assert settings.CFL_SAFETY == 0.25
        assert settings.LOG_LEVEL == "DEBUG"

    def test_numeric_tables_hold_no_settings(self):
        """Floors and CFL safety live only in Settings"""
        assert "eps_floor" not in NUMERICS_CONFIG
        assert "monotone_cfl_bound" not in NUMERICS_CONFIG
        assert NUMERICS_CONFIG["dirac_min_shapes"] == 5

    def test_full_cfl_safety_accepted(self, monkeypatch):
        monkeypatch.setenv("PMELAB_CFL_SAFETY", "1.0")
        assert Settings().CFL_SAFETY == 1.0


class TestExceptions:
    """Exception hierarchy"""

    def test_error_codes(self):
        e = ValidationException("bad m", field="m")
        assert isinstance(e, PmeLabException)
        assert e.error_code == "VALIDATION_ERROR"
        assert e.field == "m"

    def test_inconclusive_carries_trend(self):
        trend = RefinementTrend.from_levels([(1, 1.0), (2, 1.5)])
        e = InconclusiveException("no verdict", trend=trend)
        assert e.trend.verdict == TrendVerdict.INCONCLUSIVE
        assert e.details == {}


class TestValueTypes:
    """Validation of the shared value types"""

    def test_pme_params_rejects_fast_diffusion(self):
        with pytest.raises(ValidationException):
            PmeParams(1.0, 1)
        with pytest.raises(ValidationException):
            PmeParams(2.0, 0)

    def test_pme_params_hashable(self):
        assert PmeParams(2.0, 1) == PmeParams(2.0, 1)
        assert len({PmeParams(2.0, 1), PmeParams(2.0, 1)}) == 1

    def test_region_focus(self):
        region = SpaceTimeRegion(1.0, 0.0, 1.0)
        assert region.focus == 0.0
        with pytest.raises(ValidationException):
            SpaceTimeRegion(1.0, 1.0, 0.5)
        with pytest.raises(ValidationException):
            SpaceTimeRegion(1.0, 0.0, 1.0, t_focus=2.0)

    def test_trend_verdicts(self):
        finite = RefinementTrend.from_levels([(1, 1.0), (2, 1.2), (4, 1.21)])
        assert finite.verdict == TrendVerdict.FINITE
        divergent = RefinementTrend.from_levels([(1, 1.0), (2, 2.0), (4, 4.0)])
        assert divergent.verdict == TrendVerdict.DIVERGENT
        assert divergent.growth_exponent == pytest.approx(1.0)
        short = RefinementTrend.from_levels([(1, 1.0), (2, 1.0)])
        assert short.verdict == TrendVerdict.INCONCLUSIVE

    def test_trend_rejects_unsorted_levels(self):
        with pytest.raises(ValidationException):
            RefinementTrend([(2, 1.0), (1, 1.0)], TrendVerdict.FINITE, 0.0)


class TestFileUtils:
    """CSV/JSON writers and staged outputs"""

    def test_csv_format(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", ["t", "ok"], [(0.1, True), (1.0 / 3.0, False)])
        lines = path.read_text().splitlines()
        assert lines[0] == "t,ok"
        assert lines[1] == "0.10000000000000001,true"
        assert lines[2] == "0.33333333333333331,false"

    def test_csv_header_mismatch(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", ["r", "U"], [(0.0, 1.0)])
        with pytest.raises(ConfigurationException):
            read_csv_columns(path, ["t", "r", "u"])

    def test_json_schema_field(self, tmp_path):
        data = read_json(write_json(tmp_path / "r.json", {"value": 1.5}))
        assert data["schema"] == 1
        assert data["value"] == 1.5

    def test_missing_config(self, tmp_path):
        with pytest.raises(ConfigurationException):
            read_json(tmp_path / "missing.json")

    def test_staging_promotes_on_success(self, tmp_path):
        out = tmp_path / "out"
        with staging_directory(out) as stage:
            write_json(stage / "r.json", {})
        assert (out / "r.json").is_file()

    def test_staging_discards_on_failure(self, tmp_path):
        out = tmp_path / "out"
        with pytest.raises(RuntimeError):
            with staging_directory(out) as stage:
                write_json(stage / "r.json", {})
                raise RuntimeError("boom")
        assert not out.exists()
        assert not list(tmp_path.glob(".pme-lab-*"))


if __name__ == "__main__":
    pytest.main([__file__])
