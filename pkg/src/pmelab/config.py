from pathlib import Path
from functools import lru_cache

from loguru import logger
from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).resolve().parent  # package directory
ENV_FILE = BASE_DIR / ".env"                # src/pmelab/.env


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=str(ENV_FILE),
        env_file_encoding='utf-8',
        env_prefix='PMELAB_',
        extra='ignore'
    )

    PROJECT_NAME: str = "pme-lab"
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str | None = None

    # Explicit solver
    CFL_SAFETY: float = 0.4
    EPS_FLOOR: float = 1e-300
    DT_MAX: float = 1e-2

    # Elliptic profile shooting
    PROFILE_STEPS: int = 4096
    PROFILE_TOL: float = 1e-8
    PROFILE_RESIDUAL_LIMIT: float = 1e-6
    PROFILE_BOUNDARY_BAND: float = 0.1

    # Refinement trends
    TREND_SLOPE_THRESHOLD: float = 0.2
    TREND_PLATEAU_TOL: float = 0.05
    TREND_MIN_LEVELS: int = 3
    TREND_BASE_DECADES: int = 6
    QUAD_CELLS_PER_DECADE: int = 16

    # Measure identification
    DIRAC_SPREAD_TARGET: float = 0.02
    DIRAC_SPREAD_LIMIT: float = 0.05

    # "printed" uses the sup exponent q/n, "balanced" uses p/n
    SOBOLEV_EXPONENT_MODE: str = "printed"

    # Experiments
    EXPERIMENT_K_VALUES: list[int] = [4, 8, 16, 32]
    EXPERIMENT_CELLS: int = 256

    # Artifacts
    CSV_DIGITS: int = 17
    REPORT_SCHEMA: int = 1

    @property
    def CSV_FLOAT_FORMAT(self) -> str:
        """Float format shared by every CSV writer"""
        return f"{{:.{self.CSV_DIGITS}g}}"

    # Add environment variable validation
    def model_post_init(self, __context) -> None:
        if self.CFL_SAFETY <= 0 or self.CFL_SAFETY > 1:
            logger.warning("CFL_SAFETY should lie in (0, 1]")
        if self.SOBOLEV_EXPONENT_MODE not in ("printed", "balanced"):
            logger.warning(
                f"Unknown SOBOLEV_EXPONENT_MODE '{self.SOBOLEV_EXPONENT_MODE}', "
                "falling back to 'printed'"
            )
        if self.PROFILE_STEPS < 64:
            logger.warning("PROFILE_STEPS is very small, profiles will be inaccurate")
        if self.TREND_MIN_LEVELS < 3:
            logger.warning("TREND_MIN_LEVELS below 3 makes trend verdicts unreliable")


@lru_cache()
def get_settings() -> Settings:
    return Settings()

settings = get_settings()
