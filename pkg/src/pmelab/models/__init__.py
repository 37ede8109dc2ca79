from .config_models import (
    RUN_CONFIGS,
    BarenblattRunConfig,
    ChecksRunConfig,
    ClassifyRunConfig,
    DichotomyRunConfig,
    GiantRunConfig,
    SolveRunConfig,
)

__all__ = [
    "RUN_CONFIGS",
    "BarenblattRunConfig",
    "ChecksRunConfig",
    "ClassifyRunConfig",
    "DichotomyRunConfig",
    "GiantRunConfig",
    "SolveRunConfig",
]
