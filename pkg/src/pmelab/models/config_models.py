"""
Run configuration models for the command-line surface.

Every model rejects unknown keys so a misspelled option fails before any
computation starts.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.base import Geometry, PmeParams, SpaceTimeRegion
from ..diagnostics.bumps import CutoffFunction


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PmeModel(StrictModel):
    m: float = Field(gt=1.0)
    n: int = Field(ge=1)

    def to_params(self) -> PmeParams:
        return PmeParams(self.m, self.n)


class RegionModel(StrictModel):
    r_max: float = Field(gt=0.0)
    t_min: float
    t_max: float
    t_focus: Optional[float] = None

    def to_region(self) -> SpaceTimeRegion:
        return SpaceTimeRegion(self.r_max, self.t_min, self.t_max, self.t_focus)


class GridModel(StrictModel):
    geometry: Geometry = Geometry.RADIAL
    R: float = Field(gt=0.0)
    N: int = Field(ge=8)


class FieldSourceModel(StrictModel):
    """A registered field kind and its parameters"""
    kind: str
    params: Dict[str, Any] = {}


class CutoffModel(StrictModel):
    x_c: float = 0.0
    t_c: float = 0.0
    rho_in: float = 0.5
    rho: float = 1.0
    tau_in: float = 0.5
    tau: float = 1.0
    power: int = 3

    def to_cutoff(self) -> CutoffFunction:
        return CutoffFunction(**self.model_dump())


class BarenblattRunConfig(StrictModel):
    pme: PmeModel
    C: float = Field(default=1.0, gt=0.0)
    t_shift: float = 0.0
    times: List[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5], min_length=1)
    cells: int = Field(default=200, ge=8)
    q_values: List[float] = []
    gradient_q_values: List[float] = []
    region: Optional[RegionModel] = None
    levels: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_times(self) -> "BarenblattRunConfig":
        if any(t <= self.t_shift for t in self.times):
            raise ValueError("Sample times must follow t_shift")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("Sample times must be strictly increasing")
        return self


class MinorantModel(StrictModel):
    amplitude: float = Field(default=50.0, gt=1.0)
    cells: int = Field(default=48, ge=8)
    window: Tuple[float, float] = (0.05, 0.5)
    bump: float = Field(default=0.0, ge=0.0)


class GiantRunConfig(StrictModel):
    pme: PmeModel
    R: float = Field(default=1.0, gt=0.0)
    steps: Optional[int] = Field(default=None, ge=64)
    t0: float = 0.0
    rescale_R: Optional[float] = Field(default=None, gt=0.0)
    region: Optional[RegionModel] = None
    levels: Optional[int] = Field(default=None, ge=1)
    minorant: Optional[MinorantModel] = None


class InitialDataModel(StrictModel):
    kind: Literal["barenblatt", "giant", "constant", "indicator", "csv"]
    params: Dict[str, Any] = {}


class ComparisonModel(StrictModel):
    """v0 = factor·u0, plus an optional truncated sub-cylinder run"""
    factor: float = Field(default=0.5, ge=0.0, le=1.0)
    sub_cells: Optional[int] = Field(default=None, ge=8)
    level: Optional[float] = Field(default=None, ge=0.0)


class SolveRunConfig(StrictModel):
    pme: PmeModel
    grid: GridModel
    initial: InitialDataModel
    t_start: float = 0.0
    t_end: float
    snapshot_times: List[float] = []
    cfl_safety: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    dt_max: Optional[float] = Field(default=None, gt=0.0)
    convergence: List[int] = []
    comparison: Optional[ComparisonModel] = None

    @model_validator(mode="after")
    def check_convergence(self) -> "SolveRunConfig":
        if self.convergence and self.initial.kind != "barenblatt":
            raise ValueError("Convergence tables need a Barenblatt start")
        if self.convergence and len(self.convergence) < 2:
            raise ValueError("Convergence tables need at least two resolutions")
        return self


class ClassifyRunConfig(StrictModel):
    pme: PmeModel
    source: FieldSourceModel
    region: RegionModel
    levels: Optional[int] = Field(default=None, ge=1)


class ARuleModel(StrictModel):
    coefficient: float = Field(default=1.0, gt=0.0)
    power: float = 1.0


class DichotomyRunConfig(StrictModel):
    pme: PmeModel
    k_values: Optional[List[int]] = None
    C0: Optional[float] = Field(default=None, gt=0.0)
    cells: Optional[int] = Field(default=None, ge=8)
    samples: int = Field(default=16, ge=2)
    blowup: Optional[ARuleModel] = None
    measure: Optional[ARuleModel] = None

    @model_validator(mode="after")
    def check_directions(self) -> "DichotomyRunConfig":
        if self.blowup is None and self.measure is None:
            raise ValueError("Name at least one direction (blowup or measure)")
        return self


class HarnackCheckModel(StrictModel):
    name: Literal["harnack"]
    points: List[Tuple[float, float, float]] = Field(min_length=1)
    C2_grid: List[float] = [0.05, 0.1, 0.2]


class WeakHarnackCheckModel(StrictModel):
    name: Literal["weak_harnack"]
    x0: float = 0.0
    r: float = Field(gt=0.0)
    t0: float
    T: Optional[float] = None
    C1_grid: List[float] = [0.1, 1.0, 10.0]
    cells: int = Field(default=64, ge=8)


class CaccioppoliCheckModel(StrictModel):
    name: Literal["caccioppoli"]
    cutoff: CutoffModel
    eps: float = Field(gt=0.0)
    cells: int = Field(default=64, ge=8)


class LogCaccioppoliCheckModel(StrictModel):
    name: Literal["log_caccioppoli"]
    cutoff: CutoffModel
    cells: int = Field(default=64, ge=8)


class SobolevCheckModel(StrictModel):
    name: Literal["sobolev"]
    cutoff: CutoffModel
    p: float = Field(ge=1.0)
    r: float = Field(gt=0.0)
    # w = u^gamma; None checks u itself
    gamma: Optional[float] = Field(default=None, gt=0.0)
    cells: int = Field(default=64, ge=8)
    exponent_mode: Optional[Literal["printed", "balanced"]] = None


CheckModel = Annotated[
    Union[
        HarnackCheckModel,
        WeakHarnackCheckModel,
        CaccioppoliCheckModel,
        LogCaccioppoliCheckModel,
        SobolevCheckModel,
    ],
    Field(discriminator="name"),
]


class ChecksRunConfig(StrictModel):
    pme: PmeModel
    source: FieldSourceModel
    checks: List[CheckModel]

    @field_validator("checks")
    @classmethod
    def check_not_empty(cls, value: List[Any]) -> List[Any]:
        if not value:
            raise ValueError("Checker list is empty, nothing to do")
        return value


RUN_CONFIGS = {
    "barenblatt": BarenblattRunConfig,
    "giant": GiantRunConfig,
    "solve": SolveRunConfig,
    "classify": ClassifyRunConfig,
    "dichotomy": DichotomyRunConfig,
    "checks": ChecksRunConfig,
}
