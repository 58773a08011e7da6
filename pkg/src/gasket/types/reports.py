from typing import Any, Dict, List, Literal, Optional

import structlog
from pydantic import BaseModel, Field

from gasket.types.main import RegularityKind, Suite

logger = structlog.get_logger(__name__)

__all__ = [
    "GasketBaseModel",
    "Witness",
    "RegularityReport",
    "SquareReport",
    "ShortnessReport",
    "DistortionReport",
    "CheckResult",
    "SuiteResult",
    "PropsReport",
]

REPORT_SCHEMA_VERSION = 1


class GasketBaseModel(BaseModel):
    class Config:
        use_enum_values = True
        allow_population_by_field_name = True


class Witness(GasketBaseModel):
    """A sampled pair and what the check measured on it."""

    left: str
    right: str
    distance: float
    image_distance: float
    ratio: Optional[float] = None


class RegularityReport(GasketBaseModel):
    kind: RegularityKind = Field(alias="class")
    constant: Optional[float] = None
    samples: int
    max_ratio: float = 0.0
    min_ratio: Optional[float] = None
    witnesses: List[Witness] = Field(default_factory=list)
    violations: int = 0
    # epsilon -> largest delta that worked on the samples (None: no delta found)
    deltas: Dict[str, Optional[float]] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0


class SquareReport(GasketBaseModel):
    coalgebra: str
    samples: int
    tol: float
    passed: bool
    # largest certified lower bound on d(s(f x), (M⊗f)(e x)) seen
    max_lower_bound: float = 0.0
    witnesses: List[Witness] = Field(default_factory=list)


class ShortnessReport(GasketBaseModel):
    coalgebra: str
    status: Literal["pass", "fail", "precondition unmet"]
    samples: int
    tol: float
    max_excess: float = 0.0
    witnesses: List[Witness] = Field(default_factory=list)
    precondition: Optional[RegularityReport] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class DistortionReport(GasketBaseModel):
    samples: int
    depth: int
    min_ratio: float
    max_ratio: float
    witness_ratio: float
    witnesses: List[Witness] = Field(default_factory=list)


class CheckResult(GasketBaseModel):
    name: str
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)
    witnesses: List[str] = Field(default_factory=list)


class SuiteResult(GasketBaseModel):
    suite: Suite
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class PropsReport(GasketBaseModel):
    schema_version: int = Field(REPORT_SCHEMA_VERSION, alias="schema")
    seed: int
    passed: bool = True
    suites: List[SuiteResult] = Field(default_factory=list)

    def to_json(self, **kwargs) -> str:
        return self.json(by_alias=True, **kwargs)
