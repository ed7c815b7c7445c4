import math
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class IdentityKind(str, Enum):
    """Whether an identity check compares two sides or estimates a constant."""
    EQUALITY = "equality"
    BOUND = "bound"


class NormReport(BaseModel):
    """Schema for an L^p or weak-L^p norm."""
    p: float = Field(..., description="Exponent in [1, inf]")
    value: float = Field(..., ge=0)


class IdentityReport(BaseModel):
    """Schema for one kernel identity check at one parameter tuple."""
    identity: str
    kind: IdentityKind
    params: Dict[str, Any]
    residual: Optional[float] = Field(
        ..., ge=0, allow_inf_nan=False, description="Max abs residual, or the smallest bound constant; None when unbounded"
    )
    tolerance: float
    passed: bool

    @model_validator(mode="after")
    def pass_matches_tolerance(self):
        if self.passed != (self.residual is not None and self.residual <= self.tolerance):
            raise ValueError("passed must equal residual <= tolerance")
        return self

    def params_label(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params.items())


class ApproximateIdentityRow(BaseModel):
    n: int
    integral: float = Field(..., description="Real part of the kernel integral")
    l1: float = Field(..., ge=0)
    tail: float = Field(..., ge=0, description="L1 mass outside I_{N_tail}")


class ApproximateIdentityReport(BaseModel):
    family: str
    weights: Optional[str] = None
    N_tail: int
    rows: List[ApproximateIdentityRow]
    sup_l1: float
    tail_ratio: float = Field(..., description="First tail value over the last one")
    tail_decreasing: bool = Field(..., description="Tail at the end of the range below its start")
    tail_monotone: bool = Field(..., description="Tail column non-increasing throughout")


class RegularityReport(BaseModel):
    """Diagnostics for 1/Q_n = O(1/n) and q_{n-1}/Q_n = O(1/n)."""
    weights: str
    n_max: int
    sup_n_over_Q: float
    sup_n_q_over_Q: float
    final_q_over_Q: float = Field(..., description="q_{n-1}/Q_n at n_max")
    q_over_Q_trend: str
    q0_positive: bool
    q0_decay_exponent: Optional[float] = None
    monotonicity: str
    monotonicity_verified: bool
    notes: List[str] = []


class ConvergenceCurve(BaseModel):
    family: str
    weights: Optional[str] = None
    p: float
    fixture: str
    grid: List[int]
    errors: List[float]
    subsequence: bool = False
    notes: List[str] = []

    @model_validator(mode="after")
    def grid_and_errors(self):
        if len(self.grid) != len(self.errors):
            raise ValueError("grid and errors differ in length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if any(e < 0 or math.isnan(e) for e in self.errors):
            raise ValueError("errors must be nonnegative")
        return self

    def is_strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))

    def records(self) -> List[Dict[str, Any]]:
        return [{"n": n, "error": e} for n, e in zip(self.grid, self.errors)]


class RateReport(BaseModel):
    """Approximation rate of σ_{M_n} on a Lipschitz fixture."""
    alpha: float
    p: float
    family: str
    levels: List[int]
    grid: List[int]
    errors: List[float]
    moduli: List[float]
    exact: bool
    fitted_exponent: Optional[float] = None
    modulus_exponent: Optional[float] = None
    predicted_exponent: float
    predicted_case: str

    def records(self) -> List[Dict[str, Any]]:
        return [
            {"level": k, "M_n": n, "error": e, "modulus": w}
            for k, n, e, w in zip(self.levels, self.grid, self.errors, self.moduli)
        ]


class MoriczSiddiqiRow(BaseModel):
    n: int
    j: int
    lhs: float
    rhs: float
    ratio: float


class MoriczSiddiqiReport(BaseModel):
    weights: str
    branch: str
    p: float
    rows: List[MoriczSiddiqiRow]
    sup_ratio: float
    truncated: bool = Field(..., description="Terms with M_i > n were dropped from the modulus sum")


class RiemannLebesgueRow(BaseModel):
    n: int
    re: float
    im: float
    magnitude: float
    residual: float = Field(..., description="|t_{M_n}f(x) - (S_{M_n}f(x) - psi_{M_n-1}(x) II_n)|")
