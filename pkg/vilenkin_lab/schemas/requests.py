from typing import List, Optional

from pydantic import BaseModel, Field

from vilenkin_lab.core.kernels import KernelKind, TVariant
from vilenkin_lab.core.means import MeanFamily


class ConfigRequest(BaseModel):
    """Group configuration shared by every request body."""
    radix: List[int] = Field(..., min_length=1, description="Radix entries, repeated periodically up to the resolution")
    resolution: Optional[int] = Field(None, description="N; defaults to len(radix)")


class KernelRequest(ConfigRequest):
    """Schema for building one kernel."""
    kind: KernelKind
    n: int = Field(..., ge=1)
    weights: Optional[str] = Field(None, description="Weight family such as cesaro:0.5")
    variant: TVariant = TVariant.REGULAR
    closed: bool = Field(False, description="Use the closed form (Dirichlet and Fejér only)")


class KernelValue(BaseModel):
    index: int
    re: float
    im: float


class IdentityRequest(ConfigRequest):
    """Schema for an exhaustive identity sweep."""
    identity: str = Field("all", description="Identity id or 'all'")
    weights: Optional[str] = None


class NormConvergenceRequest(ConfigRequest):
    """Schema for a norm-convergence experiment."""
    family: MeanFamily = MeanFamily.FEJER
    weights: Optional[str] = None
    alpha: Optional[float] = None
    p: str = Field("2", description="1, 2 or inf")
    fixture: str = "random"
    seed: Optional[int] = None
    n: str = Field("1..8", description="Grid such as 1..24 or 1,2,4,8")
