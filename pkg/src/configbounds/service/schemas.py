"""Request/response models mirroring the core JSON schemas.

Every model that shadows a core type round-trips through that type's own
to_dict/from_dict, so API payloads and the files written by the CLI are
byte-compatible views of the same schema.  Validation of the mathematical
content (domains, bound ranges, attainable tree sizes) stays in the core
constructors; these models only shape the payload.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..configspace import DualExtraction, WdpGenConfig
from ..piecewise import PiecewiseConstant
from ..solver import IntegerProgram

__all__ = [
    "RowModel",
    "InstanceModel",
    "PiecewiseModel",
    "DualModel",
    "GenRequest",
    "GenResponse",
    "DualRequest",
    "KappaRequest",
    "KappaResponse",
    "ProfileRequest",
    "ProfileRow",
    "ProfileResponse",
    "BoundsRequest",
    "BoundRowModel",
    "ReportedPoint",
    "BoundsResponse",
    "FitRequest",
    "FitResponse",
    "RadRequest",
    "RadResponse",
    "CounterexampleRequest",
    "HealthResponse",
]


class RowModel(BaseModel):
    idx: list[int]
    coef: list[float]
    b: float


class InstanceModel(BaseModel):
    """A set-packing integer program in its file schema."""

    n: int
    m: int
    c: list[float]
    rows: list[RowModel]
    binary: list[int]

    @classmethod
    def from_core(cls, ip: IntegerProgram) -> "InstanceModel":
        return cls(**ip.to_dict())

    def to_core(self) -> IntegerProgram:
        return IntegerProgram.from_dict(self.model_dump())


class PiecewiseModel(BaseModel):
    """A step function; breaks includes both domain endpoints."""

    lo: float
    hi: float
    breaks: list[float]
    values: list[float]

    @classmethod
    def from_core(cls, f: PiecewiseConstant) -> "PiecewiseModel":
        return cls(**f.to_dict())

    def to_core(self) -> PiecewiseConstant:
        return PiecewiseConstant.from_dict(self.model_dump())


class DualModel(PiecewiseModel):
    """An extracted dual: the step function plus its extraction context."""

    instance: str
    kappa: int
    grid_eps: float
    rules: str

    @classmethod
    def from_core(cls, ex: DualExtraction) -> "DualModel":  # type: ignore[override]
        return cls(**ex.to_dict())

    def to_core(self) -> DualExtraction:  # type: ignore[override]
        return DualExtraction.from_dict(self.model_dump())


class GenRequest(BaseModel):
    count: int = Field(default=1, ge=0)
    goods: int = 10
    bids: int = 20
    bundle_min: int = 2
    bundle_max: int = 5
    price_lo: float = 0.8
    price_hi: float = 1.25
    seed: int = Field(default=0, ge=0)

    def gen_config(self, seed: int) -> WdpGenConfig:
        return WdpGenConfig(
            goods=self.goods,
            bids=self.bids,
            bundle_min=self.bundle_min,
            bundle_max=self.bundle_max,
            price_lo=self.price_lo,
            price_hi=self.price_hi,
            seed=seed,
        )


class GenResponse(BaseModel):
    seeds: list[int]
    instances: list[InstanceModel]


class DualRequest(BaseModel):
    instance: InstanceModel
    rule1: str = "L"
    rule2: str = "S"
    kappa: int
    grid_eps: float = 1e-4
    instance_id: str = ""
    node_policy: str = "best_bound"


class KappaRequest(BaseModel):
    instances: list[InstanceModel]
    rule1: str = "L"
    rule2: str = "S"
    r_grid: list[float] | None = None
    hard_cap: int = 2000
    node_policy: str = "best_bound"


class KappaResponse(BaseModel):
    kappa: int
    saturated: bool


class ProfileRequest(BaseModel):
    duals: list[PiecewiseModel]
    j_lo: int = 1
    j_hi: int = 64


class ProfileRow(BaseModel):
    j: int
    e_hat: float


class ProfileResponse(BaseModel):
    rows: list[ProfileRow]
    j_star: int


class BoundsRequest(BaseModel):
    e_hat: list[ProfileRow]
    m_profile: int
    j_star: int
    n_vars: int
    kappa: int
    n_schedule: list[int]
    delta: float = 0.01
    paper_mode: bool = False


class BoundRowModel(BaseModel):
    n: int
    worst_case: float
    srm: float
    srm_best_j: int
    baseline: float


class ReportedPoint(BaseModel):
    n: int
    bound: float


class BoundsResponse(BaseModel):
    rows: list[BoundRowModel]
    csv: str
    reported: list[ReportedPoint]


class FitRequest(BaseModel):
    dual: PiecewiseModel
    k: int
    combine: str = "max"


class FitResponse(BaseModel):
    error: float
    approximant: PiecewiseModel
    splits: list[int]


class RadRequest(BaseModel):
    duals: list[PiecewiseModel]
    method: str = "exact"
    draws: int = 4096
    seed: int = Field(default=0, ge=0)


class RadResponse(BaseModel):
    value: float
    stderr: float | None
    distinct: int
    method: str


class CounterexampleRequest(BaseModel):
    gammas: list[float]
    ps: list[float]
    ns: list[int]
    cs: list[float]


class HealthResponse(BaseModel):
    status: str
    version: str
