from pydantic import BaseModel, validator

from infra.env import ROOT_TOLERANCE
from scheme.channel.channel_scheme import ChannelSpec, ChannelUpload, Reduction
from scheme.distribution.distribution_scheme import DistributionUpload
from scheme.feasibility.feasibility_scheme import Allocation
from util.interval_set import IntervalSet


class PhiParams(BaseModel):
    """Level v and width z of the flat step of phi."""
    v: float
    z: float

    @validator("v")
    def _v_range(cls, value):
        if not 0.0 <= value <= 1.0:
            raise ValueError("v must lie in [0, 1]")
        return value

    @validator("z")
    def _z_range(cls, value, values):
        v = values.get("v", 0.0)
        if not -ROOT_TOLERANCE <= value <= 1.0 - v + ROOT_TOLERANCE:
            raise ValueError("z must lie in [0, 1 - v]")
        return value


class PartitionPlan(BaseModel):
    """
    Thresholds kappa_1..kappa_n (kappa_1 = 0) and disjoint interval sets
    P_1..P_n of [0, 1) with |P_k| = h_k. Antenna k sends the measure of P_k
    below the realization s, divided by h_k.
    """
    kappas: list[float]
    sets: list[IntervalSet]

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @property
    def size(self) -> int:
        return len(self.kappas)

    def to_json_dict(self) -> dict:
        return {"kappa": list(self.kappas), "sets": [s.to_list() for s in self.sets]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PartitionPlan":
        return cls(kappas=data["kappa"], sets=[IntervalSet(pieces) for pieces in data["sets"]])


class SignalingPlan(BaseModel):
    """
    Everything needed to turn realizations of S into per-antenna signals of
    the channel as given: the canonical channel and its reduction, the
    partition of the (possibly merged) channel that is actually decomposed
    and the merge groups mapping its antennas to canonical ones.
    """
    kind: str
    spec: ChannelSpec
    reduction: Reduction
    partition: PartitionPlan | None
    partition_groups: list[list[int]]
    partition_spec: ChannelSpec | None
    allocation: Allocation | None = None
    peaks: list[float] | None = None

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


class DecompositionMethod:
    PARTITION = "partition"
    ITERATIVE = "iterative"


class DecompositionUpload(BaseModel):
    channel: ChannelUpload
    distribution: DistributionUpload
    s: list[float]
    method: str = DecompositionMethod.PARTITION

    @validator("method")
    def _method(cls, value):
        if value not in (DecompositionMethod.PARTITION, DecompositionMethod.ITERATIVE):
            raise ValueError(f"unknown decomposition method {value!r}")
        return value


class DecompositionRow(BaseModel):
    s: float
    x: list[float]
    x_raw: list[float] | None = None


class DecompositionRead(BaseModel):
    plan: dict | None
    allocation: Allocation | None = None
    rows: list[DecompositionRow]
