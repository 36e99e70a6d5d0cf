from pydantic import BaseModel, root_validator, validator

from scheme.channel.channel_scheme import ChannelKind, ChannelUpload


class DualityCase:
    # EC with every multiplier nonnegative
    EC_A = "ec_a"
    # EC with lambda_0 <= 0, the rest nonnegative
    EC_B = "ec_b"
    BC = "bc"

    ALL = (EC_A, EC_B, BC)


class DualityParams(BaseModel):
    delta: float
    lambdas: list[float]
    case: str
    # Parameters of the equal-cost channel mirrored by alpha -> 1 - alpha
    mirrored: bool = False

    @validator("delta")
    def _positive_delta(cls, value):
        if not value > 0:
            raise ValueError("delta must be positive")
        return value

    @validator("case")
    def _known_case(cls, value):
        if value not in DualityCase.ALL:
            raise ValueError(f"case must be one of {', '.join(DualityCase.ALL)}")
        return value


class MaxVariance(BaseModel):
    kind: str
    value: float
    beta: float | None = None
    allocation: list[float]


class BoundsReport(BaseModel):
    """Capacity bounds in nats at one noise level."""
    sigma: float
    snr_db: float
    lower_epi: float
    lower_maxconvex: float
    upper_maxvar: float
    upper_duality: float
    best_lower: float
    best_upper: float
    gap: float


class SweepConfig(BaseModel):
    sigma_min: float = 1e-4
    sigma_max: float = 10.0
    points: int = 40
    kind: str = ChannelKind.EC

    @validator("sigma_min", "sigma_max")
    def _positive(cls, value):
        if not value > 0:
            raise ValueError("sigma bounds must be positive")
        return value

    @validator("points")
    def _enough_points(cls, value):
        if value < 2:
            raise ValueError("a sweep needs at least two points")
        return value

    @validator("kind")
    def _known_kind(cls, value):
        if value not in ChannelKind.ALL:
            raise ValueError(f"kind must be one of {', '.join(ChannelKind.ALL)}")
        return value

    @root_validator(skip_on_failure=True)
    def _ordered(cls, values):
        if not values["sigma_min"] < values["sigma_max"]:
            raise ValueError("sigma_min must be smaller than sigma_max")
        return values


class BoundsSweep(BaseModel):
    kind: str
    reports: list[BoundsReport]
    low_snr_slope: float
    high_snr_offset: float


class BoundsUpload(BaseModel):
    channel: ChannelUpload
    sigma_min: float = 1e-4
    sigma_max: float = 10.0
    points: int = 40
