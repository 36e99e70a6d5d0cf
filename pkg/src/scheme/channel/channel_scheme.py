import numpy as np
from pydantic import BaseModel, root_validator, validator

from infra.env import SUM_TOLERANCE


class ChannelKind:
    EC = "ec"
    BC = "bc"

    ALL = (EC, BC)


class RawChannelSpec(BaseModel):
    h_raw: list[float]
    peaks: list[float]
    alpha: list[float]
    sigma_raw: float | None = None

    class Config:
        allow_mutation = False

    @validator("h_raw", "peaks")
    def _positive(cls, value, field):
        if not value:
            raise ValueError(f"{field.name} must not be empty")
        if any(not np.isfinite(v) or v <= 0 for v in value):
            raise ValueError(f"{field.name} entries must be positive")
        return value

    @validator("alpha")
    def _ratios(cls, value):
        if any(not 0.0 < a < 1.0 for a in value):
            raise ValueError("alpha entries must lie strictly between 0 and 1")
        return value

    @validator("sigma_raw")
    def _noise(cls, value):
        if value is not None and not value > 0:
            raise ValueError("sigma_raw must be positive")
        return value

    @root_validator(skip_on_failure=True)
    def _same_length(cls, values):
        if not len(values["h_raw"]) == len(values["peaks"]) == len(values["alpha"]):
            raise ValueError("h_raw, peaks and alpha must have the same length")
        return values


class ChannelSpec(BaseModel):
    """
    Normalized MISO channel: gains h (positive, summing to 1), per-antenna
    average-to-peak ratios alpha and noise standard deviation sigma.
    """
    h: list[float]
    alpha: list[float]
    sigma: float | None = None

    class Config:
        allow_mutation = False

    @validator("h")
    def _gains(cls, value):
        if not value:
            raise ValueError("h must not be empty")
        if any(not np.isfinite(v) or v <= 0 for v in value):
            raise ValueError("h entries must be positive")
        if abs(sum(value) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"h must sum to 1, got {sum(value)!r}")
        return value

    @validator("alpha")
    def _ratios(cls, value):
        if any(not 0.0 < a < 1.0 for a in value):
            raise ValueError("alpha entries must lie strictly between 0 and 1")
        return value

    @validator("sigma")
    def _noise(cls, value):
        if value is not None and not value > 0:
            raise ValueError("sigma must be positive")
        return value

    @root_validator(skip_on_failure=True)
    def _same_length(cls, values):
        if len(values["h"]) != len(values["alpha"]):
            raise ValueError("h and alpha must have the same length")
        return values

    @property
    def size(self) -> int:
        return len(self.h)

    @property
    def gains(self) -> np.ndarray:
        return np.asarray(self.h, dtype=float)

    @property
    def ratios(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)

    @property
    def cumulative_gains(self) -> np.ndarray:
        """H_[0..n] with H_[0] = 0 and H_[n] = 1."""
        cumulative = np.concatenate([[0.0], np.cumsum(self.gains)])
        cumulative[-1] = 1.0
        return cumulative

    @property
    def tail_sums(self) -> np.ndarray:
        """(1 - H_[k]) * tail-average alpha_k = sum_{i>k} h_i alpha_i for k = 0..n."""
        weighted = self.gains * self.ratios
        return np.concatenate([np.cumsum(weighted[::-1])[::-1], [0.0]])

    @property
    def tail_averages(self) -> np.ndarray:
        cumulative = self.cumulative_gains
        tails = self.tail_sums
        averages = np.zeros_like(tails)
        averages[:-1] = tails[:-1] / (1.0 - cumulative[:-1])
        return averages

    @property
    def mean_intensity(self) -> float:
        return float(self.gains @ self.ratios)

    def is_canonical(self) -> bool:
        return bool(np.all(np.diff(self.ratios) < 0.0))


class Reduction(BaseModel):
    """
    Maps canonical antennas back to the antennas of the channel as given:
    `groups[g]` lists the original indices driven by canonical antenna g.
    """
    kind: str
    groups: list[list[int]]
    original_size: int
    flipped: bool = False
    clamped: bool = False

    class Config:
        allow_mutation = False

    @property
    def is_identity(self) -> bool:
        return (
            not self.flipped
            and not self.clamped
            and self.groups == [[k] for k in range(self.original_size)]
        )


class ChannelUpload(BaseModel):
    """Channel file: normalized form (h, alpha, sigma) or raw form (h_raw, peaks, alpha, sigma_raw)."""
    h: list[float] | None = None
    alpha: list[float]
    sigma: float | None = None
    h_raw: list[float] | None = None
    peaks: list[float] | None = None
    sigma_raw: float | None = None

    @root_validator(skip_on_failure=True)
    def _one_form(cls, values):
        normalized = values.get("h") is not None
        raw = values.get("h_raw") is not None or values.get("peaks") is not None
        if normalized == raw:
            raise ValueError("give either h (normalized form) or h_raw and peaks (raw form)")
        if raw and (values.get("h_raw") is None or values.get("peaks") is None):
            raise ValueError("raw form needs both h_raw and peaks")
        return values


class CanonicalizeUpload(BaseModel):
    channel: ChannelUpload
    kind: str = ChannelKind.EC
    clamp: bool = True


class CanonicalizeRead(BaseModel):
    channel: ChannelSpec
    reduction: Reduction
