from pydantic import BaseModel, validator


class MIResult(BaseModel):
    """I(S; S + Z) in nats with the accumulated quadrature error estimate."""
    value: float
    estimated_error: float

    @validator("estimated_error")
    def _nonnegative(cls, value):
        if value < 0:
            raise ValueError("estimated_error must be nonnegative")
        return value


class InputName:
    MAXIMALLY_CONVEX = "maximally_convex"
    MAXENT = "maxent"
    OOK = "ook"


class SandwichCheck(BaseModel):
    sigma: float
    input: str
    mutual_info: float
    estimated_error: float
    lower_epi: float
    best_lower: float
    best_upper: float
    holds: bool
