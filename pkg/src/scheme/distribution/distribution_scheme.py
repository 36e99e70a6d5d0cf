from pydantic import BaseModel, root_validator

from scheme.channel.channel_scheme import ChannelUpload


class DistributionType:
    DISCRETE = "discrete"
    MAXENT = "maxent"
    PWEXP = "pwexp"

    ALL = (DISCRETE, MAXENT, PWEXP)


class DistributionUpload(BaseModel):
    """
    Distribution file. `discrete` needs support and masses, `pwexp` needs
    lambdas (breakpoints default to the canonical cumulative gains, nu0 to
    the normalizing value), `maxent` is solved for the channel on the fly.
    Discrete values are in the coordinates of the channel as given, pwexp
    coefficients in those of its canonical form.
    """
    type: str
    support: list[float] | None = None
    masses: list[float] | None = None
    nu0: float | None = None
    lambdas: list[float] | None = None
    breakpoints: list[float] | None = None

    @root_validator(skip_on_failure=True)
    def _fields_for_type(cls, values):
        kind = values.get("type")
        if kind not in DistributionType.ALL:
            raise ValueError(f"type must be one of {', '.join(DistributionType.ALL)}")
        if kind == DistributionType.DISCRETE and (values.get("support") is None or values.get("masses") is None):
            raise ValueError("discrete distributions need support and masses")
        if kind == DistributionType.PWEXP and values.get("lambdas") is None:
            raise ValueError("pwexp distributions need lambdas")
        return values


class FeasibilityUpload(BaseModel):
    channel: ChannelUpload
    distribution: DistributionUpload
