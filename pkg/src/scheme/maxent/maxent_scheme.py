from pydantic import BaseModel

from model.distribution.piecewise_exp_dist import PiecewiseExpDist


class MaxEntSolution(BaseModel):
    """
    Dual optimum of the maximum-entropy problem: density
    exp(nu0 - lambda_0 s - sum_i lambda_i (s - H_[i])_+) with maximum
    differential entropy gamma (nats).
    """
    kind: str
    nu0: float
    lambdas: list[float]
    gamma: float
    breakpoints: list[float]
    iterations: int
    density: PiecewiseExpDist

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    def to_json_dict(self) -> dict:
        return self.dict(exclude={"density"})
