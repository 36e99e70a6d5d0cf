from pydantic import BaseModel


class FeasibilityReport(BaseModel):
    """
    mean_residual = E[S] - h.alpha; slack[k-1] = (1 - H_[k]) * tail-average
    alpha_k - SLT of S at H_[k] for k = 1..n-1.
    """
    kind: str
    feasible: bool
    mean_residual: float
    slack: list[float]

    @property
    def min_slack(self) -> float:
        return min(self.slack, default=0.0)


class Allocation(BaseModel):
    a: list[float]
    beta: float
