from itertools import combinations

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from exception.domain_exception import DomainException
from exception.infeasible_distribution_exception import InfeasibleDistributionException
from infra.env import EQUALITY_TOLERANCE, FEASIBILITY_TOLERANCE, ROOT_TOLERANCE
from model.channel.channel_model import require_canonical
from model.distribution.bounded_dist import BoundedDist
from model.distribution.discrete_dist import from_atoms
from model.distribution.distribution_model import maximally_convex_slt
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec
from scheme.feasibility.feasibility_scheme import Allocation, FeasibilityReport


def _slack(S: BoundedDist, spec: ChannelSpec) -> list[float]:
    inner = spec.cumulative_gains[1:-1]
    if inner.size == 0:
        return []
    return (spec.tail_sums[1:-1] - np.atleast_1d(S.slt(inner))).tolist()


def check_ec(S: BoundedDist, spec: ChannelSpec) -> FeasibilityReport:
    """
    S is comonotonically (h, alpha)-decomposable iff E[S] = h.alpha and the
    SLT of S stays below the maximally convex one at every H_[k].
    """
    require_canonical(spec)
    mean_residual = S.mean() - spec.mean_intensity
    slack = _slack(S, spec)
    feasible = abs(mean_residual) <= EQUALITY_TOLERANCE and min(slack, default=0.0) >= -FEASIBILITY_TOLERANCE
    return FeasibilityReport(kind=ChannelKind.EC, feasible=feasible, mean_residual=mean_residual, slack=slack)


def check_bc(S: BoundedDist, spec: ChannelSpec) -> FeasibilityReport:
    require_canonical(spec)
    mean_residual = S.mean() - spec.mean_intensity
    slack = _slack(S, spec)
    feasible = mean_residual <= EQUALITY_TOLERANCE and min(slack, default=0.0) >= -FEASIBILITY_TOLERANCE
    return FeasibilityReport(kind=ChannelKind.BC, feasible=feasible, mean_residual=mean_residual, slack=slack)


def check(S: BoundedDist, spec: ChannelSpec, kind: str) -> FeasibilityReport:
    if kind == ChannelKind.EC:
        return check_ec(S, spec)
    if kind == ChannelKind.BC:
        return check_bc(S, spec)
    raise DomainException(f"Unknown channel kind: {kind}")


def allocation_for_mean(spec: ChannelSpec, target: float) -> Allocation:
    """
    Solves h.min(beta 1, alpha) = target for beta in [0, alpha_1]. On
    [alpha_{k+1}, alpha_k] the map is H_[k] beta + sum_{i>k} h_i alpha_i.
    """
    require_canonical(spec)
    alpha = spec.ratios
    cumulative = spec.cumulative_gains
    tails = spec.tail_sums
    total = spec.mean_intensity
    if target > total + EQUALITY_TOLERANCE or target < -EQUALITY_TOLERANCE:
        raise InfeasibleDistributionException(f"mean {target!r} outside [0, {total!r}]")
    if target >= total - EQUALITY_TOLERANCE:
        return Allocation(a=alpha.tolist(), beta=float(alpha[0]))
    if target <= 0.0:
        return Allocation(a=[0.0] * spec.size, beta=0.0)

    n = spec.size
    beta = float(alpha[0])
    for k in range(n, 0, -1):
        upper = alpha[k - 1]
        if target <= cumulative[k] * upper + tails[k]:
            lower = alpha[k] if k < n else 0.0
            beta = float(np.clip((target - tails[k]) / cumulative[k], lower, upper))
            break
    a = np.minimum(beta, alpha)
    return Allocation(a=a.tolist(), beta=beta)


def bc_allocation(S: BoundedDist, spec: ChannelSpec) -> Allocation:
    """
    Average-intensity vector a = min(beta 1, alpha) with h.a = E[S]; S is then
    (h, a)-decomposable.
    """
    report = check_bc(S, spec)
    if not report.feasible:
        raise InfeasibleDistributionException(
            f"S is not feasible for the bounded-cost channel (mean residual {report.mean_residual!r}, "
            f"min slack {report.min_slack!r})"
        )
    return allocation_for_mean(spec, S.mean())


def convex_order_dominates(S: BoundedDist, spec: ChannelSpec, grid: int = 1001) -> bool:
    """SLT comparison against the maximally convex law on a uniform grid plus the breakpoints."""
    require_canonical(spec)
    if grid < 2:
        raise DomainException("grid must have at least two points")
    if abs(S.mean() - spec.mean_intensity) > EQUALITY_TOLERANCE:
        raise DomainException(
            f"convex order needs equal means, got {S.mean()!r} and {spec.mean_intensity!r}"
        )
    t = np.union1d(np.linspace(0.0, 1.0, grid), spec.cumulative_gains)
    return bool(np.all(np.asarray(S.slt(t)) <= maximally_convex_slt(spec, t) + FEASIBILITY_TOLERANCE))


def check_subsets(S: BoundedDist, spec: ChannelSpec) -> float:
    """
    Minimum over nonempty proper index sets J of
    sum_{k not in J} h_k alpha_k - SLT of S at sum_{k in J} h_k.
    A negative value rules out decomposability.
    """
    h = spec.gains
    weighted = h * spec.ratios
    total = weighted.sum()
    worst = np.inf
    for size in range(1, spec.size):
        for subset in combinations(range(spec.size), size):
            J = list(subset)
            worst = min(worst, total - weighted[J].sum() - float(S.slt(min(h[J].sum(), 1.0))))
    return float(worst) if np.isfinite(worst) else 0.0


def max_constellation_scale(shape_support, masses, spec: ChannelSpec, kind: str) -> float:
    """
    Largest c in [0, 1 / max(shape)] such that the law of c * U passes the
    feasibility check of `kind`. For the equal-cost channel the mean pins c.
    """
    shape = np.asarray(shape_support, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if np.any(shape < 0.0) or shape.max() <= 0.0:
        raise DomainException("constellation shape must be nonnegative with a positive point")
    upper = 1.0 / shape.max()

    def _law(c: float):
        return from_atoms(np.minimum(c * shape, 1.0), masses)

    if kind == ChannelKind.EC:
        c = spec.mean_intensity / float(shape @ masses)
        if c > upper + EQUALITY_TOLERANCE or not check_ec(_law(min(c, upper)), spec).feasible:
            raise InfeasibleDistributionException("no scaling of the constellation is feasible")
        return min(c, upper)

    def margin(c: float) -> float:
        report = check_bc(_law(c), spec)
        return min(EQUALITY_TOLERANCE - report.mean_residual, report.min_slack + FEASIBILITY_TOLERANCE)

    if margin(upper) >= 0.0:
        return upper
    # The margin decreases in c: the SLT of c * U grows with c
    c = bisect(margin, 0.0, upper, xtol=ROOT_TOLERANCE)
    if margin(c) < 0.0:
        c = max(c - ROOT_TOLERANCE, 0.0)
    logger.debug(f"Constellation scale {c!r}")
    return c
