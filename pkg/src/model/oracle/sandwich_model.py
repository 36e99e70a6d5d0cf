import numpy as np
from loguru import logger

from exception.infeasible_distribution_exception import InfeasibleDistributionException
from model.bounds import bounds_model
from model.channel.channel_model import canonicalize
from model.distribution.bounded_dist import BoundedDist
from model.distribution.discrete_dist import DiscreteDist
from model.distribution.distribution_model import maximally_convex_law
from model.feasibility.feasibility_model import max_constellation_scale
from model.maxent.maxent_model import solve_gamma
from model.oracle.mutual_information_model import mutual_info
from scheme.channel.channel_scheme import ChannelSpec
from scheme.maxent.maxent_scheme import MaxEntSolution
from scheme.oracle.mi_scheme import InputName, SandwichCheck

UPPER_SLACK = 1e-3
LOWER_SLACK = 2e-3
EPI_CHECK_MAX_SIGMA = 0.1


def ook_input(spec: ChannelSpec, kind: str) -> DiscreteDist | None:
    """Equiprobable on-off keying at the largest feasible level, if one exists."""
    try:
        level = max_constellation_scale([0.0, 1.0], [0.5, 0.5], spec, kind)
    except InfeasibleDistributionException:
        return None
    if level <= 0.0:
        return None
    return DiscreteDist([0.0, level], [0.5, 0.5])


def feasible_inputs(spec: ChannelSpec, kind: str, solution: MaxEntSolution | None = None) -> dict[str, BoundedDist]:
    canonical, _ = canonicalize(spec, kind)
    allocation = bounds_model.max_variance(canonical, kind).allocation
    solution = solution if solution is not None else solve_gamma(canonical, kind)
    inputs: dict[str, BoundedDist] = {
        InputName.MAXIMALLY_CONVEX: maximally_convex_law(canonical.gains, allocation),
        InputName.MAXENT: solution.density,
    }
    ook = ook_input(canonical, kind)
    if ook is not None:
        inputs[InputName.OOK] = ook
    else:
        logger.debug("No feasible on-off keying level for this channel")
    return inputs


def verify_sandwich(spec: ChannelSpec, sigmas, kind: str) -> list[SandwichCheck]:
    """
    Mutual information of feasible inputs against the bounds: every input
    stays below best_upper, and the max-entropy input stays above the EPI
    bound at high SNR.
    """
    canonical, _ = canonicalize(spec, kind)
    solution = solve_gamma(canonical, kind)
    inputs = feasible_inputs(canonical, kind, solution)
    checks = []
    for sigma in np.atleast_1d(np.asarray(sigmas, dtype=float)):
        report = bounds_model.bounds_at(canonical, float(sigma), kind, solution)
        for name, S in inputs.items():
            mi = mutual_info(S, float(sigma))
            holds = mi.value <= report.best_upper + UPPER_SLACK
            if name == InputName.MAXENT and sigma <= EPI_CHECK_MAX_SIGMA:
                holds = holds and mi.value >= report.lower_epi - LOWER_SLACK
            if not holds:
                logger.warning(f"Sandwich violated by {name} at sigma={sigma!r}: {mi.value!r} vs {report}")
            checks.append(
                SandwichCheck(
                    sigma=float(sigma),
                    input=name,
                    mutual_info=mi.value,
                    estimated_error=mi.estimated_error,
                    lower_epi=report.lower_epi,
                    best_lower=report.best_lower,
                    best_upper=report.best_upper,
                    holds=holds,
                )
            )
    return checks
