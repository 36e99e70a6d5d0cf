import numpy as np
from loguru import logger

from exception.domain_exception import DomainException
from exception.solver_not_converged_exception import SolverNotConvergedException
from infra.env import MAXENT_GRADIENT_TOLERANCE, MAXENT_MAX_ITERATIONS
from model.channel.channel_model import require_canonical
from model.distribution.piecewise_exp_dist import PiecewiseExpDist, hinge_expectations, log_partition
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec
from scheme.maxent.maxent_scheme import MaxEntSolution
from util.exp_segment import zeta
from util.logger import log

__all__ = ["zeta", "dual_objective", "solve_gamma", "solve_siso_maxent", "lower_limits"]

_ARMIJO = 1e-4
_MIN_STEP = 1e-20


def lower_limits(spec: ChannelSpec, kind: str) -> np.ndarray:
    """Box of the dual variables: lambda_0 is free for EC, every other lambda is nonnegative."""
    if kind not in ChannelKind.ALL:
        raise DomainException(f"Unknown channel kind: {kind}")
    lower = np.zeros(spec.size)
    if kind == ChannelKind.EC:
        lower[0] = -np.inf
    return lower


def _check_signs(lambdas: np.ndarray, spec: ChannelSpec, kind: str):
    if lambdas.shape != (spec.size,):
        raise DomainException(f"expected {spec.size} multipliers, got {lambdas.size}")
    if np.any(lambdas < lower_limits(spec, kind)):
        raise DomainException(f"multipliers {lambdas.tolist()} violate the {kind} sign constraints")


def dual_objective(nu0: float, lambdas, spec: ChannelSpec, kind: str) -> float:
    """
    sum_i lambda_i (1 - H_[i]) alpha_bar_i - 1 - nu0
    + exp(nu0) * integral_0^1 exp(-lambda_0 s - sum_{i>=1} lambda_i (s - H_[i])_+) ds
    """
    lambdas = np.asarray(lambdas, dtype=float)
    _check_signs(lambdas, spec, kind)
    c = spec.tail_sums[:-1]
    log_z = log_partition(spec.cumulative_gains, lambdas)
    return float(lambdas @ c - 1.0 - nu0 + np.exp(nu0 + log_z))


def _reduced(lambdas: np.ndarray, breakpoints: np.ndarray, c: np.ndarray) -> tuple[float, np.ndarray]:
    value = float(lambdas @ c) + log_partition(breakpoints, lambdas)
    gradient = c - hinge_expectations(breakpoints, lambdas)
    return value, gradient


@log("Solve max-entropy dual")
def solve_gamma(spec: ChannelSpec, kind: str) -> MaxEntSolution:
    """
    Minimizes g(lambda) = lambda.c + log Z(lambda), nu0 eliminated as the
    normalizer, over the kind's sign box by projected Barzilai-Borwein
    steps with Armijo backtracking. g at the optimum is the maximum entropy.
    """
    require_canonical(spec)
    lower = lower_limits(spec, kind)
    breakpoints = spec.cumulative_gains
    c = spec.tail_sums[:-1]

    def project(x):
        return np.maximum(x, lower)

    lambdas = np.zeros(spec.size)
    value, gradient = _reduced(lambdas, breakpoints, c)
    step = 1.0
    converged = False
    iteration = 0
    for iteration in range(1, MAXENT_MAX_ITERATIONS + 1):
        projected_gradient = lambdas - project(lambdas - gradient)
        if np.linalg.norm(projected_gradient) < MAXENT_GRADIENT_TOLERANCE:
            converged = True
            break

        t = step
        slack = 1e-14 * max(1.0, abs(value))
        while True:
            candidate = project(lambdas - t * gradient)
            candidate_value, candidate_gradient = _reduced(candidate, breakpoints, c)
            decrease = float(gradient @ (candidate - lambdas))
            if candidate_value <= value + _ARMIJO * decrease + slack:
                break
            t *= 0.5
            if t < _MIN_STEP:
                raise SolverNotConvergedException(
                    f"line search failed at {lambdas.tolist()} (projected gradient "
                    f"{np.linalg.norm(projected_gradient)!r})"
                )

        s = candidate - lambdas
        y = candidate_gradient - gradient
        curvature = float(s @ y)
        step = float(np.clip(s @ s / curvature, 1e-10, 1e10)) if curvature > 0.0 else 1.0
        lambdas, value, gradient = candidate, candidate_value, candidate_gradient

    if not converged:
        raise SolverNotConvergedException(
            f"max-entropy dual did not converge in {MAXENT_MAX_ITERATIONS} iterations"
        )

    nu0 = -log_partition(breakpoints, lambdas)
    logger.debug(f"Max-entropy {kind}: {iteration} iterations, gamma={value!r}, lambdas={lambdas.tolist()}")
    return MaxEntSolution(
        kind=kind,
        nu0=nu0,
        lambdas=lambdas.tolist(),
        gamma=value,
        breakpoints=breakpoints.tolist(),
        iterations=iteration,
        density=PiecewiseExpDist(breakpoints, lambdas, nu0),
    )


def solve_siso_maxent(mean: float, kind: str) -> MaxEntSolution:
    """Entropy maximizer on [0, 1] under the mean constraint alone."""
    return solve_gamma(ChannelSpec(h=[1.0], alpha=[mean]), kind)
