import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from scipy.optimize import minimize
from scipy.special import erfcx

from exception.domain_exception import DomainException
from infra.env import DUALITY_DELTA_POINTS, SWEEP_N_JOBS
from model.channel.channel_model import canonicalize, mirror
from model.distribution.distribution_model import maximally_convex_law
from model.distribution.piecewise_exp_dist import log_partition
from model.maxent.maxent_model import solve_gamma
from model.oracle.mutual_information_model import mutual_info
from scheme.bounds.bounds_scheme import BoundsReport, BoundsSweep, DualityCase, DualityParams, MaxVariance, SweepConfig
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec
from scheme.maxent.maxent_scheme import MaxEntSolution
from util.logger import log

_LOG_2PIE = np.log(2.0 * np.pi * np.e)
_SQRT_2PI = np.sqrt(2.0 * np.pi)
_NELDER_MEAD_RESTARTS = 3


def _check_sigma(sigma: float):
    if not sigma > 0:
        raise DomainException(f"sigma must be positive, got {sigma!r}")


def _canonical(spec: ChannelSpec, kind: str) -> ChannelSpec:
    canonical, _ = canonicalize(spec, kind)
    return canonical


def _solution(spec: ChannelSpec, kind: str, solution: MaxEntSolution | None) -> MaxEntSolution:
    return solution if solution is not None else solve_gamma(spec, kind)


def gaussian_q(x):
    """Gaussian tail probability, through erfcx so it stays accurate far out."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x) / np.sqrt(2.0)
    tail = 0.5 * erfcx(a) * np.exp(-a * a)
    value = np.where(x >= 0.0, tail, 1.0 - tail)
    return value if value.ndim else float(value)


def gaussian_pdf(x):
    x = np.asarray(x, dtype=float)
    value = np.exp(-0.5 * x * x) / _SQRT_2PI
    return value if value.ndim else float(value)


def lower_epi(spec: ChannelSpec, sigma: float, kind: str, solution: MaxEntSolution | None = None) -> float:
    """1/2 log(1 + exp(2 gamma) / (2 pi e sigma^2))."""
    _check_sigma(sigma)
    gamma = _solution(_canonical(spec, kind), kind, solution).gamma
    return 0.5 * float(np.logaddexp(0.0, 2.0 * gamma - _LOG_2PIE - 2.0 * np.log(sigma)))


def variance_ec(h, alpha) -> float:
    """sum_{i,j} h_i h_j (min(alpha_i, alpha_j) - alpha_i alpha_j)."""
    h = np.asarray(h, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    return float(h @ (np.minimum.outer(alpha, alpha) - np.outer(alpha, alpha)) @ h)


def _optimal_beta(spec: ChannelSpec) -> float:
    """
    Maximizer of the variance of the maximally convex law of (h, min(beta 1, alpha)).
    On (alpha_{k+1}, alpha_k] its derivative has the sign of
    H_[k] (1 - 2 beta) - 2 sum_{i>k} h_i alpha_i, and that sign only drops as beta grows.
    """
    alpha = spec.ratios
    if alpha[-1] >= 0.5:
        return 0.5
    cumulative = spec.cumulative_gains
    tails = spec.tail_sums
    for k in range(spec.size - 1, 0, -1):
        root = 0.5 - tails[k] / cumulative[k]
        if root <= alpha[k - 1]:
            return float(max(root, alpha[k]))
    return float(alpha[0])


def max_variance(spec: ChannelSpec, kind: str) -> MaxVariance:
    canonical = _canonical(spec, kind)
    if kind == ChannelKind.EC:
        return MaxVariance(kind=kind, value=variance_ec(canonical.h, canonical.alpha), allocation=canonical.alpha)
    beta = _optimal_beta(canonical)
    allocation = np.minimum(beta, canonical.ratios)
    value = maximally_convex_law(canonical.gains, allocation).variance()
    return MaxVariance(kind=kind, value=value, beta=beta, allocation=allocation.tolist())


def upper_maxvar(spec: ChannelSpec, sigma: float, kind: str) -> float:
    """1/2 log(1 + V_max / sigma^2)."""
    _check_sigma(sigma)
    return 0.5 * float(np.log1p(max_variance(spec, kind).value / sigma ** 2))


def _check_pattern(lambdas: np.ndarray, case: str):
    if case in (DualityCase.EC_A, DualityCase.BC):
        ok = np.all(lambdas >= 0.0)
    elif case == DualityCase.EC_B:
        ok = lambdas[0] <= 0.0 and np.all(lambdas[1:] >= 0.0)
    else:
        raise DomainException(f"Unknown duality case: {case}")
    if not ok:
        raise DomainException(f"multipliers {lambdas.tolist()} violate the sign pattern of case {case}")


def _cases(kind: str) -> tuple[str, ...]:
    if kind == ChannelKind.EC:
        return DualityCase.EC_A, DualityCase.EC_B
    if kind == ChannelKind.BC:
        return (DualityCase.BC,)
    raise DomainException(f"Unknown channel kind: {kind}")


def _duality_value(spec: ChannelSpec, sigma: float, lambdas: np.ndarray, delta: float, case: str) -> float:
    breakpoints = np.concatenate([spec.cumulative_gains, [1.0 + delta]])
    log_p = log_partition(breakpoints, np.concatenate([lambdas, [0.0]]))
    head = float(np.logaddexp(0.0, log_p - 0.5 * _LOG_2PIE - np.log(sigma)))
    linear = float(lambdas @ spec.tail_sums[:-1])
    tail = sigma / _SQRT_2PI * float(-np.expm1(-(1.0 + delta) ** 2 / (2.0 * sigma ** 2)))
    if case == DualityCase.EC_B:
        lambda0 = lambdas[0]
        correction = (
            lambda0 * sigma * (gaussian_pdf(1.0 / sigma) - gaussian_pdf(delta / sigma))
            - lambda0 * (gaussian_q(1.0 / sigma) + gaussian_q(delta / sigma))
        )
        return head + linear + tail * float(lambdas[1:].sum()) + correction
    return head + linear + tail * float(lambdas.sum())


def duality_bound_value(spec: ChannelSpec, sigma: float, kind: str, params: DualityParams) -> float:
    """
    log(1 + P / (sqrt(2 pi e) sigma)) + sum_i lambda_i (1 - H_[i]) alpha_bar_i + tail terms,
    P the integral of the piecewise-exponential body over [0, 1 + delta].
    Any admissible parameters give a valid upper bound.
    """
    _check_sigma(sigma)
    canonical = _canonical(spec, kind)
    if params.case not in _cases(kind):
        raise DomainException(f"case {params.case} does not apply to kind {kind}")
    if params.mirrored:
        if kind != ChannelKind.EC:
            raise DomainException("only equal-cost channels can be mirrored")
        canonical = mirror(canonical)
    lambdas = np.asarray(params.lambdas, dtype=float)
    if lambdas.shape != (canonical.size,):
        raise DomainException(f"expected {canonical.size} multipliers, got {lambdas.size}")
    _check_pattern(lambdas, params.case)
    return _duality_value(canonical, sigma, lambdas, params.delta, params.case)


def _project(lambdas: np.ndarray, case: str) -> np.ndarray:
    projected = np.maximum(lambdas, 0.0)
    if case == DualityCase.EC_B:
        projected[0] = min(lambdas[0], 0.0)
    return projected


def _delta_grid(sigma: float) -> np.ndarray:
    grid = np.geomspace(min(sigma ** 1.5, 1e-2), 10.0, DUALITY_DELTA_POINTS)
    extra = [np.sqrt(sigma), 2.0 * sigma, 4.0 * sigma, 6.0 * sigma, 8.0 * sigma]
    return np.union1d(grid, extra)


def _to_delta(log_delta: float) -> float:
    return float(np.exp(np.clip(log_delta, -60.0, 5.0)))


def _optimize_case(spec: ChannelSpec, sigma: float, case: str, seed: np.ndarray) -> tuple[float, np.ndarray, float]:
    value, lambdas, delta = np.inf, None, None
    for start in (np.zeros(spec.size), seed):
        projected = _project(start, case)
        for candidate in _delta_grid(sigma):
            candidate_value = _duality_value(spec, sigma, projected, candidate, case)
            if candidate_value < value:
                value, lambdas, delta = candidate_value, projected, candidate

    def objective(x):
        return _duality_value(spec, sigma, _project(x[:-1], case), _to_delta(x[-1]), case)

    # Nelder-Mead stalls on a collapsed simplex; a restart from its result rebuilds it
    x = np.concatenate([lambdas, [np.log(delta)]])
    for _ in range(_NELDER_MEAD_RESTARTS):
        result = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={"maxiter": 600 * (spec.size + 1), "xatol": 1e-11, "fatol": 1e-14},
        )
        if not (np.isfinite(result.fun) and result.fun < value):
            break
        value, x = float(result.fun), result.x
        lambdas, delta = _project(x[:-1], case), _to_delta(x[-1])
    return value, lambdas, delta


def optimize_duality(
    spec: ChannelSpec, sigma: float, kind: str, solution: MaxEntSolution | None = None
) -> tuple[float, DualityParams]:
    """
    Best bound found: seeds lambda = 0 and the max-entropy multipliers,
    projected on each sign pattern, over a delta grid, then a Nelder-Mead
    polish on (lambda, log delta). Equal-cost channels are also bounded
    through their mirror, so a channel and its mirror get the same value.
    """
    _check_sigma(sigma)
    canonical = _canonical(spec, kind)
    orientations = [(False, canonical, _solution(canonical, kind, solution))]
    if kind == ChannelKind.EC:
        mirrored = mirror(canonical)
        orientations.append((True, mirrored, solve_gamma(mirrored, kind)))

    best_value, best_params = np.inf, None
    for is_mirrored, oriented, oriented_solution in orientations:
        seed = np.asarray(oriented_solution.lambdas, dtype=float)
        for case in _cases(kind):
            value, lambdas, delta = _optimize_case(oriented, sigma, case, seed)
            if value < best_value:
                best_value = value
                best_params = DualityParams(delta=delta, lambdas=lambdas.tolist(), case=case, mirrored=is_mirrored)

    logger.debug(f"Duality bound {best_value!r} at sigma={sigma!r} with {best_params}")
    return best_value, best_params


def upper_duality(spec: ChannelSpec, sigma: float, kind: str, solution: MaxEntSolution | None = None) -> float:
    value, _ = optimize_duality(spec, sigma, kind, solution)
    return value


def low_snr_slope(spec: ChannelSpec, kind: str) -> float:
    """Limit of sigma^2 C as sigma grows: V_max / 2."""
    return max_variance(spec, kind).value / 2.0


def high_snr_offset(spec: ChannelSpec, kind: str, solution: MaxEntSolution | None = None) -> float:
    """C = log(1 / sigma) + offset + o(1) as sigma vanishes."""
    return -0.5 * _LOG_2PIE + _solution(_canonical(spec, kind), kind, solution).gamma


def lower_maxconvex(spec: ChannelSpec, sigma: float, kind: str) -> float:
    """
    I(S; S + Z) for the maximally convex input of (h, alpha), or of
    (h, min(beta* 1, alpha)) for the bounded-cost channel.
    """
    canonical = _canonical(spec, kind)
    allocation = max_variance(canonical, kind).allocation
    return mutual_info(maximally_convex_law(canonical.gains, allocation), sigma).value


def snr_db(sigma: float) -> float:
    return float(-20.0 * np.log10(sigma))


def bounds_at(spec: ChannelSpec, sigma: float, kind: str, solution: MaxEntSolution | None = None) -> BoundsReport:
    _check_sigma(sigma)
    canonical = _canonical(spec, kind)
    solution = _solution(canonical, kind, solution)
    epi = lower_epi(canonical, sigma, kind, solution)
    maxconvex = lower_maxconvex(canonical, sigma, kind)
    maxvar = upper_maxvar(canonical, sigma, kind)
    duality = upper_duality(canonical, sigma, kind, solution)
    best_lower = max(epi, maxconvex)
    best_upper = min(maxvar, duality)
    return BoundsReport(
        sigma=sigma,
        snr_db=snr_db(sigma),
        lower_epi=epi,
        lower_maxconvex=maxconvex,
        upper_maxvar=maxvar,
        upper_duality=duality,
        best_lower=best_lower,
        best_upper=best_upper,
        gap=best_upper - best_lower,
    )


def _envelope(reports: list[BoundsReport]) -> list[BoundsReport]:
    """Capacity is nonincreasing in sigma: carry upper bounds forward and lower bounds backward."""
    uppers = np.minimum.accumulate([r.best_upper for r in reports])
    lowers = np.maximum.accumulate([r.best_lower for r in reports][::-1])[::-1]
    return [
        r.copy(update={"best_upper": float(u), "best_lower": float(lo), "gap": float(u - lo)})
        for r, u, lo in zip(reports, uppers, lowers)
    ]


@log("Sweep capacity bounds")
def sweep(spec: ChannelSpec, config: SweepConfig, n_jobs: int = SWEEP_N_JOBS) -> BoundsSweep:
    """Bounds on a log-spaced sigma grid, rows in increasing sigma."""
    kind = config.kind
    canonical = _canonical(spec, kind)
    solution = solve_gamma(canonical, kind)
    sigmas = np.geomspace(config.sigma_min, config.sigma_max, config.points)
    reports = Parallel(n_jobs=n_jobs)(
        delayed(bounds_at)(canonical, float(sigma), kind, solution) for sigma in sigmas
    )
    return BoundsSweep(
        kind=kind,
        reports=_envelope(list(reports)),
        low_snr_slope=low_snr_slope(canonical, kind),
        high_snr_offset=high_snr_offset(canonical, kind, solution),
    )
