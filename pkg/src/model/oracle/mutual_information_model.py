"""
Mutual information of the scalar Gaussian channel Y = S + Z, Z ~ N(0, sigma^2),
for bounded inputs, by deterministic quadrature.
"""
import numpy as np
from loguru import logger
from scipy.integrate import quad
from scipy.special import log_ndtr, logsumexp

from exception.domain_exception import DomainException
from exception.solver_not_converged_exception import SolverNotConvergedException
from infra.env import MI_QUADRATURE_TOLERANCE
from model.distribution.bounded_dist import BoundedDist
from model.distribution.discrete_dist import DiscreteDist
from model.distribution.piecewise_exp_dist import PiecewiseExpDist
from scheme.oracle.mi_scheme import MIResult

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)
_Z_RANGE = 12.0
_Y_TAIL = 8.0
_ERROR_LIMIT = 1e-6
_MAX_KINKS = 64


def _check_sigma(sigma: float):
    if not sigma > 0:
        raise DomainException(f"sigma must be positive, got {sigma!r}")


def _log_ndtr_difference(lo, hi):
    """log(Phi(hi) - Phi(lo)) for lo < hi, using the upper tail when lo > 0."""
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    upper = lo > 0.0
    a = np.where(upper, log_ndtr(-lo), log_ndtr(hi))
    b = np.where(upper, log_ndtr(-hi), log_ndtr(lo))
    with np.errstate(divide="ignore"):
        return a + np.log1p(-np.exp(np.minimum(b - a, 0.0)))


def _log_density_discrete(S: DiscreteDist, sigma: float, y: np.ndarray) -> np.ndarray:
    z = (y[..., None] - S.support) / sigma
    return logsumexp(np.log(S.masses) - 0.5 * z * z, axis=-1) - _LOG_SQRT_2PI - np.log(sigma)


def _log_density_pwexp(S: PiecewiseExpDist, sigma: float, y: np.ndarray) -> np.ndarray:
    # Each segment exp(e - r (s - b)) smoothed by the Gaussian is closed form
    left = S.breakpoints[:-1]
    right = S.breakpoints[1:]
    rates = S._rates
    offsets = S._log_heights + rates * left
    yy = y[..., None]
    centre = yy - rates * sigma ** 2
    log_terms = (
        offsets - rates * yy + 0.5 * (rates * sigma) ** 2
        + _log_ndtr_difference((left - centre) / sigma, (right - centre) / sigma)
    )
    return logsumexp(log_terms, axis=-1)


def log_output_density(S: BoundedDist, sigma: float, y):
    _check_sigma(sigma)
    y = np.asarray(y, dtype=float)
    flat = np.atleast_1d(y)
    if isinstance(S, DiscreteDist):
        value = _log_density_discrete(S, sigma, flat)
    elif isinstance(S, PiecewiseExpDist):
        value = _log_density_pwexp(S, sigma, flat)
    else:
        raise DomainException(f"no output density for {type(S).__name__}")
    return value.reshape(y.shape) if y.ndim else float(value[0])


def output_density(S: BoundedDist, sigma: float, y):
    """f_Y(y) = E_S[gaussian pdf(y - S; sigma)]."""
    return np.exp(log_output_density(S, sigma, y))


def _quad(func, a: float, b: float, points=None, epsabs: float = MI_QUADRATURE_TOLERANCE) -> tuple[float, float]:
    limit = 200 if points is None else max(200, 4 * (len(points) + 2))
    result = quad(func, a, b, points=points, epsabs=epsabs, epsrel=1e-10, limit=limit, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3 and error > _ERROR_LIMIT:
        raise SolverNotConvergedException(f"quadrature on [{a!r}, {b!r}] failed: {result[3]}")
    return value, error


def _mutual_info_discrete(S: DiscreteDist, sigma: float) -> tuple[float, float]:
    """
    sum_i m_i E_Z[-logsumexp_j(log m_j - Z d_ij - d_ij^2 / 2)], d_ij = (x_i - x_j) / sigma,
    so the noise entropy never has to be subtracted.
    """
    if S.support.size == 1:
        return 0.0, 0.0
    log_masses = np.log(S.masses)
    total = error = 0.0
    for i, mass in enumerate(S.masses):
        d = (S.support[i] - S.support) / sigma

        def integrand(z, _d=d):
            return -np.exp(-0.5 * z * z - _LOG_SQRT_2PI) * logsumexp(log_masses - z * _d - 0.5 * _d * _d)

        kinks = np.unique(-d / 2.0)
        kinks = kinks[np.abs(kinks) < _Z_RANGE]
        if kinks.size > _MAX_KINKS:
            kinks = kinks[np.linspace(0, kinks.size - 1, _MAX_KINKS).astype(int)]
        value, err = _quad(integrand, -_Z_RANGE, _Z_RANGE, points=kinks if kinks.size else None)
        total += mass * value
        error += mass * err
    return total, error


def _mutual_info_pwexp(S: PiecewiseExpDist, sigma: float) -> tuple[float, float]:
    lo, hi = -_Y_TAIL * sigma, 1.0 + _Y_TAIL * sigma
    nodes = {lo, hi}
    for b in S.breakpoints:
        for k in (0.0, 1.0, 3.0, -1.0, -3.0):
            nodes.add(min(max(b + k * sigma, lo), hi))
    nodes = sorted(nodes)

    def integrand(y):
        log_f = _log_density_pwexp(S, sigma, np.atleast_1d(y))[0]
        if not np.isfinite(log_f):
            return 0.0
        return -np.exp(log_f) * log_f

    entropy = error = 0.0
    epsabs = MI_QUADRATURE_TOLERANCE / len(nodes)
    for a, b in zip(nodes[:-1], nodes[1:]):
        if b <= a:
            continue
        value, err = _quad(integrand, a, b, epsabs=epsabs)
        entropy += value
        error += err
    return entropy - 0.5 * np.log(2.0 * np.pi * np.e * sigma ** 2), error


def mutual_info(S: BoundedDist, sigma: float) -> MIResult:
    _check_sigma(sigma)
    if isinstance(S, DiscreteDist):
        value, error = _mutual_info_discrete(S, sigma)
    elif isinstance(S, PiecewiseExpDist):
        value, error = _mutual_info_pwexp(S, sigma)
    else:
        raise DomainException(f"no mutual information oracle for {type(S).__name__}")
    if value < -error - MI_QUADRATURE_TOLERANCE:
        logger.warning(f"Negative mutual information {value!r} at sigma={sigma!r}")
    return MIResult(value=max(value, 0.0), estimated_error=error)
