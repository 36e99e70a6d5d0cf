import numpy as np
from scipy.special import logsumexp

from exception.invalid_distribution_exception import InvalidDistributionException
from infra.env import DENSITY_TOLERANCE
from model.distribution.bounded_dist import BoundedDist, check_probability, check_unit_interval
from util.exp_segment import local_inverse, log_zeta, mean_fraction, variance_fraction


def segment_rates(lambdas) -> np.ndarray:
    """Decay rate of the log-density on each segment: lambda_0 + ... + lambda_j."""
    return np.cumsum(np.asarray(lambdas, dtype=float))


def segment_log_heights(breakpoints, lambdas, nu0: float = 0.0) -> np.ndarray:
    """Log-density at the left end of each segment."""
    breakpoints = np.asarray(breakpoints, dtype=float)
    lengths = np.diff(breakpoints)
    drops = segment_rates(lambdas) * lengths
    return nu0 - np.concatenate([[0.0], np.cumsum(drops[:-1])])


def segment_log_masses(breakpoints, lambdas, nu0: float = 0.0) -> np.ndarray:
    breakpoints = np.asarray(breakpoints, dtype=float)
    lengths = np.diff(breakpoints)
    rates = segment_rates(lambdas)
    with np.errstate(divide="ignore"):
        return segment_log_heights(breakpoints, lambdas, nu0) + np.log(lengths) + log_zeta(-rates * lengths)


def log_partition(breakpoints, lambdas) -> float:
    """
    log of the integral of exp(-lambda_0 s - sum_i lambda_i (s - b_i)_+) over
    [b_0, b_m], hinges at the interior breakpoints.
    """
    return float(logsumexp(segment_log_masses(breakpoints, lambdas)))


def hinge_expectations(breakpoints, lambdas) -> np.ndarray:
    """
    E[(S - b_i)_+] for i = 0..m-1 under the normalized density. The i = 0
    entry is E[S] - b_0.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    lengths = np.diff(breakpoints)
    rates = segment_rates(lambdas)
    log_masses = segment_log_masses(breakpoints, lambdas)
    weights = np.exp(log_masses - logsumexp(log_masses))
    means = breakpoints[:-1] + lengths * mean_fraction(-rates * lengths)
    # Tail sums over segments j >= i
    mass_tail = np.cumsum(weights[::-1])[::-1]
    moment_tail = np.cumsum((weights * means)[::-1])[::-1]
    return moment_tail - mass_tail * breakpoints[:-1]


class PiecewiseExpDist(BoundedDist):
    """
    Density exp(nu0 - lambda_0 s - sum_{i>=1} lambda_i (s - b_i)_+) on
    [0, 1] with breakpoints 0 = b_0 < b_1 < ... < b_m = 1.

    When `nu0` is omitted it is set to the normalizing value.
    """

    def __init__(self, breakpoints, lambdas, nu0: float | None = None):
        breakpoints = np.ascontiguousarray(breakpoints, dtype=float)
        lambdas = np.ascontiguousarray(lambdas, dtype=float)
        if breakpoints.ndim != 1 or breakpoints.size < 2:
            raise InvalidDistributionException("breakpoints must be a 1-D array with at least two points")
        if breakpoints[0] != 0.0 or abs(breakpoints[-1] - 1.0) > 1e-12:
            raise InvalidDistributionException("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(breakpoints) <= 0.0):
            raise InvalidDistributionException("breakpoints must be strictly increasing")
        if lambdas.shape != (breakpoints.size - 1,):
            raise InvalidDistributionException(
                f"expected {breakpoints.size - 1} log-density coefficients, got {lambdas.size}"
            )
        if np.any(~np.isfinite(lambdas)):
            raise InvalidDistributionException("log-density coefficients must be finite")

        log_z = log_partition(breakpoints, lambdas)
        if nu0 is None:
            nu0 = -log_z
        elif abs(np.expm1(nu0 + log_z)) > DENSITY_TOLERANCE:
            raise InvalidDistributionException(
                f"density integrates to {np.exp(nu0 + log_z)!r}, not 1; omit nu0 to normalize"
            )

        self.breakpoints = breakpoints
        self.lambdas = lambdas
        self.nu0 = float(nu0)

        self._lengths = np.diff(breakpoints)
        self._rates = segment_rates(lambdas)
        self._log_heights = segment_log_heights(breakpoints, lambdas, self.nu0)
        log_masses = segment_log_masses(breakpoints, lambdas, self.nu0)
        self._masses = np.exp(log_masses)
        self._masses /= self._masses.sum()
        self._cumulative = np.cumsum(self._masses)
        self._cumulative[-1] = 1.0
        x = -self._rates * self._lengths
        self._means = breakpoints[:-1] + self._lengths * mean_fraction(x)
        self._variances = self._lengths ** 2 * variance_fraction(x)

    def __repr__(self):
        return (
            f"PiecewiseExpDist(breakpoints={self.breakpoints.tolist()}, "
            f"lambdas={self.lambdas.tolist()}, nu0={self.nu0!r})"
        )

    def _segment_of(self, x: float) -> int:
        idx = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return min(max(idx, 0), self._lengths.size - 1)

    def _partial(self, j: int, left: float, right: float) -> tuple[float, float]:
        """Mass and mean of the density restricted to [left, right] inside segment j."""
        length = right - left
        if length <= 0.0:
            return 0.0, left
        rate = self._rates[j]
        log_height = self._log_heights[j] - rate * (left - self.breakpoints[j])
        mass = float(np.exp(log_height + np.log(length) + log_zeta(-rate * length)))
        return mass, left + length * float(mean_fraction(-rate * length))

    def density(self, s):
        s = check_unit_interval(s, "s")
        idx = np.clip(np.searchsorted(self.breakpoints, s, side="right") - 1, 0, self._lengths.size - 1)
        value = np.exp(self._log_heights[idx] - self._rates[idx] * (s - self.breakpoints[idx]))
        return value if value.ndim else float(value)

    def log_density(self, s):
        s = np.asarray(s, dtype=float)
        idx = np.clip(np.searchsorted(self.breakpoints, s, side="right") - 1, 0, self._lengths.size - 1)
        value = self._log_heights[idx] - self._rates[idx] * (s - self.breakpoints[idx])
        return value if value.ndim else float(value)

    def _cdf_scalar(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        if x >= 1.0:
            return 1.0
        j = self._segment_of(x)
        below = self._cumulative[j - 1] if j > 0 else 0.0
        mass, _ = self._partial(j, self.breakpoints[j], x)
        return min(below + mass, 1.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return self._cdf_scalar(float(x))
        return np.array([self._cdf_scalar(v) for v in x.ravel()]).reshape(x.shape)

    def _slt_scalar(self, t: float) -> float:
        if t >= 1.0:
            return 0.0
        j = self._segment_of(t)
        mass, mean = self._partial(j, t, self.breakpoints[j + 1])
        total = mass * (mean - t)
        upper = self._masses[j + 1:]
        total += float(upper @ (self._means[j + 1:] - t))
        return max(total, 0.0)

    def slt(self, t):
        t = check_unit_interval(t)
        if t.ndim == 0:
            return self._slt_scalar(float(t))
        return np.array([self._slt_scalar(v) for v in t.ravel()]).reshape(t.shape)

    def quantile(self, p):
        p = check_probability(p)
        flat = np.atleast_1d(p).ravel()
        idx = np.minimum(np.searchsorted(self._cumulative, flat, side="left"), self._lengths.size - 1)
        below = np.where(idx > 0, self._cumulative[np.maximum(idx - 1, 0)], 0.0)
        fraction = np.clip((flat - below) / self._masses[idx], 0.0, 1.0)
        out = self.breakpoints[idx] + local_inverse(fraction, self._rates[idx], self._lengths[idx])
        out = np.clip(out, 0.0, 1.0)
        return out.reshape(p.shape) if p.ndim else float(out[0])

    def mean(self) -> float:
        return float(self._masses @ self._means)

    def variance(self) -> float:
        second = float(self._masses @ (self._variances + self._means ** 2))
        return max(second - self.mean() ** 2, 0.0)

    def hinge_expectations(self) -> np.ndarray:
        """E[(S - b_i)_+] for i = 0..m-1."""
        mass_tail = np.cumsum(self._masses[::-1])[::-1]
        moment_tail = np.cumsum((self._masses * self._means)[::-1])[::-1]
        return moment_tail - mass_tail * self.breakpoints[:-1]

    def differential_entropy(self) -> float:
        return float(-self.nu0 + self.lambdas @ self.hinge_expectations())

    def reflect(self) -> "PiecewiseExpDist":
        hinges = self.lambdas[1:]
        inner = self.breakpoints[1:-1]
        breakpoints = np.concatenate([[0.0], (1.0 - inner)[::-1], [1.0]])
        lambdas = np.concatenate([[-self.lambdas.sum()], hinges[::-1]])
        # log p(1), the new height at 0
        nu0 = self.nu0 - self.lambdas[0] - float(hinges @ (1.0 - inner))
        return PiecewiseExpDist(breakpoints, lambdas, nu0)
