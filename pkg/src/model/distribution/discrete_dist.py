import numpy as np

from exception.invalid_distribution_exception import InvalidDistributionException
from infra.env import SUM_TOLERANCE
from model.distribution.bounded_dist import BoundedDist, check_probability, check_unit_interval


def _as_output(value):
    value = np.asarray(value, dtype=float)
    return value if value.ndim else float(value)


class DiscreteDist(BoundedDist):
    """Finite-alphabet law: atoms `support` with probabilities `masses`."""

    def __init__(self, support, masses):
        support = np.ascontiguousarray(support, dtype=float)
        masses = np.ascontiguousarray(masses, dtype=float)
        if support.ndim != 1 or masses.ndim != 1 or support.shape != masses.shape or support.size == 0:
            raise InvalidDistributionException("support and masses must be nonempty 1-D arrays of equal length")
        if np.any(~np.isfinite(support)) or np.any(support < 0.0) or np.any(support > 1.0):
            raise InvalidDistributionException("support points must lie in [0, 1]")
        if np.any(np.diff(support) <= 0.0):
            raise InvalidDistributionException("support must be strictly increasing")
        if np.any(~np.isfinite(masses)) or np.any(masses <= 0.0):
            raise InvalidDistributionException("masses must be positive")
        if abs(masses.sum() - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionException(f"masses must sum to 1, got {masses.sum()!r}")

        self.support = support
        self.masses = masses
        self._cumulative = np.cumsum(masses)
        self._cumulative[-1] = 1.0

    def __repr__(self):
        return f"DiscreteDist(support={self.support.tolist()}, masses={self.masses.tolist()})"

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.support, x, side="right")
        value = np.where(idx > 0, self._cumulative[np.maximum(idx - 1, 0)], 0.0)
        return _as_output(value)

    def quantile(self, p):
        p = check_probability(p)
        idx = np.searchsorted(self._cumulative, p, side="left")
        idx = np.minimum(idx, self.support.size - 1)
        return _as_output(self.support[idx])

    def slt(self, t):
        t = check_unit_interval(t)
        gaps = np.maximum(self.support - t[..., None], 0.0)
        return _as_output(gaps @ self.masses)

    def mean(self) -> float:
        return float(self.support @ self.masses)

    def variance(self) -> float:
        centred = self.support - self.mean()
        return float((centred * centred) @ self.masses)

    def reflect(self) -> "DiscreteDist":
        return DiscreteDist(1.0 - self.support[::-1], self.masses[::-1])


def point_mass(c: float) -> DiscreteDist:
    return DiscreteDist([c], [1.0])


def from_atoms(support, masses) -> DiscreteDist:
    """
    Builds a law from unsorted atoms that may repeat or carry zero mass:
    sorts, sums masses of equal points and drops empty atoms.
    """
    support = np.asarray(support, dtype=float)
    masses = np.asarray(masses, dtype=float)
    points, inverse = np.unique(support, return_inverse=True)
    merged = np.zeros(points.size)
    np.add.at(merged, inverse, masses)
    keep = merged > 0.0
    return DiscreteDist(points[keep], merged[keep] / merged[keep].sum())
