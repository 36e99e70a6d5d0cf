from abc import ABC, abstractmethod

import numpy as np

from exception.domain_exception import DomainException


class BoundedDist(ABC):
    """
    Law of a random variable supported on [0, 1].

    The stop-loss transform slt(t) = E[(X - t)_+] is convex, nonincreasing,
    equals the mean at t = 0 and vanishes at t = 1.
    """

    @abstractmethod
    def cdf(self, x):
        ...

    @abstractmethod
    def quantile(self, p):
        ...

    @abstractmethod
    def slt(self, t):
        ...

    @abstractmethod
    def mean(self) -> float:
        ...

    @abstractmethod
    def variance(self) -> float:
        ...

    @abstractmethod
    def reflect(self) -> "BoundedDist":
        """Law of 1 - X."""
        ...

    def sample(self, rng: np.random.Generator, size=None):
        # Uniform on (0, 1]
        u = 1.0 - rng.random(size)
        return self.quantile(u)


def check_unit_interval(t, name: str = "t"):
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainException(f"{name} must lie in [0, 1], got {t}")
    return t


def check_probability(p):
    p = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p)) or np.any(p <= 0.0) or np.any(p > 1.0):
        raise DomainException(f"p must lie in (0, 1], got {p}")
    return p
