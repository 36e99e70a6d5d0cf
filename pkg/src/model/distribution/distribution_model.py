import numpy as np

from model.channel.channel_model import require_canonical
from model.distribution.bounded_dist import BoundedDist
from model.distribution.discrete_dist import DiscreteDist, from_atoms, point_mass
from scheme.channel.channel_scheme import ChannelSpec

__all__ = [
    "slt",
    "quantile",
    "cdf",
    "mean",
    "variance",
    "sample",
    "maximally_convex",
    "maximally_convex_law",
    "maximally_convex_slt",
    "point_mass",
]


def slt(d: BoundedDist, t):
    """Stop-loss transform E[(X - t)_+]."""
    return d.slt(t)


def quantile(d: BoundedDist, p):
    return d.quantile(p)


def cdf(d: BoundedDist, x):
    return d.cdf(x)


def mean(d: BoundedDist) -> float:
    return d.mean()


def variance(d: BoundedDist) -> float:
    return d.variance()


def sample(d: BoundedDist, rng: np.random.Generator, size=None):
    return d.sample(rng, size)


def maximally_convex_law(h, a) -> DiscreteDist:
    """
    Law of sum_k h_k 1{U <= a_k} for a single uniform U with a sorted in
    nonincreasing order: atoms at the cumulative gains with masses
    (1 - a_1, a_1 - a_2, ..., a_n). Equal ratios give empty atoms, which are
    dropped.
    """
    h = np.asarray(h, dtype=float)
    a = np.asarray(a, dtype=float)
    support = np.concatenate([[0.0], np.cumsum(h)])
    support[-1] = 1.0
    masses = np.concatenate([[1.0 - a[0]], a[:-1] - a[1:], [a[-1]]])
    return from_atoms(support, np.maximum(masses, 0.0))


def maximally_convex(spec: ChannelSpec) -> DiscreteDist:
    """The convex-order maximum among (h, alpha)-decomposable equivalent inputs."""
    require_canonical(spec)
    return maximally_convex_law(spec.gains, spec.ratios)


def maximally_convex_slt(spec: ChannelSpec, t):
    """
    SLT of the maximally convex law: the piecewise linear function through
    (H_[k], (1 - H_[k]) * tail-average alpha_k), k = 0..n.
    """
    return np.interp(t, spec.cumulative_gains, spec.tail_sums)
