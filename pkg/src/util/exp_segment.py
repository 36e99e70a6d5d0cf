"""
Special functions of a single exponential segment.

A segment of a piecewise-exponential density has the shape exp(e - r (s - b))
on [b, b + L]. With x = -r L every integral over the segment reduces to a
function of x on the unit interval:

- zeta(x) = (e^x - 1) / x, the normalized mass;
- mean_fraction(x), the mean of u under the density proportional to e^{x u} on [0, 1];
- variance_fraction(x), the variance of the same law.
"""
import numpy as np

_SERIES_ZETA = 1e-6
_SERIES_MEAN = 1e-4
_SERIES_VARIANCE = 1e-2


def zeta(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_ZETA
    safe = np.where(small, 1.0, x)
    value = np.where(small, 1.0 + x / 2.0 + x * x / 6.0, np.expm1(safe) / safe)
    return value if value.ndim else float(value)


def log_zeta(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_ZETA
    positive = x > 0
    safe = np.where(small, 1.0, np.abs(x))
    # e^x (1 - e^{-x}) / x for x > 0, (1 - e^x) / (-x) for x < 0
    large = np.log(-np.expm1(-safe) / safe) + np.where(positive, safe, 0.0)
    value = np.where(small, np.log1p(x / 2.0 + x * x / 6.0), large)
    return value if value.ndim else float(value)


def mean_fraction(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_MEAN
    a = np.where(small, 1.0, np.abs(x))
    upper = 1.0 / (-np.expm1(-a)) - 1.0 / a
    # Law of 1 - u flips the sign of the rate
    large = np.where(x > 0, upper, 1.0 - upper)
    value = np.where(small, 0.5 + x / 12.0 - x ** 3 / 720.0, large)
    return value if value.ndim else float(value)


def variance_fraction(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_VARIANCE
    a = np.where(small, 1.0, np.abs(x))
    with np.errstate(over="ignore"):
        large = 1.0 / (a * a) - 1.0 / (4.0 * np.sinh(a / 2.0) ** 2)
    value = np.where(small, 1.0 / 12.0 - x * x / 240.0 + x ** 4 / 3024.0, large)
    return value if value.ndim else float(value)


def local_inverse(q, rate, length):
    """
    Offset y in [0, length] at which a segment with the given rate has
    accumulated the fraction q of its own mass. Broadcasts over its arguments.
    """
    q, rate, length = np.broadcast_arrays(
        np.asarray(q, dtype=float), np.asarray(rate, dtype=float), np.asarray(length, dtype=float)
    )
    x = rate * length
    small = np.abs(x) < 1e-8
    safe_rate = np.where(small, 1.0, rate)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = -np.log1p(q * np.expm1(-np.where(small, 0.0, x))) / safe_rate
    value = np.clip(np.where(small, q * length, exact), 0.0, length)
    return value if value.ndim else float(value)
