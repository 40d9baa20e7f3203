"""Small argument-checking helpers used across modules."""
import numbers

import numpy as np

from .exceptions import ConfigurationError, DomainError


def is_power_of_two(n):
    return isinstance(n, numbers.Integral) and n > 0 and (n & (n - 1)) == 0


def check_power_of_two(n, name="n", minimum=1):
    if not is_power_of_two(n) or n < minimum:
        raise ConfigurationError(
            f"{name} must be a power of two >= {minimum}, got {n!r}")
    return int(n)


def check_positive(value, name, error=ConfigurationError):
    if not np.isfinite(value) or value <= 0:
        raise error(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def check_nonnegative(value, name, error=DomainError):
    if not np.isfinite(value) or value < 0:
        raise error(f"{name} must be non-negative, got {value!r}")
    return float(value)


def check_finite_array(values, name, dtype=float):
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1:
        raise ConfigurationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} contains non-finite values")
    return arr


def frozen(arr):
    """Return a read-only copy of ``arr``."""
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out
