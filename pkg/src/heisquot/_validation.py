"""Argument checks shared by the public entry points."""

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p, odd=True):
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"p must be a prime, got {p!r}")
    if odd and p == 2:
        raise ValueError("p = 2 is not supported")
    return int(p)


def check_matrix(m, p, shape=None, name="matrix"):
    """Coerce to a reduced 2-D int64 array, optionally checking the shape."""
    a = np.asarray(m, dtype=np.int64)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if shape is not None:
        for want, got in zip(shape, a.shape):
            if want is not None and want != got:
                raise ValueError(f"{name} has shape {a.shape}, expected {shape}")
    return a % p


def check_square(m, p, name="matrix"):
    a = check_matrix(m, p, name=name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a
