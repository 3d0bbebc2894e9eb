"""Seeded random streams for reproducible noise generation.

Every sampler in this package draws uniforms through :func:`open_unit_uniform`
so that quantile functions are never evaluated at 0 or 1.
"""

from __future__ import annotations

import numpy as np

_U53 = 1 << 53


def make_rng(seed: int = 0) -> np.random.Generator:
    """Return a deterministic PCG64 generator for a 64-bit unsigned seed."""
    if seed < 0 or seed >= 1 << 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(seed)


def open_unit_uniform(rng: np.random.Generator, size=None):
    """Draw uniforms on the open interval (0, 1).

    53-bit integers from the stream are mapped to k/2^53 with k >= 1, so both
    endpoints are excluded and every value is an exact binary float.  Returns
    a scalar float when ``size`` is None, else an ndarray.
    """
    k = rng.integers(1, _U53, size=size)
    if size is None:
        return float(k) * 2.0**-53
    return k.astype(np.float64) * 2.0**-53
