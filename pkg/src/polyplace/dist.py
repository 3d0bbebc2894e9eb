"""The PolyPlace(scale, shape) noise distribution.

A symmetric distribution on the reals with two power-law branches meeting at
the breakpoint |x| = scale/shape: a polynomial bump near the origin and a
Pareto-like tail with exponent shape + 1.  All densities, tail masses and
quantiles are evaluated in log space so that large shape values never
exponentiate out of range.

Functions accept scalar or ndarray ``x``/``p`` arguments and return matching
shapes; scalars in, floats out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rng import open_unit_uniform

#: Bracket half-width (in units of scale) and interval tolerance for the
#: bisection fallback used when a quantile probability sits within
#: QUANTILE_BOUNDARY_TOL of a branch boundary.
_BISECT_SPAN = 1e6
_BISECT_TOL = 1e-13
QUANTILE_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class PolyPlaceParams:
    """Scale and shape of one PolyPlace distribution instance.

    Requires scale > 0 and shape > 1 (strict).  Derived quantities are cached:
    the breakpoint scale/shape and the normalizer that makes the density
    integrate to one.
    """

    scale: float
    shape: float

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValueError(f"scale must be a positive real, got {self.scale}")
        if not (math.isfinite(self.shape) and self.shape > 1.0):
            raise ValueError(f"shape must be a real > 1, got {self.shape}")

    @cached_property
    def breakpoint(self) -> float:
        """Branch-switch point scale/shape; lies strictly inside (0, scale)."""
        return self.scale / self.shape

    @cached_property
    def _log_w(self) -> float:
        # log ((shape-1)/shape)^shape, the power that appears in the
        # normalizer; exp(shape * log1p(...)) avoids cancellation at large
        # shape.
        return self.shape * math.log1p(-1.0 / self.shape)

    @cached_property
    def _log_c(self) -> float:
        # log (1 - shape^-2)^shape, the outer-branch matching constant.
        return self.shape * math.log1p(-1.0 / self.shape**2)

    @cached_property
    def _z(self) -> float:
        # 2*((shape-1)/shape)^shape + shape - 1; 2*z*scale*normalizer == shape.
        return 2.0 * math.exp(self._log_w) + self.shape - 1.0

    @cached_property
    def normalizer(self) -> float:
        return self.shape / (2.0 * self._z * self.scale)

    @cached_property
    def _half_tail_at_breakpoint(self) -> float:
        # Probability mass of one outer branch, i.e. P(X >= breakpoint).
        return (self.shape + 1.0) * math.exp(self._log_w) / (2.0 * self._z)


def normalizer(params: PolyPlaceParams) -> float:
    """Normalizing constant of the density; scales like 1/scale."""
    return params.normalizer


def _split(x):
    """Return (asarray(x, float), was_scalar)."""
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def pdf(params: PolyPlaceParams, x) -> float | np.ndarray:
    """Probability density, an even function of x.

    Inner branch N*(shape-1)*(1-|x|/s)^(shape-1) for |x| < breakpoint, outer
    branch N*(shape+1)*(1-shape^-2)^shape*(1+|x|/s)^(-shape-1) otherwise; the
    two branches agree at the breakpoint.
    """
    arr, scalar = _split(x)
    a = params.shape
    u = np.abs(arr) / params.scale
    inner = u * a < 1.0
    out = np.empty_like(u)
    ui = u[inner]
    out[inner] = params.normalizer * (a - 1.0) * np.exp((a - 1.0) * np.log1p(-ui))
    uo = u[~inner]
    out[~inner] = (
        params.normalizer
        * (a + 1.0)
        * np.exp(params._log_c - (a + 1.0) * np.log1p(uo))
    )
    return float(out) if scalar else out


def log_pdf(params: PolyPlaceParams, x) -> float | np.ndarray:
    """Natural log of the density, assembled termwise in log space."""
    arr, scalar = _split(x)
    a = params.shape
    log_n = math.log(a) - math.log(2.0 * params._z * params.scale)
    u = np.abs(arr) / params.scale
    inner = u * a < 1.0
    out = np.empty_like(u)
    out[inner] = log_n + math.log(a - 1.0) + (a - 1.0) * np.log1p(-u[inner])
    out[~inner] = (
        log_n + math.log(a + 1.0) + params._log_c - (a + 1.0) * np.log1p(u[~inner])
    )
    return float(out) if scalar else out


def _tail_mass(params: PolyPlaceParams, u) -> np.ndarray:
    """P(X >= u*scale) for u >= 1/shape (outer branch, direct log form)."""
    a = params.shape
    return np.exp(
        math.log(a + 1.0) + params._log_c - a * np.log1p(u) - math.log(2.0 * params._z)
    )


def cdf(params: PolyPlaceParams, x) -> float | np.ndarray:
    """Cumulative distribution function.

    Symmetric about 0: cdf(-x) = 1 - cdf(x).  Far tails are computed from the
    one-sided tail mass directly, so cdf stays accurate (not just 0/1) deep
    into the left tail.
    """
    arr, scalar = _split(x)
    a = params.shape
    u = np.abs(arr) / params.scale
    inner = u * a < 1.0
    out = np.empty_like(u)

    # |x| below the breakpoint: half plus the signed bump integral.
    ui = u[inner]
    bump = (a - 1.0) * (-np.expm1(a * np.log1p(-ui))) / (2.0 * params._z)
    out[inner] = 0.5 + np.sign(arr[inner]) * bump

    outer = ~inner
    tail = _tail_mass(params, u[outer])
    out[outer] = np.where(arr[outer] > 0.0, 1.0 - tail, tail)
    return float(out) if scalar else out


def _quantile_closed(params: PolyPlaceParams, p: np.ndarray) -> np.ndarray:
    """Closed-form quantile; both branches invert as powers in log space."""
    a = params.shape
    s = params.scale
    z = params._z
    p_lo = params._half_tail_at_breakpoint

    out = np.empty_like(p)
    q = np.minimum(p, 1.0 - p)  # distance into the nearer tail
    sign = np.where(p >= 0.5, 1.0, -1.0)

    inner = q >= p_lo
    d = np.abs(p[inner] - 0.5)
    u = -np.expm1(np.log1p(-2.0 * z * d / (a - 1.0)) / a)
    out[inner] = sign[inner] * s * u

    tail = ~inner
    log_tail = (
        np.log(2.0 * z * q[tail]) - math.log(a + 1.0) - params._log_c
    )
    out[tail] = sign[tail] * s * np.expm1(-log_tail / a)
    return out


def _quantile_bisect(params: PolyPlaceParams, p: float) -> float:
    """Monotone bisection on the cdf; guards the branch boundary.

    Runs until the bracket stops shrinking in float64, well inside the
    _BISECT_TOL contract.
    """
    lo = -params.scale * _BISECT_SPAN
    hi = params.scale * _BISECT_SPAN
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        if cdf(params, mid) < p:
            lo = mid
        else:
            hi = mid


def quantile(params: PolyPlaceParams, p) -> float | np.ndarray:
    """Inverse cdf for p strictly inside (0, 1).

    Closed-form inversion is primary; probabilities within
    QUANTILE_BOUNDARY_TOL of the branch-boundary probabilities are refined by
    bisection in case rounding picked the wrong branch.
    """
    arr, scalar = _split(p)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("quantile probabilities must lie strictly in (0, 1)")
    out = _quantile_closed(params, np.atleast_1d(arr))
    p1 = np.atleast_1d(arr)
    p_lo = params._half_tail_at_breakpoint
    near = (np.abs(p1 - p_lo) < QUANTILE_BOUNDARY_TOL) | (
        np.abs((1.0 - p1) - p_lo) < QUANTILE_BOUNDARY_TOL
    )
    if np.any(near):
        for i in np.nonzero(near)[0]:
            out[i] = _quantile_bisect(params, float(p1[i]))
    return float(out[0]) if scalar else out


def sample(params: PolyPlaceParams, rng: np.random.Generator, size=None):
    """Inverse-transform sampling from the caller's random stream.

    Identical seed implies an identical sample sequence; the stream is the
    only state touched.
    """
    return quantile(params, open_unit_uniform(rng, size=size))


def mean(params: PolyPlaceParams) -> float:
    """Exactly 0: the density is even and the first moment is finite."""
    return 0.0


def variance(params: PolyPlaceParams) -> float:
    """Second central moment; +inf for shape <= 2.

    The tail exponent is shape + 1, so the second moment diverges once
    shape <= 2 (the closed form's denominator vanishes at shape = 2).  Near
    shape = 2 the relative conditioning degrades like 1/(shape - 2).
    """
    a = params.shape
    if a <= 2.0:
        return math.inf
    w = math.exp(params._log_w)
    num = (19.0 * a * a + 5.0) * w + (a - 2.0) * (a - 1.0) ** 2
    den = params._z * (a * a - 1.0) * (a * a - 4.0)
    return 2.0 * params.scale**2 * num / den


def stddev(params: PolyPlaceParams) -> float:
    """Square root of :func:`variance` (+inf when the variance diverges)."""
    return math.sqrt(variance(params))
