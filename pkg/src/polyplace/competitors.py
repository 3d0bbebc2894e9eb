"""Standard deviations of noise distributions usable with smooth sensitivity.

All formulas are normalized to unit smooth sensitivity; multiply by SS for a
concrete release.  Infinite standard deviations are returned as float inf
(the distribution exists but has no second moment, or no valid shape exists);
None marks configurations where a mechanism is undefined outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import PolyPlaceParams, variance

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
#: Margin keeping golden-section brackets strictly inside open validity
#: intervals.
_BRACKET_MARGIN = 1e-6


@dataclass(frozen=True)
class ComparisonRow:
    """Standard deviations of all candidate mechanisms at one gamma.

    Shape entries are None when no valid shape exists; stddev entries are inf
    for diverging second moments and None where the mechanism itself is
    undefined (Laplace-smooth with exhausted budget).
    """

    gamma: float
    stddev_polyplace: float
    stddev_student_t_opt: float
    t_shape_opt: float | None
    stddev_cauchy_opt: float
    cauchy_shape_opt: float | None
    stddev_laplace_smooth: float | None
    stddev_laplace_global: float


def stddev_polyplace(gamma: float, epsilon: float) -> float:
    """Stddev of PolyPlace(1/gamma, epsilon/gamma); inf once epsilon/gamma <= 2."""
    if gamma >= epsilon:
        raise ValueError(f"requires gamma < epsilon, got {gamma} >= {epsilon}")
    if not gamma > 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    shape = epsilon / gamma
    if shape <= 2.0:
        return math.inf
    return math.sqrt(variance(PolyPlaceParams(1.0 / gamma, shape)))


def stddev_cauchy(c: float, gamma: float, epsilon: float) -> float:
    """Stddev of the generalized Cauchy mechanism with shape c.

    Finite only for c > 3 with gamma < epsilon/(c+1); infinite for every
    other positive (c, gamma).
    """
    if c <= 3.0 or gamma <= 0.0 or gamma >= epsilon / (c + 1.0):
        return math.inf
    radical = math.sqrt(2.0 * math.cos(2.0 * math.pi / c) + 1.0)
    return (c + 1.0) / ((epsilon - gamma * (c + 1.0)) * radical)


def stddev_student_t(d: float, gamma: float, epsilon: float) -> float:
    """Stddev of the Student's T mechanism with d degrees of freedom.

    Finite only for d > 2 with gamma < epsilon/(d+1).
    """
    if d <= 2.0 or gamma <= 0.0 or gamma >= epsilon / (d + 1.0):
        return math.inf
    return math.sqrt(d / (d - 2.0)) * (d + 1.0) / (2.0 * math.sqrt(d) * (epsilon - gamma * (d + 1.0)))


def stddev_laplace_smooth(gamma: float, epsilon: float, delta: float) -> float | None:
    """Stddev of the smooth-sensitivity Laplace baseline, or None.

    Valid while epsilon - gamma*ln(2/delta) stays positive; the mechanism is
    only (epsilon, delta)-DP.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    budget = epsilon - gamma * math.log(2.0 / delta)
    if budget <= 0.0:
        return None
    return math.sqrt(2.0) / budget


def stddev_laplace_global(epsilon: float) -> float:
    """Stddev of the global-sensitivity Laplace mechanism (gamma-independent)."""
    return math.sqrt(2.0) / epsilon


def _golden_section_min(f, lo: float, hi: float, tol: float) -> float:
    """Argmin of a unimodal f on [lo, hi], bracket narrowed to width tol."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimize_shape(
    formula: str, gamma: float, epsilon: float
) -> tuple[float | None, float]:
    """Numerically pick the shape minimizing a competitor's stddev.

    Searches the open validity interval (3, epsilon/gamma - 1) for the
    generalized Cauchy and (2, epsilon/gamma - 1) for Student's T by
    golden-section in log-shape space (both objectives blow up at both
    endpoints, so the minimum is interior).  Returns (None, inf) when the
    interval is empty.
    """
    if formula == "cauchy":
        shape_min, objective = 3.0, lambda c: stddev_cauchy(c, gamma, epsilon)
    elif formula == "student_t":
        shape_min, objective = 2.0, lambda d: stddev_student_t(d, gamma, epsilon)
    else:
        raise ValueError(f"unknown formula {formula!r}")
    if not gamma > 0.0 or gamma >= epsilon:
        raise ValueError(f"requires 0 < gamma < epsilon, got gamma={gamma}")

    shape_max = epsilon / gamma - 1.0
    lo = shape_min + _BRACKET_MARGIN
    hi = shape_max - _BRACKET_MARGIN
    if hi <= lo:
        return None, math.inf
    log_opt = _golden_section_min(
        lambda t: objective(math.exp(t)), math.log(lo), math.log(hi), _BRACKET_MARGIN
    )
    shape_opt = math.exp(log_opt)
    return shape_opt, objective(shape_opt)


def comparison_row(gamma: float, epsilon: float, delta: float) -> ComparisonRow:
    """All candidate stddevs at one grid point of the smoothing parameter."""
    t_shape, t_sd = optimize_shape("student_t", gamma, epsilon)
    c_shape, c_sd = optimize_shape("cauchy", gamma, epsilon)
    return ComparisonRow(
        gamma=gamma,
        stddev_polyplace=stddev_polyplace(gamma, epsilon),
        stddev_student_t_opt=t_sd,
        t_shape_opt=t_shape,
        stddev_cauchy_opt=c_sd,
        cauchy_shape_opt=c_shape,
        stddev_laplace_smooth=stddev_laplace_smooth(gamma, epsilon, delta),
        stddev_laplace_global=stddev_laplace_global(epsilon),
    )


def default_gamma_grid(epsilon: float, points: int = 50) -> np.ndarray:
    """Log-spaced smoothing-parameter grid spanning (0.005, 0.99) * epsilon."""
    return np.geomspace(0.005 * epsilon, 0.99 * epsilon, points)


def comparison_table(
    epsilon: float, delta: float, gammas=None
) -> list[ComparisonRow]:
    """ComparisonRow per gamma; defaults to :func:`default_gamma_grid`."""
    if gammas is None:
        gammas = default_gamma_grid(epsilon)
    return [comparison_row(float(g), epsilon, delta) for g in gammas]
