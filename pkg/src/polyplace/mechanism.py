"""Noise-addition release mechanisms.

The primary mechanism adds PolyPlace(SS/gamma, epsilon/gamma) noise to a query
value, which is epsilon-DP whenever SS is a gamma-smooth upper bound on local
sensitivity.  Two Laplace baselines are included: the classic
global-sensitivity mechanism (pure DP) and the smooth-sensitivity Laplace
mechanism (approximate DP only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import PolyPlaceParams, sample
from .rng import open_unit_uniform

TAG_POLYPLACE = "polyplace"
TAG_LAPLACE_GLOBAL = "laplace_global"
TAG_LAPLACE_SMOOTH = "laplace_smooth"


@dataclass(frozen=True)
class MechanismSpec:
    """Privacy budget epsilon, smoothness parameter gamma, optional delta.

    delta is only consumed by the smooth-sensitivity Laplace baseline; the
    PolyPlace mechanism is pure epsilon-DP and ignores it.
    """

    epsilon: float
    gamma: float
    delta: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (math.isfinite(self.gamma) and self.gamma > 0.0):
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.delta is not None and not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")

    def require_polyplace_valid(self) -> None:
        """gamma < epsilon strictly; at gamma == epsilon the shape degenerates."""
        if self.gamma >= self.epsilon:
            raise ValueError(
                f"PolyPlace release needs gamma < epsilon, got gamma={self.gamma} "
                f"epsilon={self.epsilon}"
            )

    def laplace_smooth_budget(self) -> float:
        """Residual budget epsilon - gamma*ln(2/delta) of the Laplace baseline."""
        if self.delta is None:
            raise ValueError("smooth-sensitivity Laplace baseline requires delta")
        return self.epsilon - self.gamma * math.log(2.0 / self.delta)


@dataclass(frozen=True)
class ReleaseResult:
    """One noisy release plus the noise bookkeeping.

    noise_scale_used is 0 only for the degenerate exact release (smooth
    sensitivity 0 means the query is constant under the adjacency model).
    infinite_variance flags the gamma >= epsilon/2 regime of the PolyPlace
    mechanism, where the release is still epsilon-DP but has no second moment.
    """

    noisy_value: float
    noise_scale_used: float
    distribution_tag: str
    degenerate: bool = False
    infinite_variance: bool = False


def release_polyplace(
    query_value: float,
    smooth_sensitivity: float,
    spec: MechanismSpec,
    rng: np.random.Generator,
) -> ReleaseResult:
    """Release query_value + PolyPlace(SS/gamma, epsilon/gamma) noise."""
    spec.require_polyplace_valid()
    if smooth_sensitivity < 0.0:
        raise ValueError(f"smooth sensitivity must be >= 0, got {smooth_sensitivity}")
    shape = spec.epsilon / spec.gamma
    if smooth_sensitivity == 0.0:
        return ReleaseResult(query_value, 0.0, TAG_POLYPLACE, degenerate=True)
    scale = smooth_sensitivity / spec.gamma
    noise = sample(PolyPlaceParams(scale, shape), rng)
    return ReleaseResult(
        query_value + noise,
        scale,
        TAG_POLYPLACE,
        infinite_variance=shape <= 2.0,
    )


def release_laplace_global(
    query_value: float,
    global_sensitivity: float,
    epsilon: float,
    rng: np.random.Generator,
) -> ReleaseResult:
    """Classic Laplace mechanism scaled with the global sensitivity."""
    if not global_sensitivity > 0.0:
        raise ValueError(f"global sensitivity must be positive, got {global_sensitivity}")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    b = global_sensitivity / epsilon
    return ReleaseResult(query_value + laplace_sample(b, rng), b, TAG_LAPLACE_GLOBAL)


def release_laplace_smooth(
    query_value: float,
    smooth_sensitivity: float,
    spec: MechanismSpec,
    rng: np.random.Generator,
) -> ReleaseResult:
    """Smooth-sensitivity Laplace baseline; only (epsilon, delta)-DP.

    The noise scale is SS divided by the residual budget
    epsilon - gamma*ln(2/delta), which must be positive.
    """
    if smooth_sensitivity < 0.0:
        raise ValueError(f"smooth sensitivity must be >= 0, got {smooth_sensitivity}")
    budget = spec.laplace_smooth_budget()
    if budget <= 0.0:
        raise ValueError(
            f"smooth Laplace budget exhausted: epsilon - gamma*ln(2/delta) = {budget}"
        )
    if smooth_sensitivity == 0.0:
        return ReleaseResult(query_value, 0.0, TAG_LAPLACE_SMOOTH, degenerate=True)
    b = smooth_sensitivity / budget
    return ReleaseResult(query_value + laplace_sample(b, rng), b, TAG_LAPLACE_SMOOTH)


def laplace_pdf(b: float, x) -> float | np.ndarray:
    """Density of the zero-centered Laplace distribution with scale b."""
    return np.exp(-np.abs(x) / b) / (2.0 * b)


def laplace_quantile(b: float, u) -> float | np.ndarray:
    """Inverse cdf of Laplace(b) for u strictly inside (0, 1)."""
    d = np.asarray(u, dtype=np.float64) - 0.5
    out = -b * np.sign(d) * np.log1p(-2.0 * np.abs(d))
    return float(out) if out.ndim == 0 else out


def laplace_sample(b: float, rng: np.random.Generator, size=None):
    """Inverse-transform Laplace(b) sample from an open-interval uniform."""
    return laplace_quantile(b, open_unit_uniform(rng, size=size))
