"""Numerical verification of the mechanism's privacy machinery.

The privacy claim is a pointwise bound: for neighboring datasets the ratio of
release densities never exceeds exp(epsilon).  With smooth sensitivity
normalized to SS(D) = 1 (lossless, by the scale-family identity
f_{s,a}(x) = c*f_{cs,a}(cx)), a neighboring pair is fully described by two
numbers:

* lambda_r, the log-scale drift of the smooth sensitivity,
  SS(D')/SS(D) = exp(lambda_r*gamma), and
* lambda_s, the query shift in SS(D) units, q(D) - q(D') = lambda_s*SS(D).

Smoothness forces |lambda_r| <= 1.  The shift obeys
|q(D) - q(D')| <= min(SS(D), SS(D')), i.e.
|lambda_s| <= min(1, exp(lambda_r*gamma)); scenarios outside this set are not
realizable by datasets and can break the bound.

Beyond the ratio search, this module checks the closed-form log-density
derivatives against finite differences, the identity that the absolute
shift- and scale-derivatives of the log density sum to exactly epsilon, the
pointwise convergence to the Laplace density as gamma shrinks, and the
closed-form variance against quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .dist import PolyPlaceParams, log_pdf, pdf, variance
from .mechanism import MechanismSpec, laplace_pdf

#: Relative slack applied to exp(epsilon) before a ratio counts as a
#: violation; anything beyond it signals an implementation bug.
RATIO_SLACK = 1e-8
#: Cap on stored violation entries (the max ratio is always reported).
_MAX_VIOLATIONS = 1000


@dataclass(frozen=True)
class NeighborScenario:
    """One normalized neighboring-dataset configuration (lambda_r, lambda_s)."""

    lambda_r: float
    lambda_s: float

    def shift_bound(self, gamma: float) -> float:
        """Largest |lambda_s| realizable at this lambda_r."""
        return min(1.0, math.exp(self.lambda_r * gamma))

    def validate(self, gamma: float) -> None:
        if abs(self.lambda_r) > 1.0:
            raise ValueError(f"|lambda_r| must be <= 1, got {self.lambda_r}")
        if abs(self.lambda_s) > self.shift_bound(gamma):
            raise ValueError(
                f"|lambda_s|={abs(self.lambda_s)} exceeds the realizable bound "
                f"min(1, exp(lambda_r*gamma))={self.shift_bound(gamma)}"
            )

    def mirrored(self, gamma: float) -> "NeighborScenario":
        """The same pair viewed from the other dataset."""
        return NeighborScenario(
            -self.lambda_r, -self.lambda_s * math.exp(-self.lambda_r * gamma)
        )


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a privacy-loss ratio search over a scenario/point grid."""

    max_ratio: float
    argmax_scenario: NeighborScenario | None
    argmax_x: float | None
    grid_size: int
    violations: tuple


def _pair_params(spec: MechanismSpec, scenario: NeighborScenario):
    shape = spec.epsilon / spec.gamma
    base = PolyPlaceParams(1.0 / spec.gamma, shape)
    drift = PolyPlaceParams(math.exp(scenario.lambda_r * spec.gamma) / spec.gamma, shape)
    return base, drift


def density_ratio(spec: MechanismSpec, scenario: NeighborScenario, x):
    """Release-density ratio between the two neighbors at output x.

    x is expressed in SS(D) units with origin q(D).  Computed as a log-density
    difference and exponentiated last, so large shapes cannot overflow the
    comparison against exp(epsilon).
    """
    spec.require_polyplace_valid()
    scenario.validate(spec.gamma)
    base, drift = _pair_params(spec, scenario)
    arr = np.asarray(x, dtype=np.float64)
    out = np.exp(log_pdf(drift, arr + scenario.lambda_s) - log_pdf(base, arr))
    return float(out) if arr.ndim == 0 else out


def default_x_grid(points: int = 2001, span: float = 20.0) -> np.ndarray:
    return np.linspace(-span, span, points)


def default_scenario_grid(
    spec: MechanismSpec, n_lambda_r: int = 41, n_lambda_s: int = 41
) -> list[NeighborScenario]:
    """Scenario lattice covering the realizable set, boundary included.

    For each lambda_r the lambda_s range is scaled to the realizable bound, so
    the grid always samples the boundary where the proof's inequalities are
    tight.
    """
    scenarios = []
    for lr in np.linspace(-1.0, 1.0, n_lambda_r):
        bound = min(1.0, math.exp(float(lr) * spec.gamma))
        for ls in np.linspace(-bound, bound, n_lambda_s):
            scenarios.append(NeighborScenario(float(lr), float(ls)))
    return scenarios


def audit_privacy(
    spec: MechanismSpec,
    scenario_grid: list[NeighborScenario] | None = None,
    x_grid=None,
    slack: float = RATIO_SLACK,
) -> AuditReport:
    """Search the grid for privacy-loss ratios beyond exp(epsilon).

    The mechanism is epsilon-DP, so the violations list must come back empty
    up to the numerical slack; a nonempty list indicates an implementation
    bug, not a counterexample.  An empty grid yields the vacuous report
    (max_ratio 1, grid_size 0).
    """
    spec.require_polyplace_valid()
    if scenario_grid is None:
        scenario_grid = default_scenario_grid(spec)
    x_grid = default_x_grid() if x_grid is None else np.asarray(x_grid, dtype=np.float64)

    threshold = math.exp(spec.epsilon) * (1.0 + slack)
    max_ratio = 1.0
    argmax_scenario = None
    argmax_x = None
    violations: list[tuple[NeighborScenario, float, float]] = []

    if len(scenario_grid) and len(x_grid):
        base = PolyPlaceParams(1.0 / spec.gamma, spec.epsilon / spec.gamma)
        log_base = log_pdf(base, x_grid)
        for scenario in scenario_grid:
            scenario.validate(spec.gamma)
            _, drift = _pair_params(spec, scenario)
            ratios = np.exp(log_pdf(drift, x_grid + scenario.lambda_s) - log_base)
            i = int(np.argmax(ratios))
            if ratios[i] > max_ratio:
                max_ratio = float(ratios[i])
                argmax_scenario = scenario
                argmax_x = float(x_grid[i])
            over = np.nonzero(ratios > threshold)[0]
            for j in over[: max(0, _MAX_VIOLATIONS - len(violations))]:
                violations.append((scenario, float(x_grid[j]), float(ratios[j])))

    return AuditReport(
        max_ratio=max_ratio,
        argmax_scenario=argmax_scenario,
        argmax_x=argmax_x,
        grid_size=len(scenario_grid) * len(x_grid),
        violations=tuple(violations),
    )


def log_pdf_x_derivative(params: PolyPlaceParams, x):
    """Closed-form d/dx log pdf; undefined at x = 0 (density kink)."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr == 0.0):
        raise ValueError("the log-density x-derivative is undefined at x = 0")
    a, s = params.shape, params.scale
    u = np.abs(arr)
    inner = u / s * a < 1.0
    out = np.empty_like(u)
    out[inner] = (a - 1.0) / (u[inner] - s)
    out[~inner] = -(a + 1.0) / (u[~inner] + s)
    out = out * np.sign(arr)
    return float(out) if arr.ndim == 0 else out


def log_pdf_scale_derivative(params: PolyPlaceParams, x):
    """Closed-form d/dlambda log pdf under scale -> scale*exp(lambda/scale)."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr == 0.0):
        raise ValueError("evaluate the scale derivative at x != 0")
    a, s = params.shape, params.scale
    u = np.abs(arr)
    inner = u / s * a < 1.0
    out = np.empty_like(u)
    ui, uo = u[inner], u[~inner]
    out[inner] = -1.0 / s + (a - 1.0) * ui / (s * (s - ui))
    out[~inner] = -1.0 / s + (a + 1.0) * uo / (s * (s + uo))
    return float(out) if arr.ndim == 0 else out


def default_derivative_grid(
    spec: MechanismSpec, points_per_branch: int = 200
) -> np.ndarray:
    """Symmetric x grid sampling both branches away from 0 and the breakpoint.

    A |x| band of 1e-4*scale around the breakpoint is excluded so central
    finite differences never straddle the branch switch.
    """
    params = PolyPlaceParams(1.0 / spec.gamma, spec.epsilon / spec.gamma)
    b, s = params.breakpoint, params.scale
    half = points_per_branch // 2
    inner = np.linspace(0.05 * b, b - 2e-4 * s, half)
    inner = inner[inner > 0.0]
    outer = np.geomspace(b + 2e-4 * s, 5.0 * s, half)
    grid = np.concatenate([inner, outer])
    return np.concatenate([-grid[::-1], grid])


def check_derivative_formulas(spec: MechanismSpec, x_grid=None) -> float:
    """Max relative error of both closed-form derivatives vs central FD.

    Step sizes: 1e-6*scale for the x-derivative, 1e-6 in lambda for the scale
    derivative.
    """
    params = PolyPlaceParams(1.0 / spec.gamma, spec.epsilon / spec.gamma)
    x = default_derivative_grid(spec) if x_grid is None else np.asarray(x_grid, float)
    s = params.scale

    hx = 1e-6 * s
    fd_x = (log_pdf(params, x + hx) - log_pdf(params, x - hx)) / (2.0 * hx)
    closed_x = log_pdf_x_derivative(params, x)
    err_x = np.abs(closed_x - fd_x) / np.abs(closed_x)

    hl = 1e-6
    up = PolyPlaceParams(s * math.exp(hl / s), params.shape)
    down = PolyPlaceParams(s * math.exp(-hl / s), params.shape)
    fd_s = (log_pdf(up, x) - log_pdf(down, x)) / (2.0 * hl)
    closed_s = log_pdf_scale_derivative(params, x)
    # The scale derivative crosses zero exactly at the breakpoint; the grid's
    # exclusion band keeps |closed_s| large enough for a relative comparison.
    err_s = np.abs(closed_s - fd_s) / np.abs(closed_s)

    return float(max(err_x.max(), err_s.max()))


def check_differential_identity(spec: MechanismSpec, x_grid=None) -> float:
    """Max |sum - epsilon| of the two absolute log-density derivatives.

    With scale 1/gamma and shape epsilon/gamma, |d/dx log f| plus the absolute
    scale derivative equals epsilon exactly at every x != 0 (both branches);
    this is closed-form algebra, so deviations beyond rounding indicate a bug.
    """
    params = PolyPlaceParams(1.0 / spec.gamma, spec.epsilon / spec.gamma)
    x = default_derivative_grid(spec, 1000) if x_grid is None else np.asarray(x_grid, float)
    total = np.abs(log_pdf_x_derivative(params, x)) + np.abs(
        log_pdf_scale_derivative(params, x)
    )
    return float(np.max(np.abs(total - spec.epsilon)))


def check_convergence_to_laplace(
    a: float, epsilon: float, gamma_sequence, x_grid=(0.1, 1.0, 3.0)
) -> list[tuple[float, float]]:
    """Max |pdf ratio - 1| against Laplace(a/epsilon), per gamma.

    For a decreasing gamma sequence the deviations must shrink toward 0,
    witnessing the distributional convergence of PolyPlace(a/g, epsilon/g).
    """
    if not a > 0.0 or not epsilon > 0.0:
        raise ValueError("a and epsilon must be positive")
    x = np.asarray(x_grid, dtype=np.float64)
    reference = laplace_pdf(a / epsilon, x)
    table = []
    for gamma in gamma_sequence:
        if not 0.0 < gamma < epsilon:
            raise ValueError(f"gamma values must lie in (0, epsilon), got {gamma}")
        params = PolyPlaceParams(a / gamma, epsilon / gamma)
        deviation = np.max(np.abs(pdf(params, x) / reference - 1.0))
        table.append((float(gamma), float(deviation)))
    return table


def variance_by_quadrature(params: PolyPlaceParams) -> float:
    """Second moment by adaptive quadrature, split at the breakpoint."""
    integrand = lambda t: t * t * pdf(params, t)
    bump, _ = integrate.quad(
        integrand, 0.0, params.breakpoint, epsabs=1e-14, epsrel=1e-12, limit=300
    )
    tail, _ = integrate.quad(
        integrand, params.breakpoint, np.inf, epsabs=1e-14, epsrel=1e-12, limit=300
    )
    return 2.0 * (bump + tail)


def check_variance_quadrature(params_grid) -> float:
    """Max relative gap between the closed-form variance and quadrature."""
    worst = 0.0
    for params in params_grid:
        if params.shape <= 2.1:
            raise ValueError(
                f"quadrature cross-check needs shape > 2.1, got {params.shape}"
            )
        closed = variance(params)
        quad = variance_by_quadrature(params)
        worst = max(worst, abs(closed - quad) / closed)
    return worst
