"""Distribution-level checks: closed forms against quadrature and identities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from polyplace.dist import (
    PolyPlaceParams,
    cdf,
    log_pdf,
    mean,
    normalizer,
    pdf,
    quantile,
    sample,
    variance,
)
from polyplace.rng import make_rng

GRID_SCALES = (0.1, 1.0, 7.0)
GRID_SHAPES = (1.1, 2.0, 3.0, 10.0, 100.0)


def quad_pdf_mass(params, lo, hi):
    """Adaptive quadrature of the density, split at branch switches."""
    pts = [t for t in (-params.breakpoint, params.breakpoint) if lo < t < hi]
    total, _ = integrate.quad(
        lambda t: pdf(params, t), lo, hi, points=pts or None,
        epsabs=1e-13, epsrel=1e-13, limit=300,
    )
    return total


def quad_total_mass(params):
    b = params.breakpoint
    bump, _ = integrate.quad(lambda t: pdf(params, t), 0, b,
                             epsabs=1e-13, epsrel=1e-13, limit=300)
    tail, _ = integrate.quad(lambda t: pdf(params, t), b, np.inf,
                             epsabs=1e-13, epsrel=1e-13, limit=300)
    return 2.0 * (bump + tail)


def quad_second_moment(params):
    b = params.breakpoint
    g = lambda t: t * t * pdf(params, t)
    bump, _ = integrate.quad(g, 0, b, epsabs=1e-14, epsrel=1e-12, limit=300)
    tail, _ = integrate.quad(g, b, np.inf, epsabs=1e-14, epsrel=1e-12, limit=300)
    return 2.0 * (bump + tail)


# ---------------------------------------------------------------------------
# parameters


@pytest.mark.parametrize("scale", (0.0, -1.0, math.inf, math.nan))
def test_invalid_scale_rejected(scale):
    with pytest.raises(ValueError):
        PolyPlaceParams(scale, 2.0)


@pytest.mark.parametrize("shape", (1.0, 0.5, -3.0, math.inf, math.nan))
def test_invalid_shape_rejected(shape):
    with pytest.raises(ValueError):
        PolyPlaceParams(1.0, shape)


def test_breakpoint_inside_scale():
    for s in GRID_SCALES:
        for a in GRID_SHAPES:
            b = PolyPlaceParams(s, a).breakpoint
            assert 0.0 < b < s


# ---------------------------------------------------------------------------
# normalizer


def test_normalizer_reference_values():
    assert normalizer(PolyPlaceParams(1.0, 2.0)) == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert normalizer(PolyPlaceParams(2.0, 2.0)) == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert normalizer(PolyPlaceParams(1.0, 1e6)) == pytest.approx(0.5, abs=1e-5)


def test_normalizer_matches_unnormalized_mass():
    # Quadrature of the density without its constant must give 1/N.  The tail
    # decays on a length of (s+b)/a, so split there lest the adaptive rule
    # never sees the spike at extreme shapes.
    for s, a in ((1.0, 2.0), (1.0, 1e6), (0.5, 3.0)):
        params = PolyPlaceParams(s, a)

        def unnormalized(t):
            u = abs(t) / s
            if u * a < 1.0:
                return (a - 1.0) * math.exp((a - 1.0) * math.log1p(-u))
            return (a + 1.0) * math.exp(
                a * math.log1p(-1.0 / a**2) - (a + 1.0) * math.log1p(u)
            )

        b = params.breakpoint
        cut = b + 45.0 * (s + b) / a
        bump, _ = integrate.quad(unnormalized, 0, b, epsabs=1e-13, epsrel=1e-13)
        near, _ = integrate.quad(unnormalized, b, cut, epsabs=1e-13, epsrel=1e-13, limit=300)
        far, _ = integrate.quad(unnormalized, cut, np.inf, epsabs=1e-13, epsrel=1e-13, limit=300)
        assert normalizer(params) == pytest.approx(1.0 / (2.0 * (bump + near + far)), rel=1e-9)


def test_normalizer_scaling_law():
    base = normalizer(PolyPlaceParams(1.0, 3.0))
    for c in (0.5, 2.0, 10.0):
        assert normalizer(PolyPlaceParams(c, 3.0)) == pytest.approx(base / c, rel=1e-14)


# ---------------------------------------------------------------------------
# pdf / log_pdf


def test_pdf_reference_values():
    p = PolyPlaceParams(1.0, 2.0)
    assert pdf(p, 0.0) == pytest.approx(2.0 / 3.0, rel=1e-14)
    # The breakpoint value comes out of both branch expressions.
    inner = (2.0 / 3.0) * 1.0 * (1.0 - 0.5)
    outer = (2.0 / 3.0) * 3.0 * (1.0 - 0.25) ** 2 * 1.5 ** -3
    assert inner == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert outer == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert pdf(p, 0.5) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_pdf_branch_continuity():
    for s in GRID_SCALES:
        for a in GRID_SHAPES:
            params = PolyPlaceParams(s, a)
            b = params.breakpoint
            inner_side = pdf(params, b * (1.0 - 1e-13))
            outer_side = pdf(params, b)
            assert inner_side == pytest.approx(outer_side, rel=1e-12)


def test_pdf_symmetric_and_monotone():
    for s in GRID_SCALES:
        for a in GRID_SHAPES:
            params = PolyPlaceParams(s, a)
            x = np.linspace(0, 10 * s, 500)
            vals = pdf(params, x)
            np.testing.assert_allclose(pdf(params, -x), vals, rtol=0)
            assert np.all(np.diff(vals) <= 0)


def test_pdf_scaling_invariance():
    x = np.linspace(-8, 8, 101)
    for a in GRID_SHAPES:
        base = pdf(PolyPlaceParams(1.0, a), x)
        for c in (0.5, 2.0, 10.0):
            scaled = c * pdf(PolyPlaceParams(c, a), c * x)
            np.testing.assert_allclose(scaled, base, rtol=1e-12)


def test_pdf_normalization_quadrature():
    for s in GRID_SCALES:
        for a in GRID_SHAPES:
            assert quad_total_mass(PolyPlaceParams(s, a)) == pytest.approx(1.0, abs=1e-9)


def test_log_pdf_matches_pdf():
    assert log_pdf(PolyPlaceParams(1.0, 2.0), 0.0) == pytest.approx(
        math.log(2.0 / 3.0), rel=1e-14
    )
    for a in GRID_SHAPES:
        params = PolyPlaceParams(1.0, a)
        x = np.linspace(-10, 10, 401)
        np.testing.assert_allclose(np.exp(log_pdf(params, x)), pdf(params, x), rtol=1e-12)
        np.testing.assert_allclose(log_pdf(params, -x), log_pdf(params, x), rtol=0)


def test_log_pdf_no_overflow_at_extreme_shape():
    params = PolyPlaceParams(1.0, 1e6)
    val = log_pdf(params, 3.0)
    assert math.isfinite(val)


# ---------------------------------------------------------------------------
# cdf


def test_cdf_reference_values():
    p = PolyPlaceParams(1.0, 2.0)
    assert cdf(p, 0.5) == pytest.approx(0.75, rel=1e-12)
    # quadrature oracle for the same mass
    assert 0.5 + quad_pdf_mass(p, 0.0, 0.5) == pytest.approx(0.75, abs=1e-12)
    for s in GRID_SCALES:
        for a in GRID_SHAPES:
            assert cdf(PolyPlaceParams(s, a), 0.0) == 0.5


def test_cdf_limits_and_symmetry():
    for s in (0.1, 1.0):
        for a in GRID_SHAPES:
            params = PolyPlaceParams(s, a)
            assert cdf(params, 1e9 * s) == pytest.approx(1.0, abs=1e-9)
            assert cdf(params, -1e9 * s) == pytest.approx(0.0, abs=1e-9)
            x = np.linspace(-5 * s, 5 * s, 201)
            np.testing.assert_allclose(cdf(params, -x), 1.0 - cdf(params, x), atol=1e-15)
            assert np.all(np.diff(cdf(params, x)) >= 0)


def test_cdf_matches_quadrature():
    for s, a in ((1.0, 1.5), (0.1, 3.0), (7.0, 10.0)):
        params = PolyPlaceParams(s, a)
        for x in (-2.0 * s, -0.3 * s, 0.4 * s, 3.0 * s):
            oracle = 0.5 + math.copysign(quad_pdf_mass(params, 0, abs(x)), x)
            assert cdf(params, x) == pytest.approx(oracle, abs=1e-11)


# ---------------------------------------------------------------------------
# quantile


def test_quantile_reference_values():
    p = PolyPlaceParams(1.0, 2.0)
    assert quantile(p, 0.5) == 0.0
    assert quantile(p, 0.75) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("p", (0.0, 1.0, -0.2, 1.3))
def test_quantile_domain_errors(p):
    with pytest.raises(ValueError):
        quantile(PolyPlaceParams(1.0, 2.0), p)


def test_quantile_cdf_round_trip():
    # Right tails saturate in float64 once 1-cdf(x) underflows, so the
    # positive grid stops where one-sided mass is still >= 1e-7.
    for s in (0.1, 1.0, 7.0):
        for a in GRID_SHAPES:
            params = PolyPlaceParams(s, a)
            hi = min(10.0 * s, quantile(params, 1.0 - 1e-7))
            x = np.concatenate(
                [np.linspace(-10.0 * s, -1e-3 * s, 150), np.linspace(1e-3 * s, hi, 150)]
            )
            back = quantile(params, cdf(params, x))
            np.testing.assert_allclose(back, x, rtol=1e-9)


def test_quantile_at_branch_boundary_probability():
    # Probability exactly at the branch switch goes through the bisection
    # guard and must agree with the closed form's limit.
    params = PolyPlaceParams(1.0, 2.0)
    p_break = cdf(params, params.breakpoint)
    assert quantile(params, p_break) == pytest.approx(params.breakpoint, abs=1e-12)
    assert quantile(params, 1.0 - p_break) == pytest.approx(-params.breakpoint, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    s=st.floats(0.01, 100.0),
    a=st.floats(1.05, 150.0),
    p=st.floats(1e-6, 1.0 - 1e-6),
)
def test_quantile_round_trip_property(s, a, p):
    params = PolyPlaceParams(s, a)
    x = quantile(params, p)
    assert cdf(params, x) == pytest.approx(p, abs=1e-12)


# ---------------------------------------------------------------------------
# sampling


def test_sample_deterministic_under_seed():
    params = PolyPlaceParams(1.0, 3.0)
    a = sample(params, make_rng(42), size=5)
    b = sample(params, make_rng(42), size=5)
    np.testing.assert_array_equal(a, b)
    assert isinstance(sample(params, make_rng(0)), float)


def test_sample_moments():
    params = PolyPlaceParams(1.0, 3.0)
    draws = sample(params, make_rng(42), size=10**6)
    assert abs(draws.mean()) <= 0.01
    assert draws.var() == pytest.approx(3032.0 / 2800.0, rel=0.02)


def test_sample_kolmogorov_smirnov():
    params = PolyPlaceParams(1.0, 3.0)
    draws = sample(params, make_rng(0), size=10**6)
    stat = stats.kstest(draws, lambda t: cdf(params, t)).statistic
    assert stat <= 0.01


# ---------------------------------------------------------------------------
# moments


def test_variance_reference_value():
    assert variance(PolyPlaceParams(1.0, 3.0)) == pytest.approx(3032.0 / 2800.0, rel=1e-12)


def test_variance_scale_family():
    base = variance(PolyPlaceParams(1.0, 3.0))
    for c in (0.1, 5.0):
        assert variance(PolyPlaceParams(c, 3.0)) == pytest.approx(c * c * base, rel=1e-12)


def test_variance_divergence_region():
    assert variance(PolyPlaceParams(1.0, 2.0)) == math.inf
    assert variance(PolyPlaceParams(1.0, 1.5)) == math.inf
    assert math.isfinite(variance(PolyPlaceParams(1.0, 2.0 + 1e-9)))


def test_second_moment_diverges_numerically_at_shape_two():
    # Growing truncations of the second-moment integral keep increasing
    # roughly logarithmically instead of settling.
    params = PolyPlaceParams(1.0, 2.0)
    partial = [
        integrate.quad(lambda t: t * t * pdf(params, t), 0, hi, limit=300)[0]
        for hi in (1e2, 1e4, 1e6)
    ]
    growth = np.diff(partial)
    assert np.all(growth > 0.1)
    assert growth[1] == pytest.approx(growth[0], rel=0.15)


@pytest.mark.parametrize("a", (2.5, 3.0, 5.0, 10.0, 100.0))
@pytest.mark.parametrize("s", GRID_SCALES)
def test_variance_matches_quadrature(s, a):
    params = PolyPlaceParams(s, a)
    assert variance(params) == pytest.approx(quad_second_moment(params), rel=1e-6)


def test_variance_near_divergence_cross_check():
    # Conditioning worsens like 1/(shape-2); quadrature still agrees here.
    params = PolyPlaceParams(1.0, 2.01)
    assert variance(params) == pytest.approx(quad_second_moment(params), rel=1e-9)


def test_mean_is_exactly_zero():
    assert mean(PolyPlaceParams(3.0, 1.2)) == 0.0
