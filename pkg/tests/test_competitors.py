"""Competitor standard-deviation formulas and the shape optimizer."""

import math

import numpy as np
import pytest

from polyplace.competitors import (
    ComparisonRow,
    comparison_row,
    comparison_table,
    default_gamma_grid,
    optimize_shape,
    stddev_cauchy,
    stddev_laplace_global,
    stddev_laplace_smooth,
    stddev_polyplace,
    stddev_student_t,
)


# ---------------------------------------------------------------------------
# individual formulas


def test_polyplace_stddev_values():
    assert stddev_polyplace(1.0 / 3.0, 1.0) == pytest.approx(3.122, abs=1e-3)
    assert stddev_polyplace(0.6, 1.0) == math.inf  # shape 5/3 <= 2
    assert stddev_polyplace(1e-3, 1.0) == pytest.approx(math.sqrt(2.0), rel=0.01)


def test_polyplace_stddev_rejects_gamma_at_or_above_epsilon():
    with pytest.raises(ValueError):
        stddev_polyplace(1.0, 1.0)
    with pytest.raises(ValueError):
        stddev_polyplace(-0.1, 1.0)


def test_cauchy_stddev_values():
    # cos(pi/2) = 0 makes the radical 1.
    assert stddev_cauchy(4.0, 0.1, 1.0) == pytest.approx(10.0, rel=1e-12)
    assert stddev_cauchy(3.0, 0.1, 1.0) == math.inf
    assert stddev_cauchy(2.0, 0.01, 1.0) == math.inf
    assert stddev_cauchy(4.0, 0.2, 1.0) == math.inf  # gamma at the validity edge


def test_student_t_stddev_values():
    assert stddev_student_t(3.0, 0.1, 1.0) == pytest.approx(10.0 / 3.0, rel=1e-12)
    assert stddev_student_t(2.0, 0.1, 1.0) == math.inf
    assert stddev_student_t(5.0, 0.2, 1.0) == math.inf  # gamma > eps/(d+1)


def test_student_t_formula_grid_consistency():
    for d in (2.5, 3.0, 8.0, 40.0):
        for gamma in (1e-4, 1e-2):
            val = stddev_student_t(d, gamma, 1.0)
            direct = math.sqrt(d / (d - 2.0)) * (d + 1.0) / (
                2.0 * math.sqrt(d) * (1.0 - gamma * (d + 1.0))
            )
            assert val == pytest.approx(direct, rel=1e-14)


def test_laplace_smooth_values():
    assert stddev_laplace_smooth(0.01, 1.0, 1e-5) == pytest.approx(1.6108, abs=1e-4)
    assert stddev_laplace_smooth(1e-12, 1.0, 1e-5) == pytest.approx(
        math.sqrt(2.0), rel=1e-9
    )
    assert stddev_laplace_smooth(0.09, 1.0, 1e-5) is None
    with pytest.raises(ValueError):
        stddev_laplace_smooth(0.01, 1.0, 0.0)


def test_laplace_global_constant():
    assert stddev_laplace_global(2.0) == pytest.approx(math.sqrt(2.0) / 2.0)


def test_all_formulas_increasing_in_gamma():
    # Each formula on a grid inside its own validity window.
    cases = (
        (lambda g: stddev_polyplace(g, 1.0), np.linspace(0.01, 0.45, 30)),
        (lambda g: stddev_student_t(3.5, g, 1.0), np.linspace(0.01, 0.21, 30)),
        (lambda g: stddev_cauchy(4.5, g, 1.0), np.linspace(0.01, 0.17, 30)),
        (lambda g: stddev_laplace_smooth(g, 1.0, 1e-5), np.linspace(0.005, 0.08, 30)),
    )
    for f, gammas in cases:
        vals = [f(float(g)) for g in gammas]
        assert all(a < b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# shape optimization


def test_optimizer_matches_grid_scan():
    for family, lo in (("student_t", 2.0), ("cauchy", 3.0)):
        formula = stddev_student_t if family == "student_t" else stddev_cauchy
        for gamma in (0.01, 0.1, 0.2):
            hi = 1.0 / gamma - 1.0
            if hi <= lo + 1e-5:
                continue
            shape, sd = optimize_shape(family, gamma, 1.0)
            scan = min(
                formula(float(c), gamma, 1.0)
                for c in np.geomspace(lo + 1e-6, hi - 1e-6, 10_000)
            )
            assert sd == pytest.approx(scan, rel=1e-4)
            assert lo < shape < hi


def test_optimizer_objective_unimodal_on_scan():
    # Golden-section assumes a single interior minimum; verify on a scan.
    for family, formula, lo in (
        ("student_t", stddev_student_t, 2.0),
        ("cauchy", stddev_cauchy, 3.0),
    ):
        gamma = 0.05
        hi = 1.0 / gamma - 1.0
        vals = [formula(float(c), gamma, 1.0) for c in np.geomspace(lo + 1e-6, hi - 1e-6, 2000)]
        drops = np.diff(vals) < 0
        # Decreasing run, then increasing run: exactly one sign change.
        switches = int(np.sum(drops[:-1] != drops[1:]))
        assert switches == 1


def test_optimizer_never_beaten_by_spot_shapes():
    gamma = 0.08
    _, sd = optimize_shape("student_t", gamma, 1.0)
    for d in (2.2, 3.0, 4.0, 7.0, 10.0):
        assert sd <= stddev_student_t(d, gamma, 1.0) * (1.0 + 1e-9)


def test_optimizer_infeasible_gamma():
    assert optimize_shape("cauchy", 0.3, 1.0) == (None, math.inf)
    assert optimize_shape("student_t", 0.4, 1.0) == (None, math.inf)
    with pytest.raises(ValueError):
        optimize_shape("gaussian", 0.1, 1.0)
    with pytest.raises(ValueError):
        optimize_shape("cauchy", 1.5, 1.0)


def test_student_t_feasible_window_at_gamma_point_two():
    shape, sd = optimize_shape("student_t", 0.2, 1.0)
    assert 2.0 < shape < 4.0
    assert math.isfinite(sd)


# ---------------------------------------------------------------------------
# comparison rows


def test_comparison_row_fields():
    row = comparison_row(0.1, 1.0, 1e-5)
    assert isinstance(row, ComparisonRow)
    assert row.stddev_polyplace < row.stddev_student_t_opt
    assert row.stddev_polyplace < row.stddev_cauchy_opt
    assert row.stddev_laplace_global == pytest.approx(math.sqrt(2.0))


def test_dominance_over_gamma_grid():
    for gamma in np.geomspace(0.005, 0.33, 50):
        row = comparison_row(float(gamma), 1.0, 1e-5)
        if math.isfinite(row.stddev_student_t_opt):
            assert row.stddev_polyplace < row.stddev_student_t_opt
        if math.isfinite(row.stddev_cauchy_opt):
            assert row.stddev_polyplace < row.stddev_cauchy_opt


def test_domain_advantage_windows():
    # Finite-variance windows: polyplace up to eps/2; competitors need
    # gamma < eps/3 (t) and eps/4 (cauchy) for any valid shape.
    assert math.isfinite(stddev_polyplace(0.45, 1.0))
    assert stddev_polyplace(0.55, 1.0) == math.inf
    assert optimize_shape("student_t", 1.0 / 3.0 + 0.01, 1.0)[1] == math.inf
    assert math.isfinite(optimize_shape("student_t", 0.3, 1.0)[1])
    assert optimize_shape("cauchy", 0.26, 1.0)[1] == math.inf
    assert math.isfinite(optimize_shape("cauchy", 0.24, 1.0)[1])


def test_comparison_table_default_grid():
    rows = comparison_table(1.0, 1e-5)
    assert len(rows) == 50
    grid = default_gamma_grid(1.0)
    assert rows[0].gamma == pytest.approx(grid[0])
    assert rows[-1].gamma == pytest.approx(0.99)
    # Large gamma rows: mechanism exists, second moment does not.
    assert rows[-1].stddev_polyplace == math.inf
    assert rows[-1].stddev_laplace_smooth is None
