"""Local and smooth sensitivity of real-valued queries.

Smooth sensitivity of a query q at dataset D with smoothing rate gamma is the
maximum over all datasets D' of LS(D') * exp(-gamma * d(D, D')), where d is
the replace-one (Hamming) distance and LS the local sensitivity.  Two routes
are provided:

* exhaustive enumeration over a finite value grid, exact but only feasible on
  tiny instances (the test oracle), and
* a closed-form fast path for the median built on order-statistic gaps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

#: Hard cap on candidate datasets an exhaustive enumeration may visit.
MAX_BRUTE_FORCE_CANDIDATES = 10_000_000


class EnumerationLimitError(RuntimeError):
    """Raised when a brute-force instance would exceed the candidate budget."""


@dataclass(frozen=True)
class Dataset:
    """Bounded real-valued records; the bounds are part of the privacy model."""

    values: tuple[float, ...]
    lower_bound: float
    upper_bound: float

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) == 0:
            raise ValueError("dataset must be nonempty")
        if not (math.isfinite(self.lower_bound) and math.isfinite(self.upper_bound)):
            raise ValueError("dataset bounds must be finite")
        if self.lower_bound > self.upper_bound:
            raise ValueError(
                f"lower_bound {self.lower_bound} exceeds upper_bound {self.upper_bound}"
            )
        for v in self.values:
            if not (self.lower_bound <= v <= self.upper_bound):
                raise ValueError(f"value {v} outside bounds "
                                 f"[{self.lower_bound}, {self.upper_bound}]")

    def __len__(self) -> int:
        return len(self.values)

    def replace(self, index: int, value: float) -> "Dataset":
        vals = self.values[:index] + (value,) + self.values[index + 1:]
        return Dataset(vals, self.lower_bound, self.upper_bound)


@dataclass(frozen=True)
class AdjacencyModel:
    """Replace-one adjacency over an optional finite value grid.

    Datasets are adjacent when they differ in exactly one position; the
    induced distance counts differing positions (size stays fixed).  The grid
    is required by the exhaustive operations and must sit inside the dataset
    bounds.
    """

    kind: str = "replace_one"
    domain_discretization: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind != "replace_one":
            raise ValueError(f"unsupported adjacency kind: {self.kind!r}")
        if self.domain_discretization is not None:
            grid = tuple(sorted({float(v) for v in self.domain_discretization}))
            if len(grid) == 0:
                raise ValueError("domain discretization must be nonempty")
            object.__setattr__(self, "domain_discretization", grid)

    def grid_for(self, dataset: Dataset) -> tuple[float, ...]:
        if self.domain_discretization is None:
            raise ValueError(
                "exhaustive sensitivity computation requires a finite "
                "domain discretization"
            )
        for v in self.domain_discretization:
            if not (dataset.lower_bound <= v <= dataset.upper_bound):
                raise ValueError(
                    f"grid value {v} lies outside the dataset bounds "
                    f"[{dataset.lower_bound}, {dataset.upper_bound}]"
                )
        return self.domain_discretization


@dataclass(frozen=True)
class SensitivityReport:
    """Local and smooth sensitivity, plus the per-distance maxima behind them.

    per_distance_max[k] is the largest local sensitivity over datasets within
    replace-one distance k; the smooth sensitivity is the max over k of
    exp(-gamma*k) * per_distance_max[k].
    """

    local_sensitivity: float
    smooth_sensitivity: float
    gamma: float
    per_distance_max: tuple[float, ...] | None = None


Query = Callable[[Dataset], float]


def median_query(dataset: Dataset) -> float:
    """Median, taken as the lower middle order statistic for even sizes."""
    return sorted(dataset.values)[(len(dataset) - 1) // 2]


def local_sensitivity_bruteforce(
    dataset: Dataset, query: Query, adjacency: AdjacencyModel
) -> float:
    """Exact max of |q(D) - q(D')| over all replace-one neighbors on the grid."""
    grid = adjacency.grid_for(dataset)
    n = len(dataset)
    if n * len(grid) > MAX_BRUTE_FORCE_CANDIDATES:
        raise EnumerationLimitError(
            f"{n * len(grid)} neighbors exceed the "
            f"{MAX_BRUTE_FORCE_CANDIDATES} candidate budget"
        )
    base = query(dataset)
    worst = 0.0
    for i in range(n):
        for v in grid:
            if v == dataset.values[i]:
                continue
            worst = max(worst, abs(query(dataset.replace(i, v)) - base))
    return worst


def _count_candidates(n: int, m: int, max_distance: int) -> int:
    total = 0
    for k in range(min(max_distance, n) + 1):
        total += math.comb(n, k) * m**k
        if total > MAX_BRUTE_FORCE_CANDIDATES:
            break
    return total


def _envelope(per_distance_max: list[float], gamma: float) -> float:
    return max(
        math.exp(-gamma * k) * a for k, a in enumerate(per_distance_max)
    )


def smooth_sensitivity_bruteforce(
    dataset: Dataset,
    query: Query,
    adjacency: AdjacencyModel,
    gamma: float,
    max_distance: int,
    cache: dict | None = None,
) -> SensitivityReport:
    """Exact smooth sensitivity by enumerating every dataset within distance.

    max_distance >= len(dataset) makes the result exact for replace-one
    adjacency, since no dataset is farther than n replacements away.  An
    optional cache dict memoizes per-candidate local sensitivities across
    calls; reuse it only for a fixed (query, adjacency, bounds, n).
    """
    grid = adjacency.grid_for(dataset)
    if not (math.isfinite(gamma) and gamma > 0.0):
        raise ValueError(f"gamma must be positive, got {gamma}")
    if max_distance < 0:
        raise ValueError(f"max_distance must be >= 0, got {max_distance}")
    n = len(dataset)
    if _count_candidates(n, len(grid), max_distance) > MAX_BRUTE_FORCE_CANDIDATES:
        raise EnumerationLimitError(
            f"instance n={n}, |grid|={len(grid)}, max_distance={max_distance} "
            f"exceeds the {MAX_BRUTE_FORCE_CANDIDATES} candidate budget"
        )

    on_grid = all(v in grid for v in dataset.values)
    if max_distance >= n and on_grid:
        a = _per_distance_max_full_grid(dataset, query, adjacency, grid, cache)
    else:
        a = _per_distance_max_enumerated(
            dataset, query, adjacency, grid, min(max_distance, n), cache
        )
    # Cumulative max turns exact-distance maxima into within-distance maxima.
    for k in range(1, len(a)):
        a[k] = max(a[k], a[k - 1])
    return SensitivityReport(
        local_sensitivity=a[0],
        smooth_sensitivity=_envelope(a, gamma),
        gamma=gamma,
        per_distance_max=tuple(a),
    )


def _per_distance_max_enumerated(
    dataset: Dataset,
    query: Query,
    adjacency: AdjacencyModel,
    grid: tuple[float, ...],
    max_k: int,
    cache: dict | None,
) -> list[float]:
    """Exact-distance maxima of LS over candidates built position by position."""
    n = len(dataset)
    memo = cache.setdefault("ls", {}) if cache is not None else {}

    def ls_of(values: tuple[float, ...]) -> float:
        hit = memo.get(values)
        if hit is None:
            cand = Dataset(values, dataset.lower_bound, dataset.upper_bound)
            hit = local_sensitivity_bruteforce(cand, query, adjacency)
            memo[values] = hit
        return hit

    a = [0.0] * (max_k + 1)
    base = list(dataset.values)
    for k in range(max_k + 1):
        best = 0.0
        for positions in itertools.combinations(range(n), k):
            alternatives = [
                [v for v in grid if v != dataset.values[i]] for i in positions
            ]
            for assignment in itertools.product(*alternatives):
                vals = base.copy()
                for i, v in zip(positions, assignment):
                    vals[i] = v
                best = max(best, ls_of(tuple(vals)))
        a[k] = best
    return a


def _per_distance_max_full_grid(
    dataset: Dataset,
    query: Query,
    adjacency: AdjacencyModel,
    grid: tuple[float, ...],
    cache: dict | None,
) -> list[float]:
    """Vectorized variant for on-grid datasets at unbounded distance.

    Candidates within distance n are exactly the grid^n tuples; the LS table
    over them depends only on (query, grid, bounds, n) and is reused through
    the cache.
    """
    n = len(dataset)
    key = ("full_grid_table", n)
    table = cache.get(key) if cache is not None else None
    if table is None:
        tuples = list(itertools.product(grid, repeat=n))
        cand = np.array(tuples, dtype=np.float64)
        ls = np.empty(len(tuples))
        for row, values in enumerate(tuples):
            ls[row] = local_sensitivity_bruteforce(
                Dataset(values, dataset.lower_bound, dataset.upper_bound),
                query,
                adjacency,
            )
        table = (cand, ls)
        if cache is not None:
            cache[key] = table
    cand, ls = table
    dist = (cand != np.asarray(dataset.values)).sum(axis=1)
    a = [0.0] * (n + 1)
    for k in range(n + 1):
        mask = dist == k
        if mask.any():
            a[k] = float(ls[mask].max())
    return a


def median_smooth_sensitivity(dataset: Dataset, gamma: float) -> SensitivityReport:
    """Smooth sensitivity of the median under replace-one adjacency.

    After k replacements every order statistic moves by at most k positions,
    so the local sensitivity at distance k is the largest gap between order
    statistics k+1 apart around the median, with positions beyond the data
    clamped to the bounds.  Agrees exactly with the exhaustive route on
    discretized instances whose grid contains the bounds.
    """
    if not (math.isfinite(gamma) and gamma > 0.0):
        raise ValueError(f"gamma must be positive, got {gamma}")
    x = sorted(dataset.values)
    n = len(x)
    mid = (n - 1) // 2

    def at(i: int) -> float:
        if i < 0:
            return dataset.lower_bound
        if i >= n:
            return dataset.upper_bound
        return x[i]

    a = [0.0] * (n + 1)
    for k in range(n + 1):
        a[k] = max(at(mid + t) - at(mid + t - k - 1) for t in range(k + 2))
    return SensitivityReport(
        local_sensitivity=a[0],
        smooth_sensitivity=_envelope(a, gamma),
        gamma=gamma,
        per_distance_max=tuple(a),
    )
