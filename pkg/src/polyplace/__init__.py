"""PolyPlace: smooth-sensitivity noise with polynomial tails.

A noise distribution family for differentially private releases, the
epsilon-DP release mechanism built on it, Laplace baselines, exact smooth
sensitivity for small instances and the median, competitor standard-deviation
formulas, and a numerical privacy auditor.
"""

from .audit import (
    AuditReport,
    NeighborScenario,
    audit_privacy,
    check_convergence_to_laplace,
    check_derivative_formulas,
    check_differential_identity,
    check_variance_quadrature,
    density_ratio,
)
from .competitors import (
    ComparisonRow,
    comparison_table,
    optimize_shape,
    stddev_cauchy,
    stddev_laplace_global,
    stddev_laplace_smooth,
    stddev_polyplace,
    stddev_student_t,
)
from .dist import (
    PolyPlaceParams,
    cdf,
    log_pdf,
    mean,
    normalizer,
    pdf,
    quantile,
    sample,
    stddev,
    variance,
)
from .mechanism import (
    MechanismSpec,
    ReleaseResult,
    release_laplace_global,
    release_laplace_smooth,
    release_polyplace,
)
from .rng import make_rng
from .sensitivity import (
    AdjacencyModel,
    Dataset,
    EnumerationLimitError,
    SensitivityReport,
    local_sensitivity_bruteforce,
    median_query,
    median_smooth_sensitivity,
    smooth_sensitivity_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyModel",
    "AuditReport",
    "ComparisonRow",
    "Dataset",
    "EnumerationLimitError",
    "MechanismSpec",
    "NeighborScenario",
    "PolyPlaceParams",
    "ReleaseResult",
    "SensitivityReport",
    "audit_privacy",
    "cdf",
    "check_convergence_to_laplace",
    "check_derivative_formulas",
    "check_differential_identity",
    "check_variance_quadrature",
    "comparison_table",
    "density_ratio",
    "local_sensitivity_bruteforce",
    "log_pdf",
    "make_rng",
    "mean",
    "median_query",
    "median_smooth_sensitivity",
    "normalizer",
    "optimize_shape",
    "pdf",
    "quantile",
    "release_laplace_global",
    "release_laplace_smooth",
    "release_polyplace",
    "sample",
    "smooth_sensitivity_bruteforce",
    "stddev",
    "stddev_cauchy",
    "stddev_laplace_global",
    "stddev_laplace_smooth",
    "stddev_polyplace",
    "stddev_student_t",
    "variance",
]
