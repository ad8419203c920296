"""Truncated analysis in countably many variables.

Three layers:

* sparse monomial series with exact-rational or floating coefficients,
  plus numeric convergence certificates (:mod:`infdim.series`),
* a layer-by-layer analytic Cauchy solver with majorant-style radius
  heuristics (:mod:`infdim.ck`),
* a weighted-Gaussian toolkit that verifies divergence and Green
  identities on paraboloid-capped regions by quadrature and Monte Carlo
  (:mod:`infdim.wiener`).

Everything is computed at an explicit truncation; no op ever claims an
infinite-dimensional statement, only a finite certificate of it.
"""

__version__ = "0.1.0"

from .errors import (
    FormalConvergenceError,
    InfdimError,
    SpaceMismatchError,
    TailBoundError,
    TermBudgetError,
    WeightSearchError,
)
from .multiindex import MultiIndex, ZERO_INDEX, count_multiindices, enumerate_multiindices
from .series import (
    ConstantRule,
    ConvergenceCertificate,
    GeometricRule,
    MonomialSeries,
    PointOracle,
    PowerRule,
    certify_convergence,
    eval_geometric_truncated,
    eval_truncated,
    geometric_series,
    homogeneous_abs_sums,
    is_majorant_of,
    majorant,
    mul,
    partial_deriv,
    reciprocal_one_minus,
    substitute,
)

__all__ = [
    "__version__",
    "InfdimError",
    "SpaceMismatchError",
    "FormalConvergenceError",
    "TailBoundError",
    "TermBudgetError",
    "WeightSearchError",
    "MultiIndex",
    "ZERO_INDEX",
    "count_multiindices",
    "enumerate_multiindices",
    "MonomialSeries",
    "PointOracle",
    "GeometricRule",
    "PowerRule",
    "ConstantRule",
    "ConvergenceCertificate",
    "mul",
    "partial_deriv",
    "substitute",
    "reciprocal_one_minus",
    "majorant",
    "is_majorant_of",
    "geometric_series",
    "eval_truncated",
    "eval_geometric_truncated",
    "certify_convergence",
    "homogeneous_abs_sums",
]
