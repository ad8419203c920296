"""Monte-Carlo projection onto orthonormalized Hermite polynomials.

The per-coordinate basis is the probabilists' family evaluated at
``x_i / (sqrt(t) A_i)`` and normalized by ``sqrt(k!)``, so products over a
multi-index are orthonormal under the sampler's Gaussian.  The reported
residual  sqrt(E f^2 - sum c_alpha^2)  is nonincreasing in the degree by
construction (one shared sample for every degree), which is the computable
face of polynomial density in the Gaussian L^2 space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite_e

from ..multiindex import MultiIndex, enumerate_multiindices
from .sampling import GaussianSampler


@dataclass
class HermiteReport:
    coefficients: dict
    residuals_by_degree: list
    f_norm2: float
    count: int
    seed: int

    def residual(self, degree: int | None = None) -> float:
        if degree is None:
            return self.residuals_by_degree[-1]
        return self.residuals_by_degree[degree]


def _herme_normalized(values: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return np.ones_like(values)
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    return hermite_e.hermeval(values, coeffs) / math.sqrt(math.factorial(k))


def hermite_projection(
    f, degree: int, s: GaussianSampler, count: int
) -> HermiteReport:
    """MC coefficients of ``f`` against the orthonormal Hermite products.

    ``f`` maps an (m, n_coords) array to m values and should be square
    integrable against the sampler's Gaussian; heavy tails show up as a
    large f-norm standard error, not as silent nonsense.
    """
    pts = s.sample(count)
    vals = np.asarray(f(pts), dtype=float)
    if vals.shape != (count,):
        raise ValueError("f must return one value per sample point")
    dim = s.n_coords
    stds = s.stds()
    z = pts / stds

    # per-coordinate 1-D values for every needed order
    per_coord = [
        [_herme_normalized(z[:, i], k) for k in range(degree + 1)] for i in range(dim)
    ]

    f_norm2 = float(np.mean(vals**2))
    coeffs: dict[MultiIndex, float] = {}
    for alpha in enumerate_multiindices(dim, degree):
        basis = np.ones(count)
        for i, e in alpha.entries:
            basis = basis * per_coord[i][e]
        coeffs[alpha] = float(np.mean(vals * basis))

    residuals = []
    acc = 0.0
    for d in range(degree + 1):
        acc += sum(c**2 for a, c in coeffs.items() if a.degree == d)
        residuals.append(math.sqrt(max(f_norm2 - acc, 0.0)))
    return HermiteReport(
        coefficients=coeffs,
        residuals_by_degree=residuals,
        f_norm2=f_norm2,
        count=count,
        seed=s.seed,
    )
