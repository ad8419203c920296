"""Iterated adaptive quadrature (QUADPACK Gauss-Kronrod) in dimensions 1-3.

Test-grade oracle wrappers: integrands take scalar coordinates and the
wrappers return (value, error-estimate).  Dimensions above 3 are refused;
that is the Monte-Carlo path's job.
"""

from __future__ import annotations

import math

from scipy import integrate

EPSABS = 1e-11
EPSREL = 1e-10


def quad_interval(f, a: float, b: float):
    val, err = integrate.quad(f, a, b, epsabs=EPSABS, epsrel=EPSREL, limit=200)
    return val, err


def quad_box(f, lo, hi):
    """Integrate f(y0[, y1[, y2]]) over a product of intervals."""
    dim = len(lo)
    if dim == 1:
        return quad_interval(f, lo[0], hi[0])
    if dim == 2:
        val, err = integrate.dblquad(
            lambda y1, y0: f(y0, y1), lo[0], hi[0], lo[1], hi[1],
            epsabs=EPSABS, epsrel=EPSREL,
        )
        return val, err
    if dim == 3:
        val, err = integrate.tplquad(
            lambda y2, y1, y0: f(y0, y1, y2),
            lo[0], hi[0], lo[1], hi[1], lo[2], hi[2],
            epsabs=EPSABS, epsrel=EPSREL,
        )
        return val, err
    raise ValueError("quadrature supports dimensions 1-3 only (got %d)" % dim)


def quad_ball(f, radius_sq: float, dim: int):
    """Integrate f(x1[, x2]) over the open ball sum x_i^2 < radius_sq."""
    r = math.sqrt(radius_sq)
    if dim == 0:
        return f(), 0.0
    if dim == 1:
        return quad_interval(f, -r, r)
    if dim == 2:
        val, err = integrate.dblquad(
            lambda x2, x1: f(x1, x2),
            -r, r,
            lambda x1: -math.sqrt(max(radius_sq - x1**2, 0.0)),
            lambda x1: math.sqrt(max(radius_sq - x1**2, 0.0)),
            epsabs=EPSABS, epsrel=EPSREL,
        )
        return val, err
    raise ValueError("ball quadrature supports dimensions 0-2 only (got %d)" % dim)


def quad_capped_region(f, lam: float, dim: int):
    """Integrate f(t', x'...) over  sum x'^2 < t' < lam  in total dim 1-3."""
    root = math.sqrt(lam)
    if dim == 1:
        return quad_interval(f, 0.0, lam)
    if dim == 2:
        val, err = integrate.dblquad(
            lambda s, x1: f(s, x1),
            -root, root,
            lambda x1: x1**2,
            lambda x1: lam,
            epsabs=EPSABS, epsrel=EPSREL,
        )
        return val, err
    if dim == 3:
        val, err = integrate.tplquad(
            lambda s, x2, x1: f(s, x1, x2),
            -root, root,
            lambda x1: -math.sqrt(max(lam - x1**2, 0.0)),
            lambda x1: math.sqrt(max(lam - x1**2, 0.0)),
            lambda x1, x2: x1**2 + x2**2,
            lambda x1, x2: lam,
            epsabs=EPSABS, epsrel=EPSREL,
        )
        return val, err
    raise ValueError("capped-region quadrature supports total dimensions 1-3 (got %d)" % dim)
