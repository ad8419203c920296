"""Paraboloid-capped regions and Gaussian surface measures.

Coordinates are ``y = (t', x'_1 .. x'_n)`` with the weighted inner product
``<u, v> = sum u_i v_i / A_i^2``.  The capped region and its boundary pieces
at height ``lam`` are

    H: sum x'^2 < t' < lam          (open volume)
    l: t' = lam, sum x'^2 < lam     (flat top)
    k: t' < lam, sum x'^2 = t'      (paraboloid side)
    I: t' = lam, sum x'^2 = lam     (corner; carries zero surface measure)
    L: t' = lam                     (full slice)

The surface measure with dilation t and translation x0 disintegrates over
the Euclidean one as  sigma(dy) = gauss(y - x0) * |Dg|_H / |grad g| dS, which
for the flat top gives the constant density
``exp(-(lam - x0_0)^2 / (2 t A_0^2)) / sqrt(2 pi t)`` against the slice
Gaussian, and for the paraboloid graph the slope-corrected density below.
Both were fixed once by requiring the divergence identity to close and are
verified against 1-D closed forms in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Region:
    """One of the capped-region pieces at truncation dimension ``n_x``."""

    kind: str  # 'H', 'l', 'k', 'I', 'L'
    n_x: int
    lam: float

    def __post_init__(self):
        if self.kind not in ("H", "l", "k", "I", "L"):
            raise ValueError("unknown region kind %r" % self.kind)
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.n_x < 0:
            raise ValueError("n_x must be nonnegative")

    @property
    def dim(self) -> int:
        return self.n_x + 1

    def contains(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        tp = pts[:, 0]
        xsq = np.sum(pts[:, 1:] ** 2, axis=1)
        if self.kind == "H":
            return (xsq < tp) & (tp < self.lam)
        if self.kind == "l":
            return (np.abs(tp - self.lam) <= tol) & (xsq < self.lam)
        if self.kind == "k":
            return (tp < self.lam) & (np.abs(xsq - tp) <= tol)
        if self.kind == "I":
            return (np.abs(tp - self.lam) <= tol) & (np.abs(xsq - self.lam) <= tol)
        return np.abs(tp - self.lam) <= tol  # 'L'


@dataclass(frozen=True)
class SurfaceChart:
    """Graph chart for the flat top (t' = level) or the paraboloid side.

    The chart base is the x'-plane; ``normal`` returns the outward (from H)
    unit normal in the weighted norm, and ``density`` the surface density
    against the base Gaussian on the x'-plane.
    """

    kind: str  # 'flat' or 'paraboloid'
    n_x: int
    level: float = 0.0  # the slice height for 'flat'

    def __post_init__(self):
        if self.kind not in ("flat", "paraboloid"):
            raise ValueError("unknown chart kind %r" % self.kind)

    def point(self, z: np.ndarray) -> np.ndarray:
        """Lift base points (m, n_x) onto the surface (m, n_x+1)."""
        z = np.atleast_2d(np.asarray(z, dtype=float))
        if self.kind == "flat":
            t_col = np.full((len(z), 1), self.level)
        else:
            t_col = np.sum(z**2, axis=1, keepdims=True)
        return np.hstack([t_col, z])

    def normal(self, avec, z: np.ndarray) -> np.ndarray:
        """Outward unit normal (weighted norm 1) at the lifted base points."""
        avec = np.asarray(avec, dtype=float)
        z = np.atleast_2d(np.asarray(z, dtype=float))
        m = len(z)
        if self.kind == "flat":
            n = np.zeros((m, self.n_x + 1))
            n[:, 0] = avec[0]
            return n
        grad = np.empty((m, self.n_x + 1))
        grad[:, 0] = -avec[0] ** 2
        grad[:, 1:] = 2.0 * z * avec[1:] ** 2
        norm = np.sqrt(avec[0] ** 2 + 4.0 * np.sum(z**2 * avec[1:] ** 2, axis=1))
        return grad / norm[:, None]

    def density(self, avec, t: float, x0, z: np.ndarray) -> np.ndarray:
        """d sigma_t(x0, .) / d p'_t(x0-slice, .)  at base points z."""
        avec = np.asarray(avec, dtype=float)
        z = np.atleast_2d(np.asarray(z, dtype=float))
        x0 = np.zeros(self.n_x + 1) if x0 is None else np.asarray(x0, dtype=float)
        if self.kind == "flat":
            height = self.level - x0[0]
            val = math.exp(-(height**2) / (2.0 * t * avec[0] ** 2)) / math.sqrt(
                2.0 * math.pi * t
            )
            return np.full(len(z), val)
        heights = np.sum(z**2, axis=1) - x0[0]
        slope = np.sqrt(1.0 + 4.0 * np.sum(z**2 * avec[1:] ** 2, axis=1) / avec[0] ** 2)
        return (
            np.exp(-(heights**2) / (2.0 * t * avec[0] ** 2))
            / math.sqrt(2.0 * math.pi * t)
            * slope
        )


def surface_density(chart: SurfaceChart, weights, t: float, x0, z) -> float:
    """Scalar convenience wrapper over :meth:`SurfaceChart.density`."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if z.shape[1] != chart.n_x:
        raise ValueError("base point has %d coordinates, chart needs %d" % (z.shape[1], chart.n_x))
    if chart.kind == "paraboloid" and np.any(np.sum(z**2, axis=1) > chart.level) and chart.level:
        raise ValueError("base point outside the chart domain")
    avec = weights.avec(chart.n_x + 1) if hasattr(weights, "avec") else np.asarray(weights)
    out = chart.density(avec, t, x0, z)
    return float(out[0]) if out.shape == (1,) else out


def gaussian_pdf(u: np.ndarray, var: float) -> np.ndarray:
    return np.exp(-(u**2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def sigma_l_total(lam: float, avec, t: float, sampler=None, count: int = 200_000):
    """sigma(l_lam): the flat-top density times the Gaussian ball mass.

    Uses MC for the ball probability when a sampler is given, else quadrature
    in dimension <= 2.
    """
    avec = np.asarray(avec, dtype=float)
    n_x = len(avec) - 1
    const = math.exp(-(lam**2) / (2.0 * t * avec[0] ** 2)) / math.sqrt(2.0 * math.pi * t)
    if sampler is not None:
        pts = sampler.sample(count)[:, 1:]
        mass = float(np.mean(np.sum(pts**2, axis=1) < lam))
        err = 3.0 * math.sqrt(mass * (1 - mass) / count)
        return const * mass, const * err
    from ._quad import quad_ball

    def f(*x):
        cols = np.array(x)
        dens = np.prod([gaussian_pdf(cols[i], t * avec[i + 1] ** 2) for i in range(n_x)], axis=0)
        return float(dens)

    val, err = quad_ball(f, lam, n_x)
    return const * val, const * err


def sigma_k_total(lam: float, avec, t: float, sampler=None, count: int = 200_000):
    """sigma(k_lam) via the slope-corrected graph density."""
    avec = np.asarray(avec, dtype=float)
    n_x = len(avec) - 1
    chart = SurfaceChart("paraboloid", n_x, level=lam)
    if sampler is not None:
        pts = sampler.sample(count)[:, 1:]
        inside = np.sum(pts**2, axis=1) < lam
        dens = chart.density(avec, t, None, pts)
        vals = np.where(inside, dens, 0.0)
        mean = float(np.mean(vals))
        err = 3.0 * float(np.std(vals, ddof=1) / math.sqrt(count))
        return mean, err
    from ._quad import quad_ball

    def f(*x):
        z = np.array([x])
        dens = float(chart.density(avec, t, None, z)[0])
        for i in range(n_x):
            dens *= float(gaussian_pdf(np.array([x[i]]), t * avec[i + 1] ** 2)[0])
        return dens

    val, err = quad_ball(f, lam, n_x)
    return val, err
