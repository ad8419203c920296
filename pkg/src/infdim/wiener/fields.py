"""Vector fields on the weighted sequence space and the divergence check.

Fields are given by their B-coordinate components.  For such a field G the
divergence theorem against the product Gaussian with coordinate variances
``t A_i^2`` reads

    int_V [ sum_i dG_i/dy_i - sum_i G_i (y_i - x0_i) / (t A_i^2) ] p_t(x0, dy)
        = int_dV  <G, n>  sigma_t(x0, dy),

with ``<G, n> = sum_i G_i n_i / A_i^2`` and ``n`` the outward normal of unit
weighted norm.  The divergence is the trace of the weighted-space derivative;
expressed through B-components it is the plain coordinate divergence (writing
the field through covector components F_i = G_i / A_i^2 turns it into
sum A_i^2 dF_i/dy_i, the same number).  The 1-D closed form
``int_a^b [F' - F y] gauss = [F gauss]_a^b`` pins this bookkeeping exactly and
is enforced in the tests; the op below treats it as the single source of
truth for every region it supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..series import MonomialSeries, partial_deriv
from .sampling import Box, GaussianSampler
from .surfaces import Region, SurfaceChart, gaussian_pdf
from . import _quad


@dataclass
class SeriesField:
    """A polynomial field: one coefficient series per B-coordinate component."""

    components: list

    def __post_init__(self):
        dims = {len(c.space) for c in self.components}
        if len(dims) != 1:
            raise ValueError("all components must share one coordinate space")

    @property
    def dim(self) -> int:
        return len(self.components)

    def eval(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        cols = [pts[:, i] for i in range(pts.shape[1])]
        return np.stack([c.eval_columns(cols) * np.ones(len(pts)) for c in self.components], axis=1)

    def divergence_series(self) -> MonomialSeries:
        out = MonomialSeries.zero(self.components[0].space)
        for i, c in enumerate(self.components):
            out = out + partial_deriv(c, i)
        return out


@dataclass
class VectorFieldF:
    """The drift field with components  (t'/A_0, -a~_1/A_1, ..., -a~_n/A_n).

    ``a_tilde`` are the transformed first-order coefficients over (x1..xn);
    ``b_tilde`` rides along for the Green machinery but does not enter the
    field itself.
    """

    weights: object
    a_tilde: list
    b_tilde: MonomialSeries | None = None

    @property
    def n_x(self) -> int:
        return len(self.a_tilde)

    def as_series_field(self) -> SeriesField:
        n = self.n_x
        space = ("tp",) + tuple("x%d" % i for i in range(1, n + 1))
        comps = [MonomialSeries.variable(space, 0, 1.0 / self.weights.A(0))]
        var_map = {i: i + 1 for i in range(n)}
        for i, at in enumerate(self.a_tilde, start=1):
            comps.append(at.embed(space, var_map).scale(-1.0 / self.weights.A(i)))
        return SeriesField(comps)


@dataclass
class DivergenceReport:
    lhs: float
    rhs: float
    residual: float
    error_bar: float
    method: str
    seed: int | None
    samples: int | None
    boundary_terms: dict

    def to_json_dict(self, op="divergence_residual", inputs=None, n=None):
        from .sampling import RNG_ALGORITHM

        return {
            "op": op,
            "inputs": inputs or {},
            "seed": self.seed,
            "rng": RNG_ALGORITHM if self.seed is not None else None,
            "n": n,
            "samples": self.samples,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "stderr": self.error_bar,
            "pass": bool(abs(self.residual) <= max(3.0 * self.error_bar, 1e-12)),
        }


def _volume_integrand(field: SeriesField, avec, t, x0):
    div = field.divergence_series()

    def f(pts):
        pts = np.atleast_2d(pts)
        cols = [pts[:, i] for i in range(pts.shape[1])]
        val = div.eval_columns(cols) * np.ones(len(pts))
        comps = field.eval(pts)
        val = val - np.sum(comps * (pts - x0) / (t * avec**2), axis=1)
        return val

    return f


def divergence_residual(
    field,
    region,
    avec=None,
    weights=None,
    t: float = 1.0,
    x0=None,
    method: str = "quadrature",
    budget: int = 10**6,
    seed: int = 0,
) -> DivergenceReport:
    """Both sides of the divergence identity on a box or capped region.

    ``field`` is a :class:`SeriesField` or :class:`VectorFieldF`; ``region``
    a :class:`~infdim.wiener.sampling.Box` or a kind-'H'
    :class:`~infdim.wiener.surfaces.Region`.  Quadrature handles total
    dimension <= 3; the MC path spends ``budget`` samples per integral.
    """
    if isinstance(field, VectorFieldF):
        field = field.as_series_field()
    dim = field.dim
    if isinstance(region, Region):
        if region.kind != "H":
            raise ValueError("volume region must be the capped region (kind 'H')")
        if region.dim != dim:
            raise ValueError("field dimension %d != region dimension %d" % (dim, region.dim))
    elif isinstance(region, Box):
        if region.dim != dim:
            raise ValueError("field dimension %d != box dimension %d" % (dim, region.dim))
    else:
        raise TypeError("region must be a Box or a kind-'H' Region")
    if avec is None:
        if weights is None:
            raise ValueError("provide avec or weights")
        avec = weights.avec(dim)
    avec = np.asarray(avec, dtype=float)
    x0 = np.zeros(dim) if x0 is None else np.asarray(x0, dtype=float)
    vol_f = _volume_integrand(field, avec, t, x0)

    if method == "quadrature":
        lhs, lhs_err = _volume_quad(vol_f, region, avec, t, x0, dim)
        rhs, rhs_err, parts = _boundary_quad(field, region, avec, t, x0, dim)
        return DivergenceReport(
            lhs=lhs,
            rhs=rhs,
            residual=lhs - rhs,
            error_bar=lhs_err + rhs_err,
            method="quadrature",
            seed=None,
            samples=None,
            boundary_terms=parts,
        )
    if method != "mc":
        raise ValueError("method must be 'quadrature' or 'mc'")
    lhs, lhs_se = _volume_mc(vol_f, region, avec, t, x0, budget, seed)
    rhs, rhs_se, parts = _boundary_mc(field, region, avec, t, x0, budget, seed)
    return DivergenceReport(
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        error_bar=math.sqrt(lhs_se**2 + rhs_se**2),
        method="mc",
        seed=seed,
        samples=budget,
        boundary_terms=parts,
    )


# ---------------------------------------------------------------- volume


def _gauss_weight(coords, avec, t, x0):
    out = 1.0
    for i, c in enumerate(coords):
        out *= float(gaussian_pdf(np.asarray(c - x0[i]), t * avec[i] ** 2))
    return out


def _volume_quad(vol_f, region, avec, t, x0, dim):
    def f(*coords):
        pt = np.array([coords])
        return float(vol_f(pt)[0]) * _gauss_weight(coords, avec, t, x0)

    if isinstance(region, Box):
        return _quad.quad_box(f, region.lo, region.hi)
    return _quad.quad_capped_region(f, region.lam, dim)


def _volume_mc(vol_f, region, avec, t, x0, budget, seed):
    sampler = GaussianSampler(avec=avec, t=t, seed=seed)
    pts = sampler.sample(budget) + x0
    inside = region.contains(pts)
    vals = np.where(inside, vol_f(pts), 0.0)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(budget))


# ---------------------------------------------------------------- boundary


def _box_faces(region: Box):
    for j in range(region.dim):
        yield j, region.lo[j], -1.0
        yield j, region.hi[j], +1.0


def _boundary_quad(field, region, avec, t, x0, dim):
    parts = {}
    total = 0.0
    total_err = 0.0
    if isinstance(region, Box):
        for j, c, sign in _box_faces(region):
            rest = [i for i in range(dim) if i != j]
            comp = field.components[j]

            def f(*coords, _j=j, _c=c, _rest=rest, _comp=comp):
                full = [0.0] * dim
                full[_j] = _c
                for i, v in zip(_rest, coords):
                    full[i] = v
                g = float(comp.eval_columns(full))
                w = _gauss_weight([full[i] for i in _rest], avec[_rest], t, x0[_rest]) if _rest else 1.0
                return g * w

            face_gauss = float(gaussian_pdf(np.asarray(c - x0[j]), t * avec[j] ** 2))
            if rest:
                val, err = _quad.quad_box(
                    f, [region.lo[i] for i in rest], [region.hi[i] for i in rest]
                )
            else:
                val, err = f(), 0.0
            contrib = sign * val * face_gauss
            parts["face_%d_%s" % (j, "hi" if sign > 0 else "lo")] = contrib
            total += contrib
            total_err += err
        return total, total_err, parts

    # capped region: flat top plus paraboloid side (corner has measure zero)
    lam = region.lam
    n_x = dim - 1
    top = SurfaceChart("flat", n_x, level=lam)
    side = SurfaceChart("paraboloid", n_x, level=lam)

    def top_f(*xs):
        z = np.array([xs]) if xs else np.zeros((1, 0))
        y = top.point(z)
        g = field.eval(y)[0]
        n = top.normal(avec, z)[0]
        pairing = float(np.sum(g * n / avec**2))
        dens = float(top.density(avec, t, x0, z)[0])
        w = _gauss_weight(list(xs), avec[1:], t, x0[1:]) if xs else 1.0
        return pairing * dens * w

    def side_f(*xs):
        z = np.array([xs]) if xs else np.zeros((1, 0))
        y = side.point(z)
        g = field.eval(y)[0]
        n = side.normal(avec, z)[0]
        pairing = float(np.sum(g * n / avec**2))
        dens = float(side.density(avec, t, x0, z)[0])
        w = _gauss_weight(list(xs), avec[1:], t, x0[1:]) if xs else 1.0
        return pairing * dens * w

    if n_x == 0:
        # boundary degenerates to the two points t' = 0 and t' = lam
        top_val, top_err = top_f(), 0.0
        side_val, side_err = side_f(), 0.0
    else:
        top_val, top_err = _quad.quad_ball(top_f, lam, n_x)
        side_val, side_err = _quad.quad_ball(side_f, lam, n_x)
    parts = {"l_top": top_val, "k_side": side_val}
    return top_val + side_val, top_err + side_err, parts


def _boundary_mc(field, region, avec, t, x0, budget, seed):
    parts = {}
    if isinstance(region, Box):
        total = 0.0
        var_sum = 0.0
        for idx, (j, c, sign) in enumerate(_box_faces(region)):
            rest = [i for i in range(region.dim) if i != j]
            sampler = GaussianSampler(avec=avec[rest], t=t, seed=seed + 100 + idx) if rest else None
            count = budget
            if rest:
                xs = sampler.sample(count) + x0[rest]
                inside = np.ones(count, dtype=bool)
                for col, i in enumerate(rest):
                    inside &= (xs[:, col] > region.lo[i]) & (xs[:, col] < region.hi[i])
                full = np.zeros((count, region.dim))
                full[:, j] = c
                for col, i in enumerate(rest):
                    full[:, i] = xs[:, col]
                vals = np.where(inside, field.eval(full)[:, j], 0.0)
                mean = float(np.mean(vals))
                se = float(np.std(vals, ddof=1) / math.sqrt(count))
            else:
                mean = float(field.eval(np.array([[c]]))[0][0])
                se = 0.0
            face_gauss = float(gaussian_pdf(np.asarray(c - x0[j]), t * avec[j] ** 2))
            contrib = sign * mean * face_gauss
            parts["face_%d_%s" % (j, "hi" if sign > 0 else "lo")] = contrib
            total += contrib
            var_sum += (face_gauss * se) ** 2
        return total, math.sqrt(var_sum), parts

    lam = region.lam
    n_x = region.dim - 1
    top = SurfaceChart("flat", n_x, level=lam)
    side = SurfaceChart("paraboloid", n_x, level=lam)
    sampler = GaussianSampler(avec=avec[1:], t=t, seed=seed + 7) if n_x else None

    def face_mean(chart):
        if n_x == 0:
            z = np.zeros((1, 0))
            y = chart.point(z)
            g = field.eval(y)[0]
            n = chart.normal(avec, z)[0]
            dens = float(chart.density(avec, t, x0, z)[0])
            return float(np.sum(g * n / avec**2)) * dens, 0.0
        z = sampler.sample(budget) + x0[1:]
        inside = np.sum(z**2, axis=1) < lam
        y = chart.point(z)
        g = field.eval(y)
        n = chart.normal(avec, z)
        pairing = np.sum(g * n / avec**2, axis=1)
        dens = chart.density(avec, t, x0, z)
        vals = np.where(inside, pairing * dens, 0.0)
        return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(budget))

    top_val, top_se = face_mean(top)
    side_val, side_se = face_mean(side)
    parts = {"l_top": top_val, "k_side": side_val}
    return top_val + side_val, math.sqrt(top_se**2 + side_se**2), parts


# ---------------------------------------------------------------- bounds


@dataclass
class FieldBoundsReport:
    bstar_sup: float
    h_sup: float
    trace_norm_integral: float
    trace_norm_stderr: float
    probes: int
    seed: int


def check_F_bounds(
    F: VectorFieldF, region: Region, weights, probe_count: int = 20_000, seed: int = 0
) -> FieldBoundsReport:
    """Sampled suprema of the dual/weighted norms of F over the region closure,
    plus an MC estimate of the trace-norm integral of its derivative."""
    if region.kind != "H":
        raise ValueError("bounds are probed over the capped volume region")
    n_x = region.n_x
    dim = n_x + 1
    avec = weights.avec(dim)
    rng = np.random.default_rng(seed)

    # uniform probes over the closure: t' ~ U(0, lam], x uniform in its ball
    tp = rng.uniform(0.0, region.lam, probe_count)
    if n_x:
        raw = rng.standard_normal((probe_count, n_x))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        radii = np.sqrt(tp) * rng.uniform(0.0, 1.0, probe_count) ** (1.0 / n_x)
        xs = raw * radii[:, None]
    else:
        xs = np.zeros((probe_count, 0))
    cols = [xs[:, i] for i in range(n_x)]
    a_vals = [np.asarray(at.eval_columns(cols)) * np.ones(probe_count) for at in F.a_tilde]

    bstar = (tp / avec[0] ** 3) ** 2
    hnorm = (tp / avec[0] ** 2) ** 2
    for i, av in enumerate(a_vals, start=1):
        bstar = bstar + (av / avec[i] ** 3) ** 2
        hnorm = hnorm + (av / avec[i] ** 2) ** 2

    # trace norm of DF over the Gaussian, restricted to the region
    sampler = GaussianSampler(avec=avec, t=1.0, seed=seed + 1)
    pts = sampler.sample(probe_count)
    inside = Region("H", n_x, region.lam).contains(pts)
    grad_series = [[partial_deriv(at, j) for j in range(n_x)] for at in F.a_tilde]
    cols_g = [pts[:, 1 + i] for i in range(n_x)]
    mats = np.zeros((probe_count, dim, dim))
    mats[:, 0, 0] = 1.0 / avec[0]
    for i in range(1, dim):
        for j in range(1, dim):
            dval = np.asarray(grad_series[i - 1][j - 1].eval_columns(cols_g)) * np.ones(probe_count)
            mats[:, i, j] = -avec[j] * dval / avec[i] ** 2
    svals = np.linalg.svd(mats, compute_uv=False)
    trace_norms = np.where(inside, np.sum(svals, axis=1), 0.0)
    return FieldBoundsReport(
        bstar_sup=float(np.max(bstar)),
        h_sup=float(np.max(hnorm)),
        trace_norm_integral=float(np.mean(trace_norms)),
        trace_norm_stderr=float(np.std(trace_norms, ddof=1) / math.sqrt(probe_count)),
        probes=probe_count,
        seed=seed,
    )
