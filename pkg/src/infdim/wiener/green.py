"""Change of variables, the adjoint operator, and the Green identity.

After the substitution  t' = t + sum x_i^2  a first-order problem
``du/dt = sum a_i du/dx_i + b u`` becomes ``G1[U] = 0`` with

    G1[U] = dU/dt' - sum a~_i dU/dx'_i - b~ U,

where ``a~_i = a_i / (1 - 2 sum x'_i a_i)`` and likewise ``b~``.  Pairing G1
with the measure-weighted adjoint

    G2[W] = -dW/dt' + sum d/dx'_i(a~_i W) + [ -b~ + t'/A_0^2
            - sum x'_i a~_i / A_i^2 ] W

through the divergence theorem of :mod:`infdim.wiener.fields`, applied to
the field  W U (1, -a~_1, ..., -a~_n)  on the capped region, yields

    int_H (W G1[U] - U G2[W]) p(dy)  =  (1/A_0) int_l  W U  sigma(dy)

whenever U vanishes on the paraboloid side (the corner carries no measure).
This is the exact identity the quadrature and MC residuals verify; its
zeroth-order coefficients carry A^2 weights and the flat-top factor is
1/A_0.  The drift field with components (t'/A_0, -a~_i/A_i) reproduces the
familiar lam/A_0^2 pairing on the flat top (see
:func:`lslice_pairing_factor`), but its divergence pairs the A-weighted
directional derivative, not G1, so it cannot drive this adjoint identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..ck import CauchyProblem, LinearFirstOrderProblem, solve, x_space
from ..errors import InfdimError
from ..series import MonomialSeries, mul, partial_deriv, reciprocal_one_minus, substitute
from .sampling import GaussianSampler
from .surfaces import SurfaceChart, gaussian_pdf
from . import _quad


def tp_space(n_x: int) -> tuple:
    return ("tp",) + x_space(n_x)


def _embed_x(series: MonomialSeries, n_x: int) -> MonomialSeries:
    """Lift a series over (x1..xn) into (tp, x1..xn), as an exact polynomial.

    Truncated coefficients are used downstream as exact polynomial test
    data: the pairing identities hold for whatever polynomials are plugged
    in, so keeping the truncation caps would only prune the products.
    """
    return series.as_exact().embed(tp_space(n_x), {i: i + 1 for i in range(n_x)})


def change_of_variables(p: LinearFirstOrderProblem, cap: int):
    """Transformed coefficients  a~_i, b~  to total degree ``cap``.

    Requires time-independent coefficients; the divisor  1 - 2 sum x_i a_i
    must have unit constant term (it always does when each a_i is finite at
    the origin, since every summand carries an x_i factor).
    """
    if p.time_dependent:
        raise ValueError("the change of variables needs t-independent coefficients")
    n = p.x_vars
    space = p.a[0].space if p.a else x_space(n)
    g = MonomialSeries.zero(space)
    for i, a_i in enumerate(p.a):
        g = g + mul(MonomialSeries.variable(space, i, 2), a_i, cap + 1)
    if g.constant_term() != 0:
        raise ValueError("2 sum x_i a_i acquired a nonzero constant term")
    rec = reciprocal_one_minus(g, cap)
    a_tilde = [mul(a_i, rec, cap) for a_i in p.a]
    b_tilde = mul(p.b, rec, cap) if not p.b.is_zero() else MonomialSeries.zero(space)
    return a_tilde, b_tilde


def g1_apply(U: MonomialSeries, a_tilde, b_tilde, cap: int | None = None) -> MonomialSeries:
    """The transformed equation operator  dU/dt' - sum a~_i dU/dx'_i - b~ U."""
    n = len(a_tilde)
    out = partial_deriv(U, 0)
    for i, at in enumerate(a_tilde, start=1):
        out = out - mul(_embed_x(at, n), partial_deriv(U, i), cap)
    if not b_tilde.is_zero():
        out = out - mul(_embed_x(b_tilde, n), U, cap)
    return out


def adjoint_zeroth_order(a_tilde, b_tilde, weights, cap: int | None = None) -> MonomialSeries:
    """b' = sum d a~_i/dx'_i - b~ + t'/A_0^2 - sum x'_i a~_i / A_i^2."""
    n = len(a_tilde)
    space = tp_space(n)
    out = MonomialSeries.variable(space, 0, 1.0 / weights.A(0) ** 2)
    for i, at in enumerate(a_tilde, start=1):
        out = out + _embed_x(partial_deriv(at, i - 1), n)
        out = out - mul(
            MonomialSeries.variable(space, i, 1.0 / weights.A(i) ** 2),
            _embed_x(at, n),
            cap,
        )
    if not b_tilde.is_zero():
        out = out - _embed_x(b_tilde, n)
    return out


def g2_apply(W: MonomialSeries, a_tilde, b_tilde, weights, cap: int | None = None) -> MonomialSeries:
    """The adjoint  -dW/dt' + sum a~_i dW/dx'_i + b' W."""
    n = len(a_tilde)
    out = -partial_deriv(W, 0)
    for i, at in enumerate(a_tilde, start=1):
        out = out + mul(_embed_x(at, n), partial_deriv(W, i), cap)
    out = out + mul(adjoint_zeroth_order(a_tilde, b_tilde, weights, cap), W, cap)
    return out


def build_G2(a_tilde, b_tilde, weights, cap: int, lam: float) -> LinearFirstOrderProblem:
    """G2[W] = 0 as a forward problem in the reversed time  tau = lam - t'.

    The returned coefficients are time-dependent (the adjoint's zeroth-order
    term is linear in t'); attach slice data through
    ``CauchyProblem.from_linear(problem, phi=datum)``.
    """
    n = len(a_tilde)
    a_tilde = [at.as_exact() for at in a_tilde]
    b_tilde = b_tilde.as_exact()
    txs = ("t",) + x_space(n)
    x_map = {i: i + 1 for i in range(n)}
    a_rev = [at.embed(txs, x_map).scale(-1) for at in a_tilde]
    # -b'(t' = lam - tau, x): the t'/A_0^2 term becomes -(lam - tau)/A_0^2
    bp_x = MonomialSeries.zero(a_tilde[0].space if a_tilde else x_space(n))
    for i, at in enumerate(a_tilde, start=1):
        bp_x = bp_x + partial_deriv(at, i - 1)
        bp_x = bp_x - mul(
            MonomialSeries.variable(at.space, i - 1, 1.0 / weights.A(i) ** 2), at, cap
        )
    if not b_tilde.is_zero():
        bp_x = bp_x - b_tilde
    b_rev = (-bp_x).embed(txs, x_map)
    b_rev = b_rev - lam / weights.A(0) ** 2
    b_rev = b_rev + MonomialSeries.variable(txs, 0, 1.0 / weights.A(0) ** 2)
    phi = MonomialSeries.zero(x_space(n))
    return LinearFirstOrderProblem(a=a_rev, b=b_rev, phi=phi, time_dependent=True)


def solve_adjoint(
    a_tilde, b_tilde, weights, lam: float, datum: MonomialSeries, degree: int, cap: int
) -> MonomialSeries:
    """Solve G2[W] = 0 with W = datum on the slice t' = lam; returns W(t', x')."""
    lin = build_G2(a_tilde, b_tilde, weights, cap, lam)
    sol = solve(CauchyProblem.from_linear(lin, phi=datum), degree)
    n = len(a_tilde)
    space = tp_space(n)
    back = {0: lam - MonomialSeries.variable(space, 0)}
    for i in range(1, n + 1):
        back[i] = MonomialSeries.variable(space, i)
    return substitute(sol.series.as_exact(), back, cap=max(degree, sol.series.max_degree()))


# ----------------------------------------------------------------------
# the identity itself
# ----------------------------------------------------------------------


@dataclass
class GreenReport:
    lhs: float
    rhs: float
    residual: float
    error_bar: float
    method: str
    surface_factor: float
    seed: int | None = None
    samples: int | None = None

    def to_json_dict(self, inputs=None, n=None):
        from .sampling import RNG_ALGORITHM

        return {
            "op": "green_residual",
            "inputs": inputs or {},
            "seed": self.seed,
            "rng": RNG_ALGORITHM if self.seed is not None else None,
            "n": n,
            "samples": self.samples,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "stderr": self.error_bar,
            "pass": bool(abs(self.residual) <= max(3.0 * self.error_bar, 1e-9)),
        }


def check_vanishes_on_side(U: MonomialSeries, n_x: int, tol: float = 1e-9):
    """U restricted to  t' = sum x'^2  must be the zero series."""
    if U.is_zero():
        return
    space_x = x_space(max(n_x, 1))
    xsq = MonomialSeries.zero(space_x)
    for i in range(n_x):
        xsq = xsq + MonomialSeries(space_x, {((i, 2),): 1})
    assignment = {0: xsq}
    for i in range(1, n_x + 1):
        assignment[i] = MonomialSeries.variable(space_x, i - 1)
    restricted = substitute(U.as_exact(), assignment, cap=2 * U.max_degree())
    worst = max((abs(float(c)) for c in restricted.terms.values()), default=0.0)
    if worst > tol:
        raise InfdimError(
            "U does not vanish on the paraboloid side (largest coefficient %g); "
            "the flat-top identity needs the side term to drop" % worst
        )


def green_residual(
    W: MonomialSeries,
    U: MonomialSeries,
    a_tilde,
    b_tilde,
    weights,
    lam: float,
    n_x: int,
    method: str = "quadrature",
    budget: int = 200_000,
    seed: int = 0,
    t: float = 1.0,
) -> GreenReport:
    """Volume pairing against the flat-top surface term.

    lhs = int_H (W G1[U] - U G2[W]) dp,  rhs = (1/A_0) int_l W U dsigma.
    Works for any polynomial W once U vanishes on the paraboloid side.
    """
    check_vanishes_on_side(U, n_x)
    W = W.as_exact()
    U = U.as_exact()
    avec = weights.avec(n_x + 1)
    integrand = mul(W, g1_apply(U, a_tilde, b_tilde), None) - mul(
        U, g2_apply(W, a_tilde, b_tilde, weights), None
    )
    slice_vals = _slice_series(mul(W, U, None), lam, n_x)
    factor = 1.0 / weights.A(0)

    if method == "quadrature":
        lhs, lhs_err = _volume_series_quad(integrand, lam, n_x, avec, t)
        surf, surf_err = _flat_surface_quad(slice_vals, lam, n_x, avec, t)
        rhs = factor * surf
        return GreenReport(
            lhs=lhs,
            rhs=rhs,
            residual=lhs - rhs,
            error_bar=lhs_err + abs(factor) * surf_err,
            method="quadrature",
            surface_factor=factor,
        )
    if method != "mc":
        raise ValueError("method must be 'quadrature' or 'mc'")
    lhs, lhs_se = _volume_series_mc(integrand, lam, n_x, avec, t, budget, seed)
    surf, surf_se = _flat_surface_mc(slice_vals, lam, n_x, avec, t, budget, seed + 13)
    rhs = factor * surf
    return GreenReport(
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        error_bar=math.sqrt(lhs_se**2 + (factor * surf_se) ** 2),
        method="mc",
        surface_factor=factor,
        seed=seed,
        samples=budget,
    )


def _slice_series(WU: MonomialSeries, lam: float, n_x: int) -> MonomialSeries:
    """Restrict a (tp, x) series to the slice t' = lam (series over x)."""
    space_x = x_space(max(n_x, 1))
    assignment = {0: float(lam)}
    for i in range(1, n_x + 1):
        assignment[i] = MonomialSeries.variable(space_x, i - 1)
    return substitute(WU.as_exact(), assignment, cap=WU.max_degree())


def _volume_series_quad(series: MonomialSeries, lam, n_x, avec, t):
    if series.is_zero():
        return 0.0, 0.0

    def f(*coords):
        val = float(series.eval_columns(list(coords)))
        for i, c in enumerate(coords):
            val *= float(gaussian_pdf(np.asarray(c), t * avec[i] ** 2))
        return val

    return _quad.quad_capped_region(f, lam, n_x + 1)


def _flat_surface_quad(slice_series: MonomialSeries, lam, n_x, avec, t):
    """int over the flat top of the slice values against sigma."""
    dens = math.exp(-(lam**2) / (2 * t * avec[0] ** 2)) / math.sqrt(2 * math.pi * t)
    if slice_series.is_zero():
        return 0.0, 0.0
    if n_x == 0:
        return float(slice_series.eval_columns([])) * dens, 0.0

    def f(*xs):
        val = float(slice_series.eval_columns(list(xs)))
        for i, c in enumerate(xs):
            val *= float(gaussian_pdf(np.asarray(c), t * avec[i + 1] ** 2))
        return val * dens

    return _quad.quad_ball(f, lam, n_x)


def _volume_series_mc(series, lam, n_x, avec, t, budget, seed):
    if series.is_zero():
        return 0.0, 0.0
    sampler = GaussianSampler(avec=avec, t=t, seed=seed)
    pts = sampler.sample(budget)
    tp = pts[:, 0]
    xsq = np.sum(pts[:, 1:] ** 2, axis=1)
    inside = (xsq < tp) & (tp < lam)
    cols = [pts[:, i] for i in range(n_x + 1)]
    vals = np.where(inside, series.eval_columns(cols) * np.ones(budget), 0.0)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(budget))


def _flat_surface_mc(slice_series, lam, n_x, avec, t, budget, seed):
    dens = math.exp(-(lam**2) / (2 * t * avec[0] ** 2)) / math.sqrt(2 * math.pi * t)
    if slice_series.is_zero():
        return 0.0, 0.0
    if n_x == 0:
        return float(slice_series.eval_columns([])) * dens, 0.0
    sampler = GaussianSampler(avec=avec[1:], t=t, seed=seed)
    xs = sampler.sample(budget)
    inside = np.sum(xs**2, axis=1) < lam
    cols = [xs[:, i] for i in range(n_x)]
    vals = np.where(inside, slice_series.eval_columns(cols) * np.ones(budget), 0.0) * dens
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(budget))


def lslice_pairing_factor(weights, lam: float, n_x: int = 1) -> float:
    """Constant  <F(y), n(y)> / (value of scalar part)  on the flat top for the
    drift field (t'/A_0, -a~_i/A_i): equals lam/A_0^2 identically there."""
    avec = weights.avec(n_x + 1)
    chart = SurfaceChart("flat", n_x, level=lam)
    z = np.zeros((1, n_x))
    n = chart.normal(avec, z)[0]
    f0 = lam / avec[0]  # time component of the drift field on the slice
    return float(f0 * n[0] / avec[0] ** 2)


# ----------------------------------------------------------------------
# the moment demonstration
# ----------------------------------------------------------------------


@dataclass
class MomentEntry:
    exponents: tuple
    moment_direct: float
    moment_green: float
    green_lhs: float
    residual: float
    error_bar: float


@dataclass
class HolmgrenReport:
    lam: float
    n_x: int
    solver_degree: int
    phi_zero: bool
    entries: list

    def max_abs_moment(self) -> float:
        return max((abs(e.moment_direct) for e in self.entries), default=0.0)


def holmgren_moment_demo(
    problem: LinearFirstOrderProblem,
    lam: float,
    n_x: int,
    degrees,
    solver_degree: int,
    weights=None,
    cap: int = 10,
    method: str = "quadrature",
    budget: int = 200_000,
    seed: int = 0,
    u_tilde: MonomialSeries | None = None,
) -> HolmgrenReport:
    """Adjoint solves plus the Green identity, one flat-top moment per entry.

    With zero initial data the solution series is identically zero and every
    moment vanishes to solver precision; the demonstration's content is that
    the adjoint solve and both sides of the identity close numerically.  A
    caller-supplied scalar field (vanishing on the paraboloid side) exercises
    the same pipeline with nonzero moments.
    """
    from .weights import build_weights

    if weights is None:
        weights = build_weights(problem.a, b=problem.b, cap=cap)
    a_tilde, b_tilde = change_of_variables(problem, cap)
    avec = weights.avec(n_x + 1)

    if u_tilde is not None:
        U = u_tilde
        phi_zero = False
    elif problem.phi.is_zero():
        U = MonomialSeries.zero(tp_space(n_x))
        phi_zero = True
    else:
        sol = solve(CauchyProblem.from_linear(problem), solver_degree)
        space = tp_space(n_x)
        xsq = MonomialSeries.zero(space)
        for i in range(1, n_x + 1):
            xsq = xsq + MonomialSeries(space, {((i, 2),): 1})
        back = {0: MonomialSeries.variable(space, 0) - xsq}
        for i in range(1, n_x + 1):
            back[i] = MonomialSeries.variable(space, i)
        U = substitute(sol.series.as_exact(), back, cap=2 * solver_degree)
        phi_zero = False

    entries = []
    for exps in degrees:
        exps = tuple(int(e) for e in exps)
        datum = MonomialSeries(
            x_space(n_x), {tuple((i, e) for i, e in enumerate(exps) if e): 1.0}
        )
        W = solve_adjoint(a_tilde, b_tilde, weights, lam, datum, solver_degree, cap)
        rep = green_residual(
            W, U, a_tilde, b_tilde, weights, lam, n_x,
            method=method, budget=budget, seed=seed,
        )
        moment_green = weights.A(0) * rep.lhs
        # direct flat-top moment of U against the monomial datum
        direct_series = _slice_series(
            mul(datum.embed(tp_space(n_x), {i: i + 1 for i in range(n_x)}), U, None),
            lam,
            n_x,
        )
        if method == "quadrature":
            direct, direct_err = _flat_surface_quad(direct_series, lam, n_x, avec, 1.0)
        else:
            direct, direct_err = _flat_surface_mc(
                direct_series, lam, n_x, avec, 1.0, budget, seed + 29
            )
        entries.append(
            MomentEntry(
                exponents=exps,
                moment_direct=direct,
                moment_green=moment_green,
                green_lhs=rep.lhs,
                residual=moment_green - direct,
                error_bar=rep.error_bar + direct_err,
            )
        )
    return HolmgrenReport(
        lam=lam, n_x=n_x, solver_degree=solver_degree, phi_zero=phi_zero, entries=entries
    )
