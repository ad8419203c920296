"""Layer-by-layer power-series solving of normal-form Cauchy problems.

The problem  d^m/dt^m u = f(t, x, u, {partial^beta_x partial^j_t u})  with
initial layers phi_0 .. phi_{m-1} is solved by extracting one t-layer of the
right-hand side at a time; each new layer depends only on layers already
known, so the recursion is a pure function of the input.  All spatial series
are truncated so the total (t, x)-degree stays within the requested degree,
and the computed truncation satisfies the equation exactly up to degree
``N - m`` (the residual oracle checks this).

``f`` is stored recentered at the derived initial jet: the ``u`` variable
stands for ``u - u(0,0)`` and each ``w[beta;j]`` for the corresponding
derivative minus its value at the origin.  Use :meth:`CauchyProblem.from_rhs`
to write the right-hand side in plain variables and recenter automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificationError, TermBudgetError
from .multiindex import MultiIndex, ZERO_INDEX, enumerate_multiindices, iter_graded
from .series import (
    ConvergenceCertificate,
    MonomialSeries,
    PointOracle,
    certify_convergence,
    majorant,
    mul,
    partial_deriv,
    substitute,
)


def x_space(x_vars: int) -> tuple:
    return tuple("x%d" % (i + 1) for i in range(x_vars))


def tx_space(x_vars: int) -> tuple:
    return ("t",) + x_space(x_vars)


def w_name(beta: MultiIndex, j: int, x_vars: int) -> str:
    dense = ",".join(str(e) for e in beta.dense(x_vars)) if x_vars else ""
    return "w[%s;%d]" % (dense, j)


def build_w_index(m: int, x_vars: int) -> list:
    """All derivative slots (beta, j) with 1 <= |beta|+j <= m and j < m."""
    out = []
    for j in range(m):
        top = m - j
        for beta in enumerate_multiindices(x_vars, top) if x_vars else [ZERO_INDEX]:
            if 1 <= beta.degree + j <= m:
                out.append((beta, j))
    out.sort(key=lambda bj: (bj[0].degree + bj[1], bj[1], bj[0].grlex_key()))
    return out


@dataclass(frozen=True)
class InitialJet:
    """Values of u and its listed derivatives at the origin, fixed by the data."""

    u0: object
    w0: dict


def _beta_factorial(beta: MultiIndex) -> int:
    out = 1
    for _, e in beta.entries:
        out *= math.factorial(e)
    return out


def _jet_from_phi(phi, w_index) -> InitialJet:
    u0 = phi[0].constant_term()
    w0 = {}
    for beta, j in w_index:
        w0[(beta, j)] = phi[j].coefficient(beta) * _beta_factorial(beta)
    return InitialJet(u0=u0, w0=w0)


class CauchyProblem:
    """Normal-form problem of time order ``m`` over ``x_vars`` spatial slots.

    ``f`` lives on the space ``(t, x1..xn, u, w[...;j]...)`` and is already
    recentered at the initial jet derived from ``phi``.
    """

    def __init__(self, m: int, x_vars: int, f: MonomialSeries, phi, w_index=None):
        if m < 1:
            raise ValueError("time order m must be a positive integer")
        if x_vars < 0:
            raise ValueError("x_vars must be nonnegative")
        self.m = m
        self.x_vars = x_vars
        self.w_index = list(w_index) if w_index is not None else build_w_index(m, x_vars)
        self.space = self._problem_space()
        if tuple(f.space) != self.space:
            raise ValueError(
                "f must live on %r (got %r)" % (self.space, tuple(f.space))
            )
        phi = list(phi)
        if len(phi) != m:
            raise ValueError("expected %d initial layers, got %d" % (m, len(phi)))
        xs = x_space(x_vars)
        for k, ph in enumerate(phi):
            if tuple(ph.space) != xs:
                raise ValueError("phi_%d must live on %r" % (k, xs))
        self.f = f
        self.phi = phi
        self.jet = _jet_from_phi(phi, self.w_index)

    def _problem_space(self) -> tuple:
        names = ["t"]
        names += list(x_space(self.x_vars))
        names.append("u")
        names += [w_name(beta, j, self.x_vars) for beta, j in self.w_index]
        return tuple(names)

    # variable positions inside self.space
    @property
    def pos_t(self) -> int:
        return 0

    def pos_x(self, i: int) -> int:
        """Position of the i-th spatial variable (1-based i)."""
        return i

    @property
    def pos_u(self) -> int:
        return 1 + self.x_vars

    def pos_w(self, beta: MultiIndex, j: int) -> int:
        return 2 + self.x_vars + self.w_index.index((beta, j))

    @classmethod
    def from_rhs(cls, m: int, x_vars: int, f_plain: MonomialSeries, phi, w_index=None):
        """Recenter a right-hand side written in plain (uncentered) variables."""
        if f_plain.degree_cap is not None:
            raise ValueError(
                "from_rhs needs an exact polynomial right-hand side; "
                "recentering a truncation would need its discarded tail"
            )
        probe = cls(m, x_vars, MonomialSeries.zero(f_plain.space), phi, w_index)
        jet = probe.jet
        assignment = {probe.pos_t: MonomialSeries.variable(probe.space, probe.pos_t)}
        for i in range(1, x_vars + 1):
            assignment[probe.pos_x(i)] = MonomialSeries.variable(probe.space, probe.pos_x(i))
        assignment[probe.pos_u] = (
            MonomialSeries.variable(probe.space, probe.pos_u) + jet.u0
        )
        for beta, j in probe.w_index:
            pos = probe.pos_w(beta, j)
            assignment[pos] = MonomialSeries.variable(probe.space, pos) + jet.w0[(beta, j)]
        f_centered = substitute(f_plain, assignment, cap=f_plain.max_degree())
        return cls(m, x_vars, f_centered.as_exact(), phi, w_index)

    @classmethod
    def from_linear(cls, lin: "LinearFirstOrderProblem", phi: MonomialSeries | None = None):
        """First-order problem  du/dt = sum a_i du/dx_i + b u  as a CauchyProblem."""
        phi = lin.phi if phi is None else phi
        n = lin.x_vars
        probe_space = cls(1, n, MonomialSeries.zero(cls._space_for(1, n)), [phi]).space
        f_plain = MonomialSeries.zero(probe_space)
        u_var = MonomialSeries.variable(probe_space, 1 + n)
        w_index = build_w_index(1, n)
        for i, a_i in enumerate(lin.a, start=1):
            pos = 2 + n + w_index.index((MultiIndex.single(i - 1), 0))
            w_var = MonomialSeries.variable(probe_space, pos)
            f_plain = f_plain + mul(_lift_coeff(a_i, lin, probe_space, n), w_var, None)
        if not lin.b.is_zero():
            f_plain = f_plain + mul(_lift_coeff(lin.b, lin, probe_space, n), u_var, None)
        return cls.from_rhs(1, n, f_plain.as_exact(), [phi])

    @staticmethod
    def _space_for(m: int, x_vars: int) -> tuple:
        names = ["t"] + list(x_space(x_vars)) + ["u"]
        names += [w_name(beta, j, x_vars) for beta, j in build_w_index(m, x_vars)]
        return tuple(names)


def _lift_coeff(series: MonomialSeries, lin, target_space, n: int) -> MonomialSeries:
    """Embed a coefficient over x (or (t,x)) into the problem space."""
    if lin.time_dependent:
        var_map = {0: 0}
        var_map.update({i: i for i in range(1, n + 1)})
        if len(series.space) != n + 1:
            raise ValueError("time-dependent coefficients must live on (t, x1..xn)")
    else:
        if len(series.space) != n:
            raise ValueError("coefficients must live on (x1..xn)")
        var_map = {i: i + 1 for i in range(n)}
    return series.embed(target_space, var_map)


@dataclass
class LinearFirstOrderProblem:
    """Data of  du/dt - sum_i a_i du/dx_i - b u = 0,  u(0, x) = phi(x).

    Coefficients live on (x1..xn), or on (t, x1..xn) when ``time_dependent``.
    """

    a: list
    b: MonomialSeries
    phi: MonomialSeries
    time_dependent: bool = False

    @property
    def x_vars(self) -> int:
        return len(self.a)


@dataclass
class SolutionSeries:
    """Truncated solution; coefficients of total degree <= ``degree`` are
    exact and the equation residual vanishes through ``residual_degree``."""

    series: MonomialSeries
    degree: int
    residual_degree: int


def derived_initial_values(p: CauchyProblem) -> InitialJet:
    """u(0,0) and each listed derivative value, read off the initial layers."""
    return _jet_from_phi(p.phi, p.w_index)


def _solution_args(p: CauchyProblem, u: MonomialSeries) -> dict:
    """Assignment sending f's variables to the current solution data."""
    space = u.space
    args = {p.pos_t: MonomialSeries.variable(space, 0)}
    for i in range(1, p.x_vars + 1):
        args[p.pos_x(i)] = MonomialSeries.variable(space, i)
    args[p.pos_u] = u - p.jet.u0

    max_j = max((j for _, j in p.w_index), default=0)
    t_derivs = [u]
    for _ in range(max_j):
        t_derivs.append(partial_deriv(t_derivs[-1], 0))
    for beta, j in p.w_index:
        d = t_derivs[j]
        for i, e in beta.entries:
            for _ in range(e):
                d = partial_deriv(d, i + 1)
        args[p.pos_w(beta, j)] = d - p.jet.w0[(beta, j)]
    return args


def solve(p: CauchyProblem, N: int, max_terms: int = 500_000) -> SolutionSeries:
    """Truncated series solution to total (t, x)-degree ``N``.

    The t-layers are plain monomial coefficients, i.e. the k-th layer holds
    (d^k/dt^k u at t=0) / k!; exact over Fraction inputs.
    """
    if N < p.m:
        raise ValueError("N must be at least the time order m")
    space = tx_space(p.x_vars)
    u = MonomialSeries.zero(space)
    for k, ph in enumerate(p.phi):
        fact = Fraction(1, math.factorial(k))
        layer_terms = {}
        for beta, c in ph.terms.items():
            if k + beta.degree > N:
                continue
            shifted = MultiIndex(((0, k),) + tuple((i + 1, e) for i, e in beta.entries))
            layer_terms[shifted] = c * fact
        if layer_terms:
            u = u + MonomialSeries(space, layer_terms)

    f = p.f.as_exact()
    for k in range(0, N - p.m + 1):
        rhs = substitute(f, _solution_args(p, u), cap=N)
        ratio = Fraction(math.factorial(k), math.factorial(k + p.m))
        new_terms = {}
        for alpha, c in rhs.terms.items():
            if alpha.exponent(0) != k:
                continue
            if alpha.degree - k > N - (k + p.m):
                continue
            lifted = alpha.shift(0, p.m)
            new_terms[lifted] = c * ratio
        if new_terms:
            u = u + MonomialSeries(space, new_terms)
        if len(u.terms) > max_terms:
            raise TermBudgetError("solution exceeded the %d-term budget" % max_terms)
    return SolutionSeries(
        series=MonomialSeries(space, u.terms, degree_cap=N),
        degree=N,
        residual_degree=N - p.m,
    )


def residual(p: CauchyProblem, s: SolutionSeries, N: int) -> MonomialSeries:
    """Defect  d^m/dt^m u - f(t, x, u, ...)  truncated to total degree ``N``."""
    u = s.series.as_exact()
    lhs = u
    for _ in range(p.m):
        lhs = partial_deriv(lhs, 0)
    rhs = substitute(p.f.as_exact(), _solution_args(p, u), cap=N)
    return (lhs.truncate(N, keep_cap=False) - rhs.as_exact()).truncate(N, keep_cap=False)


# ----------------------------------------------------------------------
# first-order linear helpers
# ----------------------------------------------------------------------


def g_space(x_vars: int) -> tuple:
    return ("t",) + x_space(x_vars) + tuple("w%d" % i for i in range(x_vars + 1))


def build_G(p: LinearFirstOrderProblem) -> MonomialSeries:
    """The symbol  sum_i a_i(t,x) w_i + w_0 b(t,x),  linear in the w block."""
    n = p.x_vars
    space = g_space(n)
    out = MonomialSeries.zero(space)
    for i, a_i in enumerate(p.a, start=1):
        coeff = _lift_g_coeff(a_i, p, space, n)
        out = out + mul(coeff, MonomialSeries.variable(space, n + 1 + i), None)
    if not p.b.is_zero():
        coeff = _lift_g_coeff(p.b, p, space, n)
        out = out + mul(coeff, MonomialSeries.variable(space, n + 1), None)
    return out


def _lift_g_coeff(series, p, space, n):
    if p.time_dependent:
        var_map = {0: 0}
        var_map.update({i: i for i in range(1, n + 1)})
    else:
        var_map = {i: i + 1 for i in range(n)}
    return series.embed(space, var_map)


def majorant_radius(
    p: LinearFirstOrderProblem,
    pnorm: float,
    witness: PointOracle,
    cap: int,
    c0: float = 0.5,
) -> tuple[float, ConvergenceCertificate]:
    """Heuristic convergence radius  r = c0 / (1 + S)  from a certified bound.

    ``S`` is the certified absolute sum of the coefficient symbol's majorant
    at the witness; the contract is positivity and independence of the
    initial data (the symbol never sees phi), not sharpness.
    """
    G = majorant(build_G(p))
    cert = certify_convergence(G, pnorm, witness, cap, bound=math.inf)
    if not cert.success:
        raise CertificationError(
            "coefficient symbol failed its convergence certificate (tail total %g)"
            % cert.tail_total
        )
    S = cert.partial_sums[-1] if cert.partial_sums else 0.0
    return c0 / (1.0 + S), cert


# ----------------------------------------------------------------------
# the noninteracting-oscillator family
# ----------------------------------------------------------------------


def oscillator_problem(a_rule, n: int, phi0=None, phi1=None) -> CauchyProblem:
    """Second-order problem for a chain of independent harmonic modes.

    Time is the first coordinate; modes k = 2..n map to spatial slots
    k-1.  The right-hand side is
    ``2 t w[0;1] - sum_k a_k (w[2e_k;0] - 2 x_k w[e_k;0])``.
    """
    if n < 2:
        raise ValueError("need n >= 2 (at least one oscillator)")
    x_vars = n - 1
    xs = x_space(x_vars)
    phi0 = phi0 if phi0 is not None else MonomialSeries.zero(xs)
    phi1 = phi1 if phi1 is not None else MonomialSeries.zero(xs)
    space = CauchyProblem._space_for(2, x_vars)
    w_index = build_w_index(2, x_vars)
    t_var = MonomialSeries.variable(space, 0)

    def wvar(beta, j):
        return MonomialSeries.variable(space, 2 + x_vars + w_index.index((beta, j)))

    f_plain = 2 * mul(t_var, wvar(ZERO_INDEX, 1), None)
    for k in range(2, n + 1):
        a_k = a_rule(k)
        if a_k == 0:
            continue
        slot = k - 2  # 0-based spatial position
        x_var = MonomialSeries.variable(space, 1 + slot)
        f_plain = f_plain - a_k * wvar(MultiIndex.single(slot, 2), 0)
        f_plain = f_plain + 2 * a_k * mul(x_var, wvar(MultiIndex.single(slot), 0), None)
    return CauchyProblem.from_rhs(2, x_vars, f_plain, [phi0, phi1])


@dataclass
class SummabilityReport:
    """Partial sum of  |a_k b_k| + 2 |a_k c_k|  for k = 2..K plus tail data."""

    partial: float
    tail_bound: float
    converged: bool
    K: int

    @property
    def estimate(self) -> float:
        """Partial sum plus the analytic upper tail; brackets the limit."""
        return self.partial + self.tail_bound


def check_summability(a_rule, b_rule, c_rule, K: int) -> SummabilityReport:
    """Numeric check of the oscillator admissibility sum.

    Rules may be callables or the closed-form rule objects from
    :mod:`infdim.series`; only closed-form rules carry an analytic tail
    bound, so ``converged`` is False for bare callables even when the
    partial sums look tame.
    """
    import numpy as np

    ks = np.arange(2, K + 1, dtype=float)

    def values(rule):
        if hasattr(rule, "values"):
            return np.asarray(rule.values(ks), dtype=float)
        return np.array([float(rule(int(k))) for k in ks])

    av, bv, cv = values(a_rule), values(b_rule), values(c_rule)
    partial = float(np.sum(np.abs(av * bv) + 2.0 * np.abs(av * cv)))

    tail_ab = _abs_product_tail(a_rule, b_rule, K)
    tail_ac = _abs_product_tail(a_rule, c_rule, K)
    tail = tail_ab + 2.0 * tail_ac
    return SummabilityReport(
        partial=partial, tail_bound=tail, converged=math.isfinite(tail), K=K
    )


def _abs_product_tail(r1, r2, K: int) -> float:
    """Upper bound on  sum_{k > K} |r1(k) r2(k)|  when the rules compose."""
    from .series import ConstantRule, GeometricRule, PowerRule

    if isinstance(r1, ConstantRule):
        r1, r2 = r2, r1
    if isinstance(r2, ConstantRule):
        if r2.coeff == 0:
            return 0.0
        if isinstance(r1, ConstantRule):
            return 0.0 if r1.coeff == 0 else math.inf
        if isinstance(r1, (GeometricRule, PowerRule)):
            return abs(r2.coeff) * r1.abs_tail_sum(K)
        return math.inf
    if isinstance(r1, PowerRule) and isinstance(r2, PowerRule):
        return PowerRule(abs(r1.coeff * r2.coeff), r1.exponent + r2.exponent).abs_tail_sum(K)
    if isinstance(r1, GeometricRule) and isinstance(r2, GeometricRule):
        return GeometricRule(abs(r1.coeff * r2.coeff), abs(r1.ratio * r2.ratio)).abs_tail_sum(K)
    if isinstance(r1, GeometricRule) and isinstance(r2, PowerRule) and abs(r1.ratio) < 1 and r2.exponent <= 0:
        return GeometricRule(abs(r1.coeff * r2.coeff), abs(r1.ratio)).abs_tail_sum(K)
    if isinstance(r2, GeometricRule) and isinstance(r1, PowerRule):
        return _abs_product_tail(r2, r1, K)
    return math.inf


# ----------------------------------------------------------------------
# problem files
# ----------------------------------------------------------------------


def linear_to_json_dict(lin: LinearFirstOrderProblem) -> dict:
    return {
        "a": [s.to_json_dict() for s in lin.a],
        "b": lin.b.to_json_dict(),
        "time_dependent": lin.time_dependent,
    }


def linear_from_json_dict(data: dict, phi: MonomialSeries, rational=False) -> LinearFirstOrderProblem:
    a = [MonomialSeries.from_json_dict(d, rational) for d in data["a"]]
    b = MonomialSeries.from_json_dict(data["b"], rational)
    return LinearFirstOrderProblem(
        a=a, b=b, phi=phi, time_dependent=bool(data.get("time_dependent", False))
    )


def problem_to_json_dict(p: CauchyProblem, linear: LinearFirstOrderProblem | None = None) -> dict:
    out = {
        "m": p.m,
        "x_vars": p.x_vars,
        "f": p.f.to_json_dict(),
        "phi": [ph.to_json_dict() for ph in p.phi],
    }
    if linear is not None:
        out["linear"] = linear_to_json_dict(linear)
    return out


def problem_from_json_dict(data: dict, rational: bool = False):
    """Returns (CauchyProblem, LinearFirstOrderProblem or None)."""
    phi = [MonomialSeries.from_json_dict(d, rational) for d in data["phi"]]
    if "linear" in data and data["linear"] is not None:
        lin = linear_from_json_dict(data["linear"], phi[0], rational)
        return CauchyProblem.from_linear(lin), lin
    f = MonomialSeries.from_json_dict(data["f"], rational)
    return CauchyProblem(int(data["m"]), int(data["x_vars"]), f, phi), None


def sorted_terms_table(series: MonomialSeries) -> list:
    """(multi-index, coefficient) rows in canonical order, for CSV emission."""
    return [(alpha, series.terms[alpha]) for alpha in iter_graded(series.terms)]
