"""Geometric weight schemes for the Hilbert/Banach coordinate scaling.

A scheme picks square-root-summable families  s_j, t_i in (0,1)  with
sum sqrt(s_j) + sum sqrt(t_i) = 1  and derives the per-coordinate scales

    A_0 = t_0^(1/4),    A_i = max(t_i^(1/4), s_i^(1/4)),

so that sum A_i^2 < 1.  Coordinate i of every Gaussian in this package has
variance t * A_i^2.  The search for the budget radius rho1 scans a
documented geometric grid and certifies, for the transformed coefficients
of the problem at hand, that

    sum_i [ sum_alpha |a'_{i,alpha}| (rho1/A^4)^alpha ] * rho1 / A_i^4  < 1/2

at the working truncation; it reports the best attempt honestly when no
grid point passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import WeightSearchError
from ..series import MonomialSeries, majorant


@dataclass(frozen=True)
class GeometricWeightPattern:
    """sqrt(t_i) = ct * rt**i  (i >= 0),  sqrt(s_j) = cs * rs**(j-1)  (j >= 1)."""

    ct: float = 0.25
    rt: float = 0.5
    cs: float = 0.25
    rs: float = 0.5
    rho0: float = 1.0

    def __post_init__(self):
        for name, v in (("ct", self.ct), ("cs", self.cs)):
            if not 0 < v < 1:
                raise ValueError("%s must lie in (0,1)" % name)
        for name, v in (("rt", self.rt), ("rs", self.rs)):
            if not 0 < v < 1:
                raise ValueError("%s must lie in (0,1)" % name)
        if self.rho0 <= 0:
            raise ValueError("rho0 must be positive")

    def sqrt_sum(self) -> float:
        """Closed form of  sum sqrt(s_j) + sum sqrt(t_i)."""
        return self.ct / (1.0 - self.rt) + self.cs / (1.0 - self.rs)


@dataclass(frozen=True)
class WeightScheme:
    """A validated pattern plus the certified budget radii."""

    pattern: GeometricWeightPattern
    rho0: float
    rho1: float | None = None
    bound_value: float | None = None

    # -- the defining families -----------------------------------------

    def sqrt_t(self, i: int) -> float:
        return self.pattern.ct * self.pattern.rt**i

    def sqrt_s(self, j: int) -> float:
        if j < 1:
            raise ValueError("s_j is defined for j >= 1")
        return self.pattern.cs * self.pattern.rs ** (j - 1)

    def t(self, i: int) -> float:
        return self.sqrt_t(i) ** 2

    def s(self, j: int) -> float:
        return self.sqrt_s(j) ** 2

    def A(self, i: int) -> float:
        if i == 0:
            return math.sqrt(self.sqrt_t(0))
        return math.sqrt(max(self.sqrt_t(i), self.sqrt_s(i)))

    def avec(self, dim: int) -> np.ndarray:
        return np.array([self.A(i) for i in range(dim)])

    # -- invariants ------------------------------------------------------

    def sqrt_sum_error(self, n_check: int = 4000) -> float:
        """|partial sums + analytic tails - 1| at the working truncation."""
        pat = self.pattern
        part = sum(self.sqrt_t(i) for i in range(n_check))
        part += sum(self.sqrt_s(j) for j in range(1, n_check))
        tail = pat.ct * pat.rt**n_check / (1 - pat.rt)
        tail += pat.cs * pat.rs ** (n_check - 1) / (1 - pat.rs)
        return abs(part + tail - 1.0)

    def a_sq_sum(self, n_check: int = 200) -> float:
        """sum_i A_i^2, closed form when one branch dominates every index."""
        pat = self.pattern
        s_dominates = all(self.sqrt_s(i) >= self.sqrt_t(i) for i in range(1, n_check))
        t_dominates = all(self.sqrt_t(i) >= self.sqrt_s(i) for i in range(1, n_check))
        if s_dominates and pat.rs >= pat.rt:
            return self.sqrt_t(0) + pat.cs / (1 - pat.rs)
        if t_dominates and pat.rt >= pat.rs:
            return pat.ct / (1 - pat.rt)
        part = self.sqrt_t(0) + sum(
            max(self.sqrt_t(i), self.sqrt_s(i)) for i in range(1, n_check)
        )
        # conservative: both tails together still bound the max-sum
        tail = pat.ct * pat.rt**n_check / (1 - pat.rt)
        tail += pat.cs * pat.rs ** (n_check - 1) / (1 - pat.rs)
        return part + tail

    def validate(self, tol: float = 1e-12):
        if abs(self.pattern.sqrt_sum() - 1.0) > tol:
            raise WeightSearchError(
                "pattern sqrt-sum is %.15g, not 1" % self.pattern.sqrt_sum()
            )
        if self.sqrt_sum_error() > tol:
            raise WeightSearchError("numeric sqrt-sum check exceeded tolerance")
        if not self.a_sq_sum() < 1.0:
            raise WeightSearchError("sum of A_i^2 is not strictly below 1")
        if self.rho1 is not None and not self.rho1 < self.rho0:
            raise WeightSearchError("rho1 must be strictly below rho0")
        return self


def _majorant_value(series: MonomialSeries, gamma) -> float:
    """sum_alpha |c_alpha| * gamma^alpha for an explicit coordinate list."""
    return float(majorant(series).eval_columns(gamma))


def eq1133_bound(a_tilde, b_tilde, scheme: WeightScheme, rho: float) -> tuple[float, list]:
    """The truncated budget sum at radius rho, with per-series contributions.

    ``a_tilde[i-1]`` plays index i >= 1; ``b_tilde`` (optional) plays index 0.
    All series must live on the spatial space (x1..xn).
    """
    n_x = max((s.num_vars() for s in a_tilde), default=0)
    if b_tilde is not None:
        n_x = max(n_x, b_tilde.num_vars())
    gamma = [rho / scheme.A(j) ** 4 for j in range(1, n_x + 1)]
    contributions = []
    total = 0.0
    if b_tilde is not None and not b_tilde.is_zero():
        c = _majorant_value(b_tilde, gamma) * rho / scheme.A(0) ** 4
        contributions.append((0, c))
        total += c
    for i, s in enumerate(a_tilde, start=1):
        if s.is_zero():
            continue
        c = _majorant_value(s, gamma) * rho / scheme.A(i) ** 4
        contributions.append((i, c))
        total += c
    return total, contributions


def build_weights(
    a,
    pattern: GeometricWeightPattern | None = None,
    b: MonomialSeries | None = None,
    cap: int = 12,
    grid_steps: int = 80,
    grid_factor: float = 0.5,
) -> WeightScheme:
    """Search the geometric grid  rho = rho0 * grid_factor**k  for a budget radius.

    ``a`` is the list of first-order coefficient series over (x1..xn); the
    zeroth-order coefficient ``b`` joins the sum at index 0 when given.  The
    bound is evaluated on the transformed coefficients (the series divided
    by 1 - 2 sum x_i a_i) truncated at ``cap``.  Raises
    :class:`WeightSearchError`, reporting the best attempted bound, when no
    grid point certifies < 1/2.
    """
    from .green import change_of_variables
    from ..ck import LinearFirstOrderProblem, x_space

    pattern = pattern or GeometricWeightPattern()
    base = WeightScheme(pattern=pattern, rho0=pattern.rho0).validate()

    a = list(a)
    n_x = max((s.num_vars() for s in a), default=0)
    if a and any(s.num_vars() != n_x for s in a):
        raise ValueError("all coefficient series must share one spatial space")
    if not a or all(s.is_zero() for s in a):
        a_tilde = [MonomialSeries.zero(x_space(n_x or 1)) for _ in a]
        b_tilde = b
    else:
        lin = LinearFirstOrderProblem(
            a=a,
            b=b if b is not None else MonomialSeries.zero(a[0].space),
            phi=MonomialSeries.zero(a[0].space),
        )
        a_tilde, b_tilde = change_of_variables(lin, cap)
        if b is None:
            b_tilde = None

    best = (math.inf, None)
    rho = pattern.rho0
    for _ in range(grid_steps):
        rho *= grid_factor
        total, contributions = eq1133_bound(a_tilde, b_tilde, base, rho)
        if total < best[0]:
            best = (total, rho)
        if total < 0.5:
            return WeightScheme(
                pattern=pattern, rho0=pattern.rho0, rho1=rho, bound_value=total
            ).validate()
    raise WeightSearchError(
        "no grid radius certified the 1/2 bound; best was %.6g at rho=%.3g"
        % (best[0], best[1] if best[1] is not None else float("nan"))
    )
