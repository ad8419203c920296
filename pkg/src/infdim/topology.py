"""Clamped sequence-space metrics d_p and the raw-norm ball predicates.

Points are finite vectors (any sequence or ``{index: value}`` map) or
:class:`~infdim.series.PointOracle` values with closed-form tails.  Finite
comparisons are exact.  Oracle comparisons are exact whenever the two tails
cancel (identical rule) or provably blow up; otherwise the result is an
interval and the boolean predicates return ``None`` for "unknown" — honesty
about truncation rather than a silent cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TailBoundError
from .series import PointOracle, PowerRule


@dataclass(frozen=True)
class MetricSpec:
    """Chooses d_p: sup-norm at p=inf, (sum |.|^p)^(1/p) for p>=1,
    plain sum |.|^p for 0<p<1."""

    p: float

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError("p must be positive")


@dataclass(frozen=True)
class DistResult:
    lower: float
    upper: float

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> float:
        if not self.exact:
            raise TailBoundError("distance is only known as [%g, %g]" % (self.lower, self.upper))
        return self.lower


def _as_coord_map(point, tail_index):
    """Split a point into (explicit map, tail kind, rule).

    Tail kinds: 'zero' (finite vector), 'rule' (oracle tail beyond its
    explicit part evaluated lazily).
    """
    if isinstance(point, PointOracle):
        return dict(point.explicit), point.tail_rule
    if isinstance(point, dict):
        return {int(i): float(v) for i, v in point.items()}, None
    return {i: float(v) for i, v in enumerate(point)}, None


def _difference_profile(x, y, tail_index):
    """Explicit |x_i - y_i| values plus a classification of the joint tail.

    Returns (diffs, tail) where tail is one of
      ('zero', 0.0)        -- equal tails beyond the explicit region
      ('bounded', b)       -- remaining sum of |x_i - y_i| is <= b coordinatewise
      ('diverges', None)   -- coordinates |x_i - y_i| >= 1 occur arbitrarily far out
      ('unknown', None)
    """
    xm, xr = _as_coord_map(x, tail_index)
    ym, yr = _as_coord_map(y, tail_index)
    explicit = set(xm) | set(ym)

    def val(m, r, i):
        if i in m:
            return m[i]
        if r is None:
            return 0.0
        if isinstance(r, PowerRule) and i < 1:
            return 0.0
        return float(r.value(i))

    top = max(explicit, default=-1)
    diffs = [abs(val(xm, xr, i) - val(ym, yr, i)) for i in range(top + 1)]

    if xr is None and yr is None:
        return diffs, ("zero", 0.0)
    if xr == yr:
        # identical closed-form tails cancel beyond the explicit region
        return diffs, ("zero", 0.0)
    rules = [r for r in (xr, yr) if r is not None]
    if len(rules) == 1:
        r = rules[0]
        # the other point's tail is zero: remaining terms are |rule(i)|
        probe = [abs(r.value(i)) for i in range(top + 1, top + 12) if not (isinstance(r, PowerRule) and i < 1)]
        if probe and min(probe) >= 1.0 and _rule_grows(r):
            return diffs, ("diverges", None)
        bound = r.abs_tail_sum(top)
        if math.isfinite(bound):
            return diffs, ("bounded", bound)
        return diffs, ("unknown", None)
    return diffs, ("unknown", None)


def _rule_grows(rule) -> bool:
    from .series import ConstantRule, GeometricRule

    if isinstance(rule, GeometricRule):
        return abs(rule.ratio) >= 1.0 and abs(rule.coeff) >= 1.0
    if isinstance(rule, PowerRule):
        return rule.exponent >= 0.0 and abs(rule.coeff) >= 1.0
    if isinstance(rule, ConstantRule):
        return abs(rule.coeff) >= 1.0
    return False


def _norm_interval(diffs, tail, spec: MetricSpec, tail_index) -> DistResult:
    """Interval for the unclamped norm of the difference."""
    kind, bound = tail
    p = spec.p
    if p == math.inf:
        lo = max(diffs, default=0.0)
        if kind == "zero":
            return DistResult(lo, lo)
        if kind == "diverges":
            return DistResult(max(lo, 1.0), math.inf)
        if kind == "bounded":
            return DistResult(lo, max(lo, bound))
        return DistResult(lo, math.inf)
    if p >= 1:
        s = sum(d**p for d in diffs)
        lo = s ** (1.0 / p)
        if kind == "zero":
            return DistResult(lo, lo)
        if kind == "diverges":
            return DistResult(math.inf, math.inf)
        if kind == "bounded":
            # Minkowski: adding a tail with sum of |.| <= b moves the norm by <= b
            return DistResult(lo, lo + bound)
        return DistResult(lo, math.inf)
    # 0 < p < 1: the "norm" is the plain p-sum
    s = sum(d**p for d in diffs)
    if kind == "zero":
        return DistResult(s, s)
    if kind == "diverges":
        return DistResult(math.inf, math.inf)
    return DistResult(s, math.inf)


def dist(x, y, spec: MetricSpec, tail_index: int = 10_000) -> DistResult:
    """The clamped metric  min(1, ||x - y||)  as an interval (exact when possible)."""
    diffs, tail = _difference_profile(x, y, tail_index)
    raw = _norm_interval(diffs, tail, spec, tail_index)
    return DistResult(min(1.0, raw.lower), min(1.0, raw.upper))


def ball_contains(center, candidate, r: float, spec: MetricSpec, tail_index: int = 10_000):
    """Strict ball membership on the UNCLAMPED norm: ||candidate - center|| < r.

    Returns True/False, or None when the truncated tails leave it undecided.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    diffs, tail = _difference_profile(center, candidate, tail_index)
    raw = _norm_interval(diffs, tail, spec, tail_index)
    if raw.upper < r:
        return True
    if raw.lower >= r:
        return False
    return None
