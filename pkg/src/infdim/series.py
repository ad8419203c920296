"""Sparse formal power series in many real variables.

A :class:`MonomialSeries` is a finite map from multi-indices to coefficients
over a named variable space.  Coefficients may be floats, ints, or
``fractions.Fraction`` (the exact-rational mode used by algebra tests and the
solver's rational path); all operations are closed over whichever type the
inputs carry.

A series with ``degree_cap`` set is a *truncation* of a possibly infinite
expansion, trusted only up to that total degree.  A series with
``degree_cap=None`` is an exact polynomial.  This distinction drives the
formal-convergence check in :func:`substitute`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    FormalConvergenceError,
    SpaceMismatchError,
    TailBoundError,
    TermBudgetError,
)
from .multiindex import MultiIndex, ZERO_INDEX, count_multiindices, enumerate_multiindices

DEFAULT_TAIL_CHECK_INDEX = 10_000


def _merge_caps(*caps):
    """Smallest of the set caps; None means untruncated."""
    vals = [c for c in caps if c is not None]
    return min(vals) if vals else None


class MonomialSeries:
    """Finite monomial sum  sum_alpha  c_alpha * x^alpha  over a named space."""

    __slots__ = ("space", "terms", "degree_cap")

    def __init__(self, space, terms=None, degree_cap=None):
        space = tuple(space)
        clean = {}
        for alpha, c in (terms or {}).items():
            if not isinstance(alpha, MultiIndex):
                alpha = MultiIndex(alpha)
            if c == 0:
                continue
            if alpha.max_var() >= len(space):
                raise ValueError(
                    "term %r uses a variable outside the %d-variable space" % (alpha, len(space))
                )
            if degree_cap is not None and alpha.degree > degree_cap:
                raise ValueError(
                    "term %r has degree %d above the declared cap %d"
                    % (alpha, alpha.degree, degree_cap)
                )
            clean[alpha] = c
        self.space = space
        self.terms = clean
        self.degree_cap = degree_cap

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, space):
        return cls(space, {})

    @classmethod
    def constant(cls, space, value):
        return cls(space, {ZERO_INDEX: value})

    @classmethod
    def variable(cls, space, var: int, coeff=1):
        return cls(space, {MultiIndex.single(var): coeff})

    # -- inspection ---------------------------------------------------

    def num_vars(self) -> int:
        return len(self.space)

    def constant_term(self):
        return self.terms.get(ZERO_INDEX, 0)

    def max_degree(self) -> int:
        return max((a.degree for a in self.terms), default=0)

    def min_degree(self) -> int:
        """Smallest term degree; 0 for the zero series."""
        return min((a.degree for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha: MultiIndex):
        return self.terms.get(alpha, 0)

    def iter_graded(self):
        for alpha in sorted(self.terms, key=MultiIndex.grlex_key):
            yield alpha, self.terms[alpha]

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialSeries)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for alpha, c in self.iter_graded():
                parts.append("%s*%r" % (c, alpha) if alpha.entries else "%s" % (c,))
            body = " + ".join(parts[:8]) + (" + ..." if len(parts) > 8 else "")
        cap = "" if self.degree_cap is None else " (cap %d)" % self.degree_cap
        return "<series %s%s>" % (body, cap)

    # -- ring operations ----------------------------------------------

    def _check_space(self, other: "MonomialSeries"):
        if self.space != other.space:
            raise SpaceMismatchError(
                "variable spaces differ: %r vs %r" % (self.space, other.space)
            )

    def __add__(self, other):
        if not isinstance(other, MonomialSeries):
            other = MonomialSeries.constant(self.space, other)
        self._check_space(other)
        cap = _merge_caps(self.degree_cap, other.degree_cap)
        terms = dict(self.terms)
        for alpha, c in other.terms.items():
            val = terms.get(alpha, 0) + c
            if val == 0:
                terms.pop(alpha, None)
            else:
                terms[alpha] = val
        if cap is not None:
            terms = {a: c for a, c in terms.items() if a.degree <= cap}
        return MonomialSeries(self.space, terms, cap)

    __radd__ = __add__

    def __neg__(self):
        return MonomialSeries(
            self.space, {a: -c for a, c in self.terms.items()}, self.degree_cap
        )

    def __sub__(self, other):
        if not isinstance(other, MonomialSeries):
            other = MonomialSeries.constant(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        if factor == 0:
            return MonomialSeries.zero(self.space)
        return MonomialSeries(
            self.space, {a: c * factor for a, c in self.terms.items()}, self.degree_cap
        )

    def __mul__(self, other):
        if not isinstance(other, MonomialSeries):
            return self.scale(other)
        return mul(self, other, cap=None)

    def __rmul__(self, other):
        return self.scale(other)

    def truncate(self, cap: int, keep_cap: bool = True) -> "MonomialSeries":
        """Drop all terms of total degree above ``cap``."""
        terms = {a: c for a, c in self.terms.items() if a.degree <= cap}
        new_cap = _merge_caps(cap, self.degree_cap) if keep_cap else None
        return MonomialSeries(self.space, terms, new_cap)

    def as_exact(self) -> "MonomialSeries":
        """Reinterpret the stored terms as an exact polynomial (cap removed)."""
        return MonomialSeries(self.space, dict(self.terms), None)

    def map_coefficients(self, fn) -> "MonomialSeries":
        return MonomialSeries(
            self.space, {a: fn(c) for a, c in self.terms.items()}, self.degree_cap
        )

    def embed(self, target_space, var_map=None) -> "MonomialSeries":
        """Relabel variables into a larger space.

        ``var_map`` maps old positions to new positions; by default variables
        keep their position (the old space must be a prefix of the target).
        """
        target_space = tuple(target_space)
        if var_map is None:
            if tuple(target_space[: len(self.space)]) != self.space:
                raise SpaceMismatchError(
                    "default embedding needs the old space as a prefix of the target"
                )
            var_map = {i: i for i in range(len(self.space))}
        terms = {}
        for alpha, c in self.terms.items():
            new_alpha = MultiIndex((var_map[i], e) for i, e in alpha.entries)
            terms[new_alpha] = c
        return MonomialSeries(target_space, terms, self.degree_cap)

    # -- numeric evaluation --------------------------------------------

    def eval_columns(self, columns):
        """Evaluate at arrays: ``columns[i]`` holds values of variable i.

        Accepts scalars or numpy arrays; coefficients are coerced to float.
        """
        total = 0.0
        for alpha, c in self.terms.items():
            term = float(c)
            for i, e in alpha.entries:
                term = term * columns[i] ** e
            total = total + term
        return total

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "space": list(self.space),
            "terms": [
                {"alpha": [[i, e] for i, e in alpha.entries], "c": _coeff_to_json(c)}
                for alpha, c in self.iter_graded()
            ],
            "cap": self.degree_cap,
        }

    @classmethod
    def from_json_dict(cls, data: dict, rational: bool = False) -> "MonomialSeries":
        terms = {}
        for item in data.get("terms", []):
            alpha = MultiIndex(tuple((int(i), int(e)) for i, e in item["alpha"]))
            terms[alpha] = _coeff_from_json(item["c"], rational)
        return cls(tuple(data["space"]), terms, data.get("cap"))


def _coeff_to_json(c):
    from fractions import Fraction

    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c)
        return str(c)  # exact "p/q" form survives the round trip
    if isinstance(c, int):
        return c
    return float(c)


def _coeff_from_json(raw, rational: bool):
    from fractions import Fraction

    if isinstance(raw, str):
        return Fraction(raw)
    if rational:
        return Fraction(raw) if isinstance(raw, int) else Fraction(float(raw))
    return raw


# ----------------------------------------------------------------------
# core operations
# ----------------------------------------------------------------------


def mul(a: MonomialSeries, b: MonomialSeries, cap: int | None, limit: int = 2_000_000) -> MonomialSeries:
    """Cauchy product, discarding terms of total degree above ``cap``.

    The result's trust cap is the smallest of ``cap`` and the input caps;
    stored terms are pruned to it.
    """
    if a.space != b.space:
        raise SpaceMismatchError("variable spaces differ: %r vs %r" % (a.space, b.space))
    eff = _merge_caps(cap, a.degree_cap, b.degree_cap)
    terms: dict = {}
    for alpha, ca in a.terms.items():
        da = alpha.degree
        for beta, cb in b.terms.items():
            if eff is not None and da + beta.degree > eff:
                continue
            gamma = alpha * beta
            val = terms.get(gamma, 0) + ca * cb
            if val == 0:
                terms.pop(gamma, None)
            else:
                terms[gamma] = val
        if len(terms) > limit:
            raise TermBudgetError("product exceeded the %d-term budget" % limit)
    return MonomialSeries(a.space, terms, eff)


def power(base: MonomialSeries, exp: int, cap: int | None) -> MonomialSeries:
    out = MonomialSeries.constant(base.space, 1)
    for _ in range(exp):
        out = mul(out, base, cap)
        if out.is_zero():
            break
    return out


def partial_deriv(f: MonomialSeries, var: int) -> MonomialSeries:
    """Coefficient-level partial derivative with respect to variable ``var``."""
    terms = {}
    for alpha, c in f.terms.items():
        e = alpha.exponent(var)
        if e == 0:
            continue
        terms[alpha.shift(var, -1)] = c * e
    cap = None if f.degree_cap is None else max(f.degree_cap - 1, 0)
    return MonomialSeries(f.space, terms, cap)


def substitute(f: MonomialSeries, assignment: dict, cap: int, limit: int = 2_000_000) -> MonomialSeries:
    """Compose ``f`` with the per-variable assignment, truncated to ``cap``.

    Every variable of ``f`` must be assigned either a number or a
    :class:`MonomialSeries`; all series values must share one target space.
    A substituted series with a nonzero constant term is only allowed when
    ``f`` is an exact polynomial (``degree_cap is None``): composing it into
    a truncation would need the discarded tail.
    """
    target_space = None
    for v in assignment.values():
        if isinstance(v, MonomialSeries):
            if target_space is None:
                target_space = v.space
            elif v.space != target_space:
                raise SpaceMismatchError("substituted series live on different spaces")
    if target_space is None:
        target_space = ()

    used = set()
    for alpha in f.terms:
        used.update(i for i, _ in alpha.entries)
    missing = sorted(i for i in used if i not in assignment)
    if missing:
        raise ValueError(
            "assignment is missing variables %s of the source space" % missing
        )

    min_degrees = {}
    for i in used:
        v = assignment[i]
        if isinstance(v, MonomialSeries):
            if v.is_zero():
                min_degrees[i] = None  # annihilates every term containing x_i
            else:
                if v.constant_term() != 0 and f.degree_cap is not None:
                    raise FormalConvergenceError(
                        "variable %d maps to a series with nonzero constant term "
                        "but f is a truncated expansion" % i
                    )
                min_degrees[i] = v.min_degree()
        else:
            min_degrees[i] = 0 if v != 0 else None

    power_cache: dict = {}

    def arg_power(i, e):
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = power(assignment[i], e, cap)
        return power_cache[key]

    out = MonomialSeries.zero(target_space)
    for alpha, c in f.terms.items():
        # cheap lower bound on the output degree of this composed term
        lower = 0
        skip = False
        for i, e in alpha.entries:
            md = min_degrees[i]
            if md is None:
                skip = True
                break
            lower += md * e
        if skip or lower > cap:
            continue
        piece = MonomialSeries.constant(target_space, c)
        for i, e in alpha.entries:
            v = assignment[i]
            if isinstance(v, MonomialSeries):
                piece = mul(piece, arg_power(i, e), cap)
                if piece.is_zero():
                    break
            else:
                piece = piece.scale(v**e)
        out = out + piece
        if len(out.terms) > limit:
            raise TermBudgetError("substitution exceeded the %d-term budget" % limit)
    arg_caps = [
        v.degree_cap
        for i, v in assignment.items()
        if i in used and isinstance(v, MonomialSeries)
    ]
    return MonomialSeries(target_space, out.terms, _merge_caps(cap, f.degree_cap, *arg_caps))


def reciprocal_one_minus(g: MonomialSeries, cap: int) -> MonomialSeries:
    """Series of 1 / (1 - g) up to total degree ``cap``; g must have no constant term."""
    if g.constant_term() != 0:
        raise ValueError("reciprocal_one_minus requires a zero constant term")
    acc = MonomialSeries.constant(g.space, 1)
    pw = MonomialSeries.constant(g.space, 1)
    for _ in range(cap):
        pw = mul(pw, g, cap)
        if pw.is_zero():
            break
        acc = acc + pw
    return MonomialSeries(g.space, acc.terms, cap)


def majorant(f: MonomialSeries) -> MonomialSeries:
    """Coefficient-wise absolute value; dominates f term by term."""
    return f.map_coefficients(abs)


def is_majorant_of(F: MonomialSeries, f: MonomialSeries) -> bool:
    """True iff F has nonnegative coefficients dominating |coefficients of f|."""
    if F.space != f.space:
        raise SpaceMismatchError("variable spaces differ")
    for alpha, C in F.terms.items():
        if C < 0:
            return False
    for alpha in set(f.terms) | set(F.terms):
        if abs(f.terms.get(alpha, 0)) > F.terms.get(alpha, 0):
            return False
    return True


def geometric_series(num_vars: int, cap: int, limit: int = 2_000_000) -> MonomialSeries:
    """All-ones coefficients on every index of degree <= cap (truncated geometric)."""
    space = tuple("x%d" % (i + 1) for i in range(num_vars))
    terms = {alpha: 1 for alpha in enumerate_multiindices(num_vars, cap, limit)}
    return MonomialSeries(space, terms, cap)


def geometric_degree_layers(values, cap: int) -> tuple[list, list]:
    """Per-degree sums of the all-ones series at the given point.

    ``layers[d]`` is  sum_{|alpha| = d} prod values[i]^alpha_i, computed by a
    degree-indexed convolution that never materializes the term set, so it
    stays cheap even when the enumeration count is astronomical.  The
    second list carries the absolute-value version.
    """
    layers = [1.0] + [0.0] * cap
    abs_layers = [1.0] + [0.0] * cap
    for v in values:
        v = float(v)
        nxt = layers[:]
        nxt_abs = abs_layers[:]
        for d in range(1, cap + 1):
            pw = v
            apw = abs(v)
            for e in range(1, d + 1):
                nxt[d] += layers[d - e] * pw
                nxt_abs[d] += abs_layers[d - e] * apw
                pw *= v
                apw *= abs(v)
        layers, abs_layers = nxt, nxt_abs
    return layers, abs_layers


def eval_geometric_truncated(values, cap: int) -> tuple[float, float]:
    """(value, abs_partial) of the all-ones series, via the layer convolution."""
    layers, abs_layers = geometric_degree_layers(values, cap)
    return math.fsum(layers), math.fsum(abs_layers)


# ----------------------------------------------------------------------
# evaluation points with infinite tails
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GeometricRule:
    """Closed-form coordinates  value(i) = coeff * ratio**i."""

    coeff: float
    ratio: float

    def value(self, i: int) -> float:
        return self.coeff * self.ratio**i

    def values(self, idx):
        import numpy as np

        return self.coeff * np.power(float(self.ratio), np.asarray(idx, dtype=float))

    def abs_tail_sum(self, after: int) -> float:
        """Upper bound on sum_{i > after} |value(i)|, inf when divergent."""
        r = abs(self.ratio)
        if r >= 1.0:
            return math.inf
        return abs(self.coeff) * r ** (after + 1) / (1.0 - r)

    def reciprocal_p_value(self, i: int, p: float) -> float:
        # computed in decayed form so huge coordinates never overflow
        return abs(self.coeff) ** (-p) * abs(self.ratio) ** (-p * i)

    def reciprocal_p_tail(self, after: int, p: float) -> float:
        """Upper bound on sum_{i > after} 1/|value(i)|**p, inf when divergent."""
        r = abs(self.ratio) ** (-p)
        if r >= 1.0:
            return math.inf
        return abs(self.coeff) ** (-p) * r ** (after + 1) / (1.0 - r)


@dataclass(frozen=True)
class PowerRule:
    """Closed-form coordinates  value(i) = coeff * i**exponent  (i >= 1)."""

    coeff: float
    exponent: float

    def value(self, i: int) -> float:
        if i < 1:
            raise ValueError("power rule is defined for indices >= 1")
        return self.coeff * float(i) ** self.exponent

    def values(self, idx):
        import numpy as np

        return self.coeff * np.power(np.asarray(idx, dtype=float), self.exponent)

    def abs_tail_sum(self, after: int) -> float:
        q = self.exponent
        if q >= -1.0:
            return math.inf if self.coeff != 0 else 0.0
        # integral comparison for the decreasing tail
        return abs(self.coeff) * max(after, 1) ** (q + 1) / (-q - 1)

    def reciprocal_p_value(self, i: int, p: float) -> float:
        return abs(self.coeff) ** (-p) * float(max(i, 1)) ** (-self.exponent * p)

    def reciprocal_p_tail(self, after: int, p: float) -> float:
        qp = self.exponent * p
        if qp <= 1.0:
            return math.inf
        return abs(self.coeff) ** (-p) * max(after, 1) ** (1 - qp) / (qp - 1)


@dataclass(frozen=True)
class ConstantRule:
    """All remaining coordinates equal to one constant."""

    coeff: float

    def value(self, i: int) -> float:
        return self.coeff

    def values(self, idx):
        import numpy as np

        return np.full(len(idx), float(self.coeff))

    def abs_tail_sum(self, after: int) -> float:
        return 0.0 if self.coeff == 0 else math.inf

    def reciprocal_p_value(self, i: int, p: float) -> float:
        return math.inf if self.coeff == 0 else abs(self.coeff) ** (-p)

    def reciprocal_p_tail(self, after: int, p: float) -> float:
        return math.inf


@dataclass(frozen=True)
class PointOracle:
    """A point with finitely many explicit coordinates and a closed-form tail.

    ``tail_p`` declares the exponent for which  sum 1/|x_i|^p  is claimed
    finite, with ``tail_bound`` the declared bound; the claim is checked
    numerically up to ``check_index`` plus the rule's analytic remainder.
    """

    explicit: dict = field(default_factory=dict)
    tail_rule: object = None
    tail_p: float = 1.0
    tail_bound: float = math.inf
    check_index: int = DEFAULT_TAIL_CHECK_INDEX

    def __post_init__(self):
        if self.tail_p <= 0:
            raise ValueError("tail_p must be positive")

    def value(self, i: int) -> float:
        if i in self.explicit:
            return float(self.explicit[i])
        if self.tail_rule is None:
            raise TailBoundError("coordinate %d has no explicit value and no tail rule" % i)
        v = self.tail_rule.value(i)
        if v == 0:
            raise TailBoundError("tail rule produced a zero coordinate at index %d" % i)
        return float(v)

    def reciprocal_p_partial(self) -> tuple[float, float]:
        """(partial sum up to check_index, analytic tail bound) of sum 1/|x_i|^p.

        Without a tail rule the oracle is a finite explicit point and only the
        explicit coordinates contribute.
        """
        if self.tail_rule is None:
            total = 0.0
            for v in self.explicit.values():
                if v == 0:
                    return math.inf, math.inf
                total += 1.0 / abs(v) ** self.tail_p
            return total, 0.0
        tail = self.tail_rule.reciprocal_p_tail(self.check_index, self.tail_p)
        if not math.isfinite(tail):
            return math.inf, math.inf
        first = 1 if isinstance(self.tail_rule, PowerRule) else 0
        total = 0.0
        for i in range(first, self.check_index + 1):
            if i in self.explicit:
                v = self.explicit[i]
                if v == 0:
                    return math.inf, math.inf
                total += 1.0 / abs(v) ** self.tail_p
            else:
                total += self.tail_rule.reciprocal_p_value(i, self.tail_p)
        return total, tail

    def tail_check(self) -> tuple[bool, float]:
        """Whether the checked sum stays within the declared bound."""
        partial, tail = self.reciprocal_p_partial()
        total = partial + tail
        return total <= self.tail_bound, total


def rule_from_json_dict(data: dict):
    kind = data["kind"]
    if kind == "geometric":
        return GeometricRule(float(data["coeff"]), float(data["ratio"]))
    if kind == "power":
        return PowerRule(float(data["coeff"]), float(data["exponent"]))
    if kind == "constant":
        return ConstantRule(float(data["coeff"]))
    raise ValueError("unknown tail rule kind %r" % kind)


def oracle_from_json_dict(data: dict) -> PointOracle:
    explicit = {int(i): float(v) for i, v in data.get("explicit", {}).items()}
    rule = rule_from_json_dict(data["tail_rule"]) if data.get("tail_rule") else None
    return PointOracle(
        explicit=explicit,
        tail_rule=rule,
        tail_p=float(data.get("tail_p", 1.0)),
        tail_bound=float(data.get("tail_bound", math.inf)),
        check_index=int(data.get("check_index", DEFAULT_TAIL_CHECK_INDEX)),
    )


def eval_truncated(f: MonomialSeries, x: PointOracle, cap: int) -> tuple[float, float]:
    """Evaluate the truncated expansion at an explicit point.

    Returns ``(value, abs_partial)`` where the second entry is the graded
    absolute partial sum (nondecreasing in ``cap``).
    """
    value = 0.0
    abs_part = 0.0
    for alpha, c in f.terms.items():
        if alpha.degree > cap:
            continue
        term = float(c)
        for i, e in alpha.entries:
            term *= x.value(i) ** e
        value += term
        abs_part += abs(term)
    return value, abs_part


@dataclass
class ConvergenceCertificate:
    """Numeric (not analytic) evidence of absolute convergence.

    ``partial_sums[d]`` is the absolute sum over all stored terms of degree
    <= d, evaluated at the reciprocal point ``h_i = 1/x_i`` of the near-
    infinity witness ``x``; the tail claim  sum 1/|x_i|^p <= tail_bound  is
    checked alongside.  Success is a bounded-monotone-partial-sums report,
    never a proof.
    """

    p: float
    witness: PointOracle
    partial_sums: list
    bound: float
    max_degree_checked: int
    success: bool
    tail_total: float


def certify_convergence(
    f: MonomialSeries, p: float, x: PointOracle, cap: int, bound: float
) -> ConvergenceCertificate:
    """Graded absolute partial sums of f at the reciprocal of the witness point."""
    if x.tail_p != p:
        raise ValueError("witness tail_p %r does not match requested p %r" % (x.tail_p, p))
    tail_ok, tail_total = x.tail_check()

    by_degree = {}
    for alpha, c in f.terms.items():
        if alpha.degree > cap:
            continue
        term = abs(float(c))
        for i, e in alpha.entries:
            term *= abs(1.0 / x.value(i)) ** e
        by_degree[alpha.degree] = by_degree.get(alpha.degree, 0.0) + term
    top = min(cap, max(by_degree, default=0))
    sums = []
    running = 0.0
    for d in range(top + 1):
        running += by_degree.get(d, 0.0)
        sums.append(running)
    ok = tail_ok and all(s <= bound for s in sums) and math.isfinite(running)
    return ConvergenceCertificate(
        p=p,
        witness=x,
        partial_sums=sums,
        bound=bound,
        max_degree_checked=top,
        success=ok,
        tail_total=tail_total,
    )


def homogeneous_abs_sums(f: MonomialSeries, values) -> list[float]:
    """Per-degree absolute sums |c_alpha h^alpha| at an explicit point.

    ``values`` is indexed by variable position.  Used by the empirical
    ratio test on computed solution coefficients.
    """
    by_degree: dict[int, float] = {}
    for alpha, c in f.terms.items():
        term = abs(float(c))
        for i, e in alpha.entries:
            term *= abs(float(values[i])) ** e
        by_degree[alpha.degree] = by_degree.get(alpha.degree, 0.0) + term
    top = max(by_degree, default=0)
    return [by_degree.get(d, 0.0) for d in range(top + 1)]


def series_count_guard(num_vars: int, cap: int, limit: int = 2_000_000) -> int:
    """Validate that a dense enumeration at this size is feasible."""
    n = count_multiindices(num_vars, cap)
    if n > limit:
        raise TermBudgetError("%d terms exceed the %d-term budget" % (n, limit))
    return n
