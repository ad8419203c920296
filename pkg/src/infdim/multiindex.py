"""Finitely supported exponent vectors and their graded-lex enumeration.

A multi-index is stored sparsely as a tuple of ``(variable, exponent)``
pairs with strictly increasing variable positions and strictly positive
exponents; the empty tuple is the zero index.  Variables are 0-based
positions into the owning series' variable space.
"""

from __future__ import annotations

from math import comb

from .errors import TermBudgetError


class MultiIndex:
    """Immutable sparse exponent vector."""

    __slots__ = ("entries", "degree", "_hash")

    def __init__(self, entries=()):
        entries = tuple(sorted((int(i), int(e)) for i, e in entries if e))
        last = -1
        for i, e in entries:
            if i < 0:
                raise ValueError("variable positions must be nonnegative")
            if e < 0:
                raise ValueError("exponents must be nonnegative")
            if i == last:
                raise ValueError("duplicate variable position %d" % i)
            last = i
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "degree", sum(e for _, e in entries))
        object.__setattr__(self, "_hash", hash(entries))

    def __setattr__(self, *args):
        raise AttributeError("MultiIndex is immutable")

    @classmethod
    def single(cls, var: int, exp: int = 1) -> "MultiIndex":
        return cls(((var, exp),))

    @classmethod
    def from_dense(cls, exps) -> "MultiIndex":
        return cls((i, e) for i, e in enumerate(exps) if e)

    def dense(self, num_vars: int):
        out = [0] * num_vars
        for i, e in self.entries:
            if i >= num_vars:
                raise ValueError("index uses variable %d beyond space size %d" % (i, num_vars))
            out[i] = e
        return tuple(out)

    def exponent(self, var: int) -> int:
        for i, e in self.entries:
            if i == var:
                return e
            if i > var:
                break
        return 0

    def max_var(self) -> int:
        """Largest variable position used, -1 for the zero index."""
        return self.entries[-1][0] if self.entries else -1

    def __mul__(self, other: "MultiIndex") -> "MultiIndex":
        """Exponent-wise sum (product of the underlying monomials)."""
        merged = dict(self.entries)
        for i, e in other.entries:
            merged[i] = merged.get(i, 0) + e
        return MultiIndex(merged.items())

    def shift(self, var: int, delta: int) -> "MultiIndex":
        """Add ``delta`` to one exponent (used by derivatives)."""
        new = dict(self.entries)
        val = new.get(var, 0) + delta
        if val < 0:
            raise ValueError("negative exponent after shift")
        if val == 0:
            new.pop(var, None)
        else:
            new[var] = val
        return MultiIndex(new.items())

    def grlex_key(self):
        """Sort key: graded, then within a degree the lower variables with
        higher exponents come first (classic grlex with x1 > x2 > ...)."""
        return (self.degree, tuple((i, -e) for i, e in self.entries))

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.entries:
            return "1"
        return "*".join(
            "x%d" % (i + 1) if e == 1 else "x%d^%d" % (i + 1, e) for i, e in self.entries
        )


ZERO_INDEX = MultiIndex()


def count_multiindices(num_vars: int, max_degree: int) -> int:
    """Number of multi-indices on ``num_vars`` variables with degree <= max_degree."""
    return comb(num_vars + max_degree, num_vars)


def enumerate_multiindices(num_vars: int, max_degree: int, limit: int = 2_000_000):
    """All multi-indices on variables 0..num_vars-1 with total degree <= max_degree.

    Returned in graded-lex order (degree first, then x1-major within a degree),
    without duplicates.  Raises :class:`TermBudgetError` when the count exceeds
    ``limit`` so accidental combinatorial explosions fail loudly.
    """
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    total = count_multiindices(num_vars, max_degree)
    if total > limit:
        raise TermBudgetError(
            "enumeration of %d multi-indices exceeds the limit %d" % (total, limit)
        )
    out = []
    for d in range(max_degree + 1):
        for alpha in _compositions(d, num_vars):
            out.append(MultiIndex.from_dense(alpha))
    assert len(out) == total
    return out


def _compositions(degree: int, parts: int):
    """Weak compositions of ``degree`` into ``parts`` slots, x1-major order."""
    if parts == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(degree - first, parts - 1):
            yield (first,) + rest


def iter_graded(indices) -> list:
    """Sort an iterable of multi-indices into canonical graded-lex order."""
    return sorted(indices, key=MultiIndex.grlex_key)


def multinomial_product(values, alpha: MultiIndex):
    """Evaluate a monomial: prod values[i] ** e over the index entries."""
    out = 1.0
    for i, e in alpha.entries:
        out *= values[i] ** e
    return out
