"""Exception types shared across the package."""


class InfdimError(Exception):
    """Base class for package-specific failures."""


class SpaceMismatchError(InfdimError):
    """Two series over different variable spaces were combined."""


class FormalConvergenceError(InfdimError):
    """A substitution would need infinitely many coefficients of a truncated series."""


class TailBoundError(InfdimError):
    """An infinite tail was required but no finite analytic bound is available."""


class TermBudgetError(InfdimError):
    """A computation would exceed the configured term-count budget."""


class WeightSearchError(InfdimError):
    """No weight scheme on the search grid certified the required bound."""


class CertificationError(InfdimError):
    """A numeric convergence certificate could not be established."""
