"""Exception types shared across the package."""


class RegfactorError(Exception):
    """Base class for all errors raised by this package."""


class TooLarge(RegfactorError):
    """Input exceeds a hard size bound of a brute-force routine."""


class Infeasible(RegfactorError):
    """No graph with the requested parameters exists (e.g. odd d*n)."""


class HypothesisViolation(RegfactorError):
    """Inputs do not satisfy the hypotheses of the invoked overlay mode."""


class DegenerateDensity(RegfactorError):
    """Edge density is 0 or 1, so standardized edge variables are undefined."""


class ShapeUnsupported(RegfactorError):
    """Shape lies outside the family for which the quantity is defined."""


class ShapeTooLargeForEnsemble(RegfactorError):
    """Shape has more vertices than the ambient graph."""


class StarShape(RegfactorError):
    """Star counts are deterministic; no variance prediction exists."""


class InsufficientData(RegfactorError):
    """Not enough samples to compute the requested statistic."""


class DomainViolation(RegfactorError):
    """Numeric input lies outside the stated domain of an inequality."""


class PoleAtEvaluation(RegfactorError):
    """A symbolic coefficient has a pole at the evaluation point."""


class Unsupported(RegfactorError):
    """Requested parameter is outside the implemented range."""


class IoFailure(RegfactorError):
    """Report emission failed."""
