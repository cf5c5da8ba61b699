"""Exception hierarchy.

Every error raised deliberately by the library derives from :class:`BDPoissonError`,
so callers can catch the whole family at once.
"""


class BDPoissonError(Exception):
    """Base class for all library errors."""


class ConfigError(BDPoissonError, ValueError):
    """Malformed or invalid model/policy configuration."""


class RateDomain(BDPoissonError, ValueError):
    """A birth or death rate is nonpositive (or otherwise outside its domain)."""


class NonErgodic(BDPoissonError):
    """The chain fails the ergodicity check and no override was given."""


class TruncationOverflow(BDPoissonError):
    """The state cap was reached before the truncation tolerances were met."""


class ProbabilityUnderflow(BDPoissonError):
    """A stored steady-state probability is not representable in the working precision."""


class TabulatedRangeError(TruncationOverflow):
    """A tabulated model was asked for a state beyond its arrays."""


class MissingAnalyticForm(BDPoissonError):
    """An analytic value was requested for a model that has none."""


class MissingZeta(BDPoissonError):
    """No mean cost is available for an exact solve."""


class FrontierTooSmall(BDPoissonError, ValueError):
    """A backward frontier is below the requested range or beyond the tables."""


class InconclusiveConvergence(BDPoissonError):
    """A series neither stabilizes nor shows divergent growth within the frontier."""


class ZeroDenominator(BDPoissonError, ZeroDivisionError):
    """A relative error factor has a vanishing denominator."""


class RequiresFiniteTp0(BDPoissonError):
    """A limit prediction needs a finite mean passage time from steady state to 0."""


class CrossoverOrderError(BDPoissonError, AssertionError):
    """The crossover indices violate m <= M."""


class DomainError(BDPoissonError, ValueError):
    """Argument outside the domain of a special function or analytic formula."""
