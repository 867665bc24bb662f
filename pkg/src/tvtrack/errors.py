"""Exception types shared across the package."""


class TvTrackError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(TvTrackError):
    """A factorization pivot fell below the SPD threshold.

    Signals that the strong-convexity assumption is violated at the
    query point rather than a numerical issue to be papered over.
    """


class MissingConstants(TvTrackError):
    """An operation needed smoothness constants the objective lacks."""


class MissingDerivative(TvTrackError):
    """A derivative evaluator required by the chosen mode is absent."""


class DegenerateInterval(TvTrackError):
    """Backward difference requested over a (near-)zero time interval."""


class NonFinite(TvTrackError):
    """An iterate left the finite range; carries the partial log if any."""

    def __init__(self, message, partial_log=None):
        super().__init__(message)
        self.partial_log = partial_log


class Infeasible(TvTrackError):
    """The computation budget rules out the variant at this sampling period."""


class InvalidHybridC(TvTrackError):
    """Hybrid switch constant below the admissible threshold."""


class InadmissibleRegime(TvTrackError):
    """The contraction/inflation product is >= 1; the h^2 regime is unavailable."""


class QuadraticProblem(TvTrackError):
    """Newton analysis is degenerate: the Hessian is constant (C1 = 0)."""


class NoConvergence(TvTrackError):
    """The oracle root finder failed to converge within its iteration cap."""


class TooShort(TvTrackError):
    """A trajectory log has no samples beyond the warm-up cutoff."""


class NonPositive(TvTrackError):
    """Slope fitting received a non-positive period or error value."""


class ConfigError(TvTrackError):
    """A configuration file failed validation."""
