"""Exception and warning types shared across the package."""


class HydrokiteError(Exception):
    """Base class for all package errors."""


class ConfigError(HydrokiteError):
    """Configuration file or override is malformed, incomplete, or has unknown keys."""


class DegenerateRange(HydrokiteError):
    """An angle-of-attack search range produced no positive lift to optimize."""


class GeometryError(HydrokiteError):
    """A structural cross-section is geometrically self-intersecting or impossible."""


class ThinWallViolation(HydrokiteError):
    """Wall thickness too large for thin-wall section formulas to apply."""


class Infeasible(HydrokiteError):
    """No design within the stated bounds satisfies the constraints.

    Carries an optional ``detail`` dict describing the violated constraint(s).
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class EmptySet(HydrokiteError):
    """A requested power level is unreachable anywhere in the design box."""


class RankDeficient(HydrokiteError):
    """Least-squares surface fit has too few independent samples for the degree."""


class NumericBlowup(HydrokiteError):
    """Simulation state left the trusted numeric envelope (NaN or runaway norm)."""


class SimDiverged(HydrokiteError):
    """A simulation run ended without producing a usable lap."""


class PathLost(HydrokiteError):
    """Kite strayed beyond the allowed interior angle from the reference path."""


class EmptyLap(HydrokiteError):
    """A lap time series is empty or spans zero duration."""


class NoFeasibleIndividual(HydrokiteError):
    """Genetic search finished without a single constraint-satisfying member."""


class NotPositiveDefinite(HydrokiteError):
    """A mass or covariance matrix lost positive definiteness."""


class DomainWarning(UserWarning):
    """Surrogate surface evaluated outside its fitted domain box."""


class NotConverged(UserWarning):
    """Iterative search hit its lap budget; best-so-far result is still returned."""
