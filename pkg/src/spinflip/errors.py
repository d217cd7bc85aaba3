"""Exception hierarchy for the spinflip package.

Configuration problems and numeric regime problems are kept apart because the
command line maps them to different exit codes (2 and 3 respectively).
"""


class SpinflipError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SpinflipError):
    """Invalid run configuration. Carries the full list of violations."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class RegimeError(SpinflipError):
    """An operation was requested outside its domain of validity."""


class DegenerateGyromagneticError(RegimeError):
    """g = 1 makes the resonance quantities (kappa, theta, omega_s) diverge."""


class FrameUnreachableError(RegimeError):
    """The average-rest-frame fixed point could not be bracketed or refined."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DegenerateOrbitError(RegimeError):
    """Squared modulus equal to 1: the orbit loses periodicity (K diverges)."""


class StepSizeError(RegimeError):
    """Propagation step so large that a single step rotates the spin by >= pi."""


class NoResonanceError(RegimeError):
    """Resonance search requested for g <= 1 where no peak strength exists."""
