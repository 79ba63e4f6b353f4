"""Exception hierarchy shared by every module."""


class HHGStateError(Exception):
    """Base class for all package errors."""


class ModeError(HHGStateError, ValueError):
    """Unknown, duplicated or mismatched mode labels."""


class DegenerateDepletion(HHGStateError, ValueError):
    """Zero depletion: the conditioned state vanishes identically."""


class InconsistencyError(HHGStateError, ArithmeticError):
    """A quantity left its physically allowed range beyond rounding."""


class TruncationTooSmall(HHGStateError, ValueError):
    """Fock cutoff below the tail-mass rule for the requested amplitude."""


class ConfigError(HHGStateError, ValueError):
    """Invalid or unknown run-configuration entries."""
