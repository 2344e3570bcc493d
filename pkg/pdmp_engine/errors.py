"""
Exception hierarchy for the PDMP engine.

Every error raised by the package derives from PDMPError so callers can
catch the whole family at once. Argument problems also derive from
ValueError, missing lookups from LookupError and numeric breakdowns from
ArithmeticError.
"""


class PDMPError(Exception):
    """Base class for all engine errors."""
    pass


# ---------------------------------------------------------------------------
# Generator algebra
# ---------------------------------------------------------------------------

class GeneratorValidationError(PDMPError, ValueError):
    """Raised when a switching generator violates one of its invariants."""
    pass


class RowSumNonzeroError(GeneratorValidationError):
    """A row of the intensity matrix does not sum to zero."""
    pass


class NegativeOffDiagonalError(GeneratorValidationError):
    """An off-diagonal intensity is negative."""
    pass


class ReducibleError(GeneratorValidationError):
    """The transition graph of the intensity matrix is not strongly connected."""
    pass


class NonpositiveSpeedError(GeneratorValidationError):
    """A speed is zero or negative."""
    pass


class SpeedOrderError(GeneratorValidationError):
    """Speeds are repeated or not stored in a strictly monotone order."""
    pass


class SingularSystemError(PDMPError, ArithmeticError):
    """The stationary linear system is rank deficient beyond its null direction."""
    pass


class MissingKernelError(PDMPError, LookupError):
    """No jump kernel is declared for a speed."""
    pass


class NonpositiveDriftError(PDMPError, ValueError):
    """The averaged drift passed to the hitting-time recursion is not positive."""
    pass


class XiAboveBoundaryError(PDMPError, ValueError):
    """A post-jump value is not strictly below the boundary."""
    pass


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

class AbsorbingStateError(PDMPError, ValueError):
    """The chain entered a state with zero exit rate."""
    pass


class OutOfHorizonError(PDMPError, ValueError):
    """A path was evaluated outside [0, horizon]."""
    pass


class ConfigInvalidError(PDMPError, ValueError):
    """A process configuration violates its invariants."""
    pass


class KernelSupportViolationError(ConfigInvalidError):
    """A jump kernel puts mass outside its allowed interval."""
    pass


class NonfiniteTimeError(PDMPError, ArithmeticError):
    """An event time came out as NaN or infinite."""
    pass


class HorizonMismatchError(PDMPError, ValueError):
    """Two paths compared by a distance do not share a horizon."""
    pass


# ---------------------------------------------------------------------------
# Flows
# ---------------------------------------------------------------------------

class NonIntegrableFError(ConfigInvalidError):
    """1/F is not integrable on (m, c): G(c) is not finite."""
    pass


class RoundTripFailureError(ConfigInvalidError):
    """G and its inverse do not compose to the identity on the test grid."""
    pass


# ---------------------------------------------------------------------------
# Validation and experiments
# ---------------------------------------------------------------------------

class EmptyInputError(PDMPError, ValueError):
    """An estimator received no data."""
    pass


class WindowContainsHitError(PDMPError, ValueError):
    """A drift window overlaps a boundary hit."""
    pass


class UnsupportedKernelError(PDMPError, ValueError):
    """A closed-form evaluator received a kernel it cannot collapse."""
    pass


class ConfigError(PDMPError):
    """Raised when an experiment config file cannot be parsed or violates the schema."""
    pass


class ValidationFailureError(PDMPError):
    """Raised when an acceptance check requested by an experiment fails."""
    pass


class InconsistentSummariesError(PDMPError, ValueError):
    """Summary files to merge do not share an estimator set."""
    pass
