"""Exception hierarchy shared by every service.

Each error carries a stable ``code`` that the CLI reports when a computation
fails. Input-shaped failures also derive from ``ValueError`` and computational
failures from ``RuntimeError``.
"""


class MaslovCountError(Exception):
    """Base class for all domain errors."""

    code = "error"


class ContractViolationError(MaslovCountError, ValueError):
    """Shapes or dimensions of inputs do not match the contract."""

    code = "contract"


class AssumptionViolationError(MaslovCountError, ValueError):
    """A structural assumption on the system fails on the sampled data."""

    code = "assumption"

    def __init__(self, assumption: str, detail: str):
        self.assumption = assumption
        super().__init__(f"assumption ({assumption}) violated: {detail}")


class HyperbolicityError(MaslovCountError, ValueError):
    """An asymptotic matrix has an eigenvalue too close to the imaginary axis."""

    code = "hyperbolicity"


class EssentialSpectrumError(MaslovCountError, ValueError):
    """The spectral parameter is not below the essential-spectrum edge."""

    code = "essential-spectrum"


class AdmissibilityError(MaslovCountError, ValueError):
    """The spectral parameter falls inside an excluded range."""

    code = "admissibility"

    def __init__(self, message: str, ranges: list[tuple[float, float]] | None = None):
        self.ranges = ranges or []
        super().__init__(message)


class UnsupportedConfigurationError(MaslovCountError, ValueError):
    """The requested system or query is outside what the engine handles."""

    code = "unsupported"


class ConditioningError(MaslovCountError, RuntimeError):
    """A factor that should be well conditioned is numerically singular."""

    code = "conditioning"


class IntegrationAccuracyError(MaslovCountError, RuntimeError):
    """The frame integration lost the Lagrangian structure or failed outright."""

    code = "integration"


class TruncationError(MaslovCountError, RuntimeError):
    """No truncation half-width below the cap satisfies the policy."""

    code = "truncation"

    def __init__(self, criterion: str, detail: str):
        self.criterion = criterion
        super().__init__(f"truncation failed on {criterion}: {detail}")


class TrackingError(MaslovCountError, RuntimeError):
    """Eigenvalue tracking could not resolve a path segment."""

    code = "tracking"

    def __init__(self, message: str, segment: tuple[float, float] | None = None):
        self.segment = segment
        super().__init__(message)


class DegenerateCrossingError(MaslovCountError, RuntimeError):
    """An eigenvalue sits at -1 without a resolvable direction of motion."""

    code = "degenerate-crossing"


class ConsistencyError(MaslovCountError, RuntimeError):
    """Two computations that must agree do not."""

    code = "consistency"


class MonotonicityViolationError(MaslovCountError, RuntimeError):
    """A crossing against a monotone target has the wrong sign."""

    code = "monotonicity"


class OracleUnconvergedError(MaslovCountError, RuntimeError):
    """The finite-difference count changed under grid refinement."""

    code = "oracle-unconverged"
