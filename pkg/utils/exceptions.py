"""
Custom exception classes for the NLS numerical laboratory.

Every error carries the process exit code the CLI reports for it.

Author: Ahmad Yateem
"""


class NLSLabError(Exception):
    """Base exception class for the laboratory."""

    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(NLSLabError):
    """Exception raised when a parameter is out of range or malformed."""

    def __init__(self, message: str, field: str = None):
        self.field = field
        super().__init__(message, exit_code=2)


class ConfigError(NLSLabError):
    """Exception raised for unreadable or invalid run configurations."""

    def __init__(self, message: str, field: str = None, line: int = None, column: int = None):
        self.field = field
        self.line = line
        self.column = column
        super().__init__(message, exit_code=2)


class GridMismatchError(NLSLabError):
    """Exception raised when two fields live on different grids."""

    def __init__(self, message: str = "Fields are defined on different grids"):
        super().__init__(message)


class SchemeMismatchError(NLSLabError):
    """Exception raised when a step scheme cannot integrate a model."""

    def __init__(self, scheme: str, variant: str):
        self.scheme = scheme
        self.variant = variant
        super().__init__(f"Scheme {scheme} cannot integrate the {variant} model")


class IntegrationDivergenceError(NLSLabError):
    """Exception raised when an evolution produces non-finite values."""

    def __init__(self, message: str, time: float = None, step: int = None):
        self.time = time
        self.step = step
        super().__init__(message)


class ScaleCompatibilityError(NLSLabError):
    """Exception raised when a rescaling cannot be realized on a grid."""

    def __init__(self, message: str = "Scale is not compatible with the grid"):
        super().__init__(message)


class CutoffConstructionError(NLSLabError):
    """Exception raised when no admissible cutoff window exists."""

    def __init__(self, message: str, required_length: float = None):
        self.required_length = required_length
        super().__init__(message)


class HypothesisCheckError(NLSLabError):
    """Exception raised when an experiment's precondition does not hold."""

    def __init__(self, message: str):
        super().__init__(message)


class TrajectoryFormatError(NLSLabError):
    """Exception raised for malformed trajectory files."""

    def __init__(self, message: str, path: str = None):
        self.path = path
        super().__init__(message)


class UnsupportedVersionError(TrajectoryFormatError):
    """Exception raised for trajectory files with an unknown version."""

    def __init__(self, version: int, path: str = None):
        self.version = version
        super().__init__(f"Unsupported trajectory version {version}", path=path)


class ReportWriteError(NLSLabError):
    """Exception raised when a report cannot be written."""

    def __init__(self, message: str, path: str = None):
        self.path = path
        super().__init__(message)


class VerdictFailedError(NLSLabError):
    """Exception raised when an experiment or invariant check fails."""

    def __init__(self, message: str = "Verdict failed"):
        super().__init__(message, exit_code=1)
