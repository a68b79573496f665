"""Exception hierarchy shared by every stage of the arbitrage pipeline."""

from enum import StrEnum


class ErrorCategory(StrEnum):
    """Coarse failure categories surfaced by the command line."""

    CONFIG = "config"
    IO = "io"
    SOLVE = "solve"
    AUDIT = "audit"


EXIT_CODES: dict[ErrorCategory, int] = {
    ErrorCategory.CONFIG: 2,
    ErrorCategory.IO: 3,
    ErrorCategory.SOLVE: 4,
    ErrorCategory.AUDIT: 5,
}


class ArbitrageError(Exception):
    """Base class for all errors raised by this package."""

    category: ErrorCategory = ErrorCategory.CONFIG

    @property
    def exit_code(self) -> int:
        """Process exit code associated with the error category."""
        return EXIT_CODES[self.category]


class ParameterError(ArbitrageError, ValueError):
    """A parameter file is unreadable, incomplete or violates an invariant."""


class RunConfigError(ArbitrageError, ValueError):
    """Command-line options are inconsistent or out of range."""


class PriceFileError(ArbitrageError, ValueError):
    """A price file does not describe exactly one price per hour."""


class ModelBuildError(ArbitrageError, ValueError):
    """An optimization model cannot be assembled from its inputs."""

    category = ErrorCategory.SOLVE


class PwlDomainError(ModelBuildError):
    """A piecewise-linear function does not cover the range of its variable."""


class ArtifactError(ArbitrageError, OSError):
    """An output artifact could not be written."""

    category = ErrorCategory.IO


class SolverError(ArbitrageError, RuntimeError):
    """A solver backend failed to start, run or report a solution."""

    category = ErrorCategory.SOLVE


class SimulationError(ArbitrageError, RuntimeError):
    """The single particle model left its domain of validity."""

    category = ErrorCategory.AUDIT


class StabilityError(SimulationError):
    """An explicit diffusion step exceeds the stability bound."""


class ConcentrationError(SimulationError):
    """A radial concentration left the interval [0, c_max]."""


class CalibrationError(SimulationError):
    """A calibration protocol could not be simulated cleanly."""


__all__ = [
    "EXIT_CODES",
    "ArbitrageError",
    "ArtifactError",
    "CalibrationError",
    "ConcentrationError",
    "ErrorCategory",
    "ModelBuildError",
    "ParameterError",
    "PriceFileError",
    "PwlDomainError",
    "RunConfigError",
    "SimulationError",
    "SolverError",
    "StabilityError",
]
