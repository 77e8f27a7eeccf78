"""Exception hierarchy for hblasso.
Every error raised on purpose by the package derives from HBLassoError, so callers
(and the CLI) can tell library failures apart from programming errors.
"""
from typing import Optional


class HBLassoError(Exception):
    """Base class for all hblasso errors."""


class DomainError(HBLassoError, ValueError):
    """A numeric argument lies outside the domain of a function or distribution."""


class ConfigError(HBLassoError, ValueError):
    """Invalid configuration value."""


class InsufficientSamplesError(HBLassoError, ValueError):
    """Too few draws to compute a summary or diagnostic."""


class DataError(HBLassoError, ValueError):
    """Malformed input data.
    Args:
        message (str): Description of the problem
        row (int, optional): 1-based data row (header excluded) of the offending cell
        column (str, optional): Column name of the offending cell
    """
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class SamplerError(HBLassoError):
    """Failure inside a Gibbs update.
    Args:
        message (str): Description of the failure
        step (str, optional): Label of the update that failed ("beta", "rho2", ...)
        iteration (int, optional): Zero-based iteration index
        sampler (str, optional): Name of the sampler
    """
    def __init__(self, message: str, step: Optional[str] = None,
                 iteration: Optional[int] = None, sampler: Optional[str] = None):
        self.message = message
        self.step = step
        self.iteration = iteration
        self.sampler = sampler
        super().__init__(message)

    def __str__(self) -> str:
        context = []
        if self.sampler is not None:
            context.append(f"sampler={self.sampler}")
        if self.iteration is not None:
            context.append(f"iteration={self.iteration}")
        if self.step is not None:
            context.append(f"step={self.step}")
        if not context:
            return self.message
        return f"{self.message} [{', '.join(context)}]"


class TimingError(HBLassoError):
    """Measured sampling times fall outside the expected ratio band."""
