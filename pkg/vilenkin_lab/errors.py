class VilenkinLabError(ValueError):
    """Base class for every error raised by vilenkin-lab."""


class ConfigError(VilenkinLabError):
    """Invalid radix sequence, resolution, or an M_N that overflows a machine word."""


class ConfigMismatchError(VilenkinLabError):
    """Operands were built on different group configurations."""


class DomainError(VilenkinLabError):
    """An argument lies outside the domain of the operation."""


class CapExceededError(VilenkinLabError):
    """A size cap from the settings would be exceeded."""


class FitError(VilenkinLabError):
    """A rate fit has too few usable grid points."""


class FormatError(VilenkinLabError):
    """A data file does not follow the expected text format."""
