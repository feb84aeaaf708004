"""Exception types shared across the package."""


class DklmsError(Exception):
    """Base class for all package errors."""


class ShapeError(DklmsError):
    """Input arrays have incompatible shapes or dimensions."""


class DegenerateDataError(DklmsError):
    """Data has no usable spread, so bandwidth selection is undefined."""


class StateError(DklmsError):
    """Operation is invalid for the current filter or dictionary state."""


class ConfigError(DklmsError):
    """Invalid configuration value or combination of values."""


class TopologyError(DklmsError):
    """A connected network topology could not be constructed."""
