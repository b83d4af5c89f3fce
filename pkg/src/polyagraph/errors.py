"""Exception types shared across the package."""


class PolyagraphError(Exception):
    """Base class for all polyagraph errors."""


class InvalidColor(PolyagraphError, ValueError):
    """A color index lies outside the range available at the given time."""


class CapExceeded(PolyagraphError, ValueError):
    """An exact computation was requested beyond its enumeration cap."""


class InsufficientData(PolyagraphError, ValueError):
    """Too few usable data points for the requested fit."""


class ScheduleParseError(PolyagraphError, ValueError):
    """A schedule string does not match the grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ScheduleRangeError(PolyagraphError, ValueError):
    """A schedule value is negative, or an evaluation time is out of range."""


class ConfigError(PolyagraphError, ValueError):
    """An experiment config document is malformed."""
