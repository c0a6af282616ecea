"""Exception types raised across the engine.

Every error carries a stable ``code`` (its class name) so the wire protocol
and CLI can name the violation without string matching on messages.
"""

from __future__ import annotations


class PoiseError(Exception):
    """Base class for all engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class MalformedRecord(PoiseError):
    """Input line is not valid JSON or not a JSON object."""


class SchemaViolation(PoiseError):
    """Record parsed but violates the frame/session schema."""


class NonFiniteCoordinate(PoiseError):
    """A landmark coordinate is NaN or infinite."""


class NonMonotonicTimestamp(PoiseError):
    """Frame timestamp does not strictly increase within a session."""


class DegenerateGeometry(PoiseError):
    """Landmark geometry collapsed below the tolerance for a measurement."""

    def __init__(self, message: str, feature: str | None = None):
        super().__init__(message)
        self.feature = feature


class ZeroInterval(PoiseError):
    """Velocity requested over a non-positive time interval."""


class InsufficientFrames(PoiseError):
    """Stream ended before enough frames were collected."""


class NotCalibrated(PoiseError):
    """Windowed statistics requested before neutral-pose calibration finished."""


class EmptySession(PoiseError):
    """Session contains no frames/reports."""


class NegativeSpeed(PoiseError):
    """Hand speed input below zero."""


class NegativeRate(PoiseError):
    """Per-minute rate input below zero."""


class AllWeightsZero(PoiseError):
    """Aggregation weights sum to zero."""


class ConfigError(PoiseError):
    """Configuration file invalid; message names the offending key."""
