"""Exceptions raised by renyirange."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

from renyirange.const import EXIT_INPUT_ERROR, EXIT_RANGE_ERROR, EXIT_VIOLATIONS


@dataclass(frozen=True)
class RenyiRangeError(Exception):
    """Base exception for renyirange."""

    message: str = field(default="Rényi range error")
    exit_code: ClassVar[int] = EXIT_VIOLATIONS

    def __str__(self) -> str:
        """Return the error message."""
        return self.message


@dataclass(frozen=True)
class InputError(RenyiRangeError):
    """Malformed input: unparseable values, non-normalized vectors, bad configuration."""

    message: str = field(default="Invalid input")
    exit_code: ClassVar[int] = EXIT_INPUT_ERROR


@dataclass(frozen=True)
class DomainError(RenyiRangeError):
    """Query outside the domain of an operation."""

    message: str = field(default="Domain error")
    exit_code: ClassVar[int] = EXIT_RANGE_ERROR


@dataclass(frozen=True)
class OutOfRangeError(RenyiRangeError):
    """Entropy value outside the attainable range.

    :param interval: The valid interval (in nats) when it is known.
    """

    message: str = field(default="Entropy value out of range")
    interval: tuple[float, float] | None = field(default=None)
    exit_code: ClassVar[int] = EXIT_RANGE_ERROR


@dataclass(frozen=True)
class ConsistencyError(RenyiRangeError):
    """An internal numerical consistency check failed."""

    message: str = field(default="Internal consistency check failed")
