"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage/config problems exit 2,
verification failures exit 3, file I/O and format problems exit 4.
"""

from __future__ import annotations


class ShanksLabError(Exception):
    """Base class for all package errors."""


class DomainError(ShanksLabError, ValueError):
    """Argument outside the supported mathematical domain."""


class PoleError(DomainError):
    """Evaluation requested too close to the pole at s = 1."""


class AccuracyError(ShanksLabError, ArithmeticError):
    """Requested accuracy cannot be certified with the given parameters."""


class SieveLimitError(DomainError):
    """Arithmetic query beyond the sieve's configured limit."""


class InsufficientDataError(DomainError):
    """Not enough zeros below the requested height for a stable statistic."""


class MissedZeroError(ShanksLabError, RuntimeError):
    """Scan could not reconcile sign changes with the expected zero count."""

    def __init__(self, message: str, block: tuple[float, float] | None = None,
                 expected: int | None = None, found: int | None = None):
        super().__init__(message)
        self.block = block
        self.expected = expected
        self.found = found


class TableFormatError(ShanksLabError, ValueError):
    """Malformed zero-table file; carries the offending line/offset."""

    def __init__(self, message: str, *, line: int | None = None,
                 offset: int | None = None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class VerificationError(ShanksLabError, RuntimeError):
    """A table failed verification."""


class ConfigError(ShanksLabError, ValueError):
    """Bad CLI flag or config-file entry (usage error)."""
