"""Exception hierarchy shared across the package.

Two error classes matter operationally: configuration problems
(:class:`ConfigError`, bad user input) and computational refusals
(:class:`EnumerationLimitError`, the requested computation would exceed the
enumeration budget).  The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class CodescoutError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CodescoutError, ValueError):
    """Invalid configuration or input (bad parameters, malformed files)."""


class EnumerationLimitError(CodescoutError):
    """The requested exhaustive computation exceeds the supported size."""


class InvariantViolationError(CodescoutError, ValueError):
    """A structural invariant failed (corrupt profile or internal bug)."""
