"""Shared defaults and error types."""

DEFAULT_SEED = 0xE5CAB0
DEFAULT_SAMPLES = 32
DEFAULT_TOLERANCE = 1e-12
DEFAULT_PRIMES = 3


class InputError(ValueError):
    """Bad user input: malformed polynomial, unreadable grid, violated precondition."""


class InvariantViolation(AssertionError):
    """A theorem-backed runtime assertion failed; always indicates a bug."""
