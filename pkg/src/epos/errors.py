"""Shared exception types."""


class ValidationError(ValueError):
    """Bad user-supplied input: config, file contents, CLI arguments."""


class Graph6Error(ValidationError):
    """Malformed graph6 text."""


class InternalConsistencyError(RuntimeError):
    """An exact-arithmetic self-check failed; indicates a bug, never bad input."""
