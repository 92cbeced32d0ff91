"""Shared exception types."""


class InvariantError(RuntimeError):
    """An internal exact-equality check failed; indicates a bug, not bad input."""


class UnsupportedScaleError(RuntimeError):
    """The requested computation is beyond the supported desk scale."""
