"""Exceptions raised by the computation engine."""


class VerificationError(RuntimeError):
    """An internal consistency check failed (a computed object violates its own invariants)."""


class WindowError(ValueError):
    """A degree window is too small to certify any degree."""
