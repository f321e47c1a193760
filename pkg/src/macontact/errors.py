"""Shared exception for internal consistency gates."""


class ConsistencyError(RuntimeError):
    """A structural identity the library guarantees failed to hold."""
