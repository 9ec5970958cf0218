"""Exception hierarchy shared by every arplab module."""

from __future__ import annotations


class ARPError(Exception):
    """Base class for all arplab errors."""


class EmptyInstance(ARPError):
    pass


class NonPositiveValue(ARPError):
    pass


class InvalidPermutation(ARPError):
    pass


class WrongKind(ARPError):
    pass


class NonPositiveRate(ARPError):
    pass


class NegativeSuffix(ARPError):
    pass


class SizeCapExceeded(ARPError):
    pass


class GenerationFailed(ARPError):
    pass


class InvalidParam(ARPError):
    pass


class InsufficientData(ARPError):
    pass


class SearchTimeout(ARPError):
    """Raised when a search exceeds its wall-clock deadline."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class ParseError(ARPError):
    """Malformed instance file; the message carries line or field context."""
