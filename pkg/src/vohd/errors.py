"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VohdError(Exception):
    """Base class for all errors raised by :mod:`vohd`."""


class DomainError(VohdError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """A special function was evaluated at one of its poles."""


class OrderRangeError(DomainError):
    """The variable order left the open interval (0, 1)."""


class DepthError(VohdError, ValueError):
    """More terms of a derivative sequence were requested than configured."""


class ExprSyntaxError(VohdError, ValueError):
    """Malformed expression source.

    :attr:`offset` is the byte offset into the source at which parsing failed.
    """

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    """An identifier that is neither ``t``, a constant nor a known function."""


class QuadratureError(VohdError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    :attr:`t` holds the evaluation point(s) that failed.
    """

    def __init__(self, message: str, t: float | None = None) -> None:
        super().__init__(message)
        self.t = t


class ConfigError(VohdError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""
