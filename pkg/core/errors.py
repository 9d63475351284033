"""Exception hierarchy shared by the kernel and the CLI."""

from typing import Any, Dict, Optional


class TwistkitError(Exception):
    """Base error. ``detail`` is what ends up in the CLI report."""

    def __init__(self, detail: str, witness: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(detail)
        self.detail = detail
        self.witness = witness


class StructuralError(TwistkitError):
    """Shape, degree or space mismatch."""


class PreconditionError(TwistkitError):
    """A stated precondition does not hold; ``residual`` holds the offending value."""

    def __init__(self, detail: str, residual: Any = None, witness: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(detail, witness)
        self.residual = residual


class SupportError(TwistkitError):
    """Window or finiteness certificate too small for the request."""


class InstabilityError(SupportError):
    """A requested convolution degree receives contributions from outside the window."""


class OneSidedError(TwistkitError):
    pass


class ConsistencyError(TwistkitError):
    """Column read-back did not reproduce the full bar morphism."""


class DocumentError(TwistkitError):
    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
