"""Exception types shared across the package."""
from __future__ import annotations

from .algebra import DimensionMismatch, SingularMatrixError  # re-exported


class NcratError(Exception):
    """Base class for package-specific failures."""


class ExprSyntaxError(NcratError, SyntaxError):
    def __init__(self, message: str, pos: int | None = None, expected: str | None = None):
        self.pos = pos
        self.expected = expected
        where = f" at position {pos}" if pos is not None else ""
        exp = f" (expected {expected})" if expected else ""
        super().__init__(f"{message}{where}{exp}")


class ShapeError(NcratError, ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message}" + (f" [at {path}]" if path else ""))


class GenerationFailed(NcratError):
    pass


class NotInDomain(NcratError, ArithmeticError):
    """The evaluation point lies outside the domain of regularity."""

    def __init__(self, path: str, size: int | tuple):
        self.path = path
        self.size = size
        super().__init__(f"singular inverse at node {path or '<root>'} (size {size})")


class NotRegularAtZero(NcratError, ArithmeticError):
    def __init__(self, path: str = ""):
        self.path = path
        super().__init__(f"expression is not regular at zero (inverse at {path or '<root>'})")


class SingularConstantTerm(NcratError, ArithmeticError):
    pass


class InsufficientOrder(NcratError, ValueError):
    pass


class RankMismatch(NcratError, ValueError):
    pass


class NotMinimal(NcratError, ValueError):
    pass


class ShapeMismatch(ShapeError):
    pass


__all__ = [
    "NcratError", "ExprSyntaxError", "ShapeError", "ShapeMismatch", "GenerationFailed",
    "NotInDomain", "NotRegularAtZero", "SingularConstantTerm", "InsufficientOrder",
    "RankMismatch", "NotMinimal", "DimensionMismatch", "SingularMatrixError",
]
