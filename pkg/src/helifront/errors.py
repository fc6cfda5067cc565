"""Exception hierarchy.

``ValidationError`` covers bad input (scene files, domain violations,
precondition failures); ``NumericError`` covers runtime numerical failures
(continuation folds, non-convergence).  The CLI maps these onto exit codes
3 and 4 respectively.
"""

from __future__ import annotations

__all__ = [
    "HelifrontError",
    "ValidationError",
    "NumericError",
    "ParseError",
    "UnknownIdentifierError",
    "EvalDomainError",
    "NonSmoothError",
    "GridTooCoarseError",
    "SeedNotRootError",
    "FoldDetected",
    "LegendreConditionError",
    "SingularCurveNeedsExplicitNu",
    "EllVanishesError",
    "XiVanishesError",
    "X1VanishesError",
    "XBarVanishesError",
    "KFVanishesError",
    "DiscriminantNegativeError",
    "NotIsolatedError",
    "OrderCapError",
    "NeedsPhiOrderError",
]


class HelifrontError(Exception):
    """Base class for all package errors."""

    def payload(self) -> dict:
        """Machine-readable form used by the CLI error channel."""
        return {"error": type(self).__name__, "message": str(self)}


class ValidationError(HelifrontError):
    pass


class NumericError(HelifrontError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, offset: int, expected: tuple = ()):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.expected = tuple(expected)

    def payload(self) -> dict:
        d = super().payload()
        d["offset"] = self.offset
        d["expected"] = list(self.expected)
        return d


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        ParseError.__init__(
            self, f"unknown identifier {name!r}", offset, expected=("t", "pi", "e", "function")
        )
        self.name = name


class EvalDomainError(ValidationError):
    def __init__(self, message: str, subexpr: str = ""):
        super().__init__(f"{message}: {subexpr}" if subexpr else message)
        self.subexpr = subexpr


class NonSmoothError(ValidationError):
    pass


class GridTooCoarseError(ValidationError):
    pass


class SeedNotRootError(NumericError):
    pass


class FoldDetected(NumericError):
    """Raised only when a caller demands a complete branch; plain tracking
    reports a partial branch instead."""


class LegendreConditionError(ValidationError):
    def __init__(self, message: str, worst_t: float, residual: float):
        super().__init__(f"{message} (worst at t={worst_t:.6g}, residual {residual:.3g})")
        self.worst_t = worst_t
        self.residual = residual


class SingularCurveNeedsExplicitNu(ValidationError):
    pass


class EllVanishesError(ValidationError):
    pass


class XiVanishesError(ValidationError):
    def __init__(self, message: str, where: list):
        super().__init__(message)
        self.where = list(where)

    def payload(self) -> dict:
        d = super().payload()
        d["where"] = self.where
        return d


class X1VanishesError(XiVanishesError):
    pass


class XBarVanishesError(XiVanishesError):
    pass


class KFVanishesError(XiVanishesError):
    pass


class DiscriminantNegativeError(ValidationError):
    pass


class NotIsolatedError(ValidationError):
    pass


class OrderCapError(ValidationError):
    pass


class NeedsPhiOrderError(ValidationError):
    pass
