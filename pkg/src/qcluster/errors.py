"""Exception types raised across the package."""
from __future__ import annotations


class QClusterError(Exception):
    """Base class for engine errors."""


class DivisionFailure(QClusterError, ArithmeticError):
    pass


class NonMonomialInverse(QClusterError, ArithmeticError):
    pass


class TorusMismatch(QClusterError, ValueError):
    pass


class NotSkew(QClusterError, ValueError):
    pass


class NotCompatible(QClusterError, ValueError):
    pass


class NoIntegralSolution(QClusterError, ValueError):
    pass


class InvalidTriangulation(QClusterError, ValueError):
    pass


class CrossingChords(InvalidTriangulation):
    pass


class NotMaximal(InvalidTriangulation):
    pass


class PuncturedSurface(InvalidTriangulation):
    pass


class TorusOnePointExcluded(QClusterError, ValueError):
    pass


class NotAnInternalArc(QClusterError, ValueError):
    pass


class BudgetExceeded(QClusterError, RuntimeError):
    pass


class NotAnArc(BudgetExceeded):
    """The flip search ran out of states: the string belongs to no arc."""


class InvalidString(QClusterError, ValueError):
    pass


class MissingArrow(InvalidString):
    pass


class RelationViolated(InvalidString):
    pass


class Backtrack(InvalidString):
    pass


class TransportError(QClusterError, RuntimeError):
    """An internal consistency check of the weight transport failed."""


class UnclassifiableSegment(QClusterError, RuntimeError):
    pass


# name used for exhausted flip searches
SearchExhausted = BudgetExceeded
