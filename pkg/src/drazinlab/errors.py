"""Exception hierarchy shared by every drazinlab module."""

from __future__ import annotations


class DrazinLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(DrazinLabError, ValueError):
    pass


class FieldMismatch(DrazinLabError, ValueError):
    pass


class Singular(DrazinLabError, ArithmeticError):
    pass


class NumericalRankAmbiguous(DrazinLabError, ArithmeticError):
    """A thresholded rank decision fell too close to the tolerance to trust."""


class NotGroupInvertible(DrazinLabError, ArithmeticError):
    pass


class PreconditionFailed(DrazinLabError):
    """An entwining condition required by a formula does not hold.

    The failing :class:`~drazinlab.identities.ConditionReport` is kept on
    ``report`` so callers can print which equalities broke.
    """

    def __init__(self, condition_id: str, report=None):
        self.condition_id = condition_id
        self.report = report
        super().__init__(f"precondition {condition_id} does not hold")


class ResolventSingular(DrazinLabError, ArithmeticError):
    pass


class Infeasible(DrazinLabError):
    pass


class Exhausted(DrazinLabError):
    pass
