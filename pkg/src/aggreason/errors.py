"""Exception hierarchy for aggreason."""

from typing import Optional


class AggreasonError(Exception):
    """Base class for every error raised by the library."""


class MonotonicityViolation(AggreasonError):
    """A bisection predicate turned out not to be monotone."""


class InvalidTolerance(AggreasonError, ValueError):
    """Tolerance settings cannot guarantee bisection convergence."""


class RangeError(AggreasonError, ValueError):
    """A membership or unit value lies outside [0, 1]."""


class UnknownName(AggreasonError, KeyError):
    """A connective, generator or similarity name is not registered."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class NotATNorm(AggreasonError):
    """The aggregation is required to be a t-norm."""


class NotADisjunctor(AggreasonError):
    """The aggregation is required to have annihilator 1."""


class NotACopula(AggreasonError):
    """The aggregation is required to be a copula."""


class InvalidGenerator(AggreasonError):
    """An f- or g-generator fails its monotonicity or boundary condition."""


class ConditionViolated(AggreasonError):
    """An implication fails the I(1, y) < 1 condition for y < 1."""


class UniverseMismatch(AggreasonError):
    """Fuzzy sets live on different universes."""


class DimensionMismatch(AggreasonError):
    """Relation shapes do not compose."""


class ArityMismatch(AggreasonError):
    """Input tuple size does not match the rule base arity."""


class BadScheme(AggreasonError):
    """Unknown similarity-based conclusion scheme."""


class ParseError(AggreasonError):
    """A problem file is not valid JSON or misses required fields."""

    def __init__(
        self, message: str, lineno: Optional[int] = None, colno: Optional[int] = None
    ) -> None:
        location = f" (line {lineno}, column {colno})" if lineno is not None else ""
        super().__init__(f"{message}{location}")
        self.lineno = lineno
        self.colno = colno


class UnresolvedReference(AggreasonError):
    """A problem file refers to an undefined name."""


class HypothesisViolated(UserWarning):
    """Inputs fall outside a theorem's hypothesis; results carry no guarantee."""


class InvalidParameter(AggreasonError, ValueError):
    """A connective parameter lies outside its admissible range."""


class InvalidUniverse(AggreasonError, ValueError):
    """A universe is empty or repeats a label."""
