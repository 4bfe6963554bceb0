"""Monotone-predicate search on [0, 1] and grid sampling.

The residual of an aggregation and the aggregation induced by an implication
are a supremum and an infimum over [0, 1]. Both are computed by bisection,
which only needs the predicate's true-set to be a down-set (for ``sup``) or an
up-set (for ``inf``). Predicates receive numpy arrays, so a whole table of
suprema is bisected at once.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from aggreason.errors import InvalidTolerance, MonotonicityViolation, RangeError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
Predicate = Callable[[np.ndarray], ArrayLike]

# Explicit marker for the extended-real value of generators.
INFINITY = math.inf


class UnitValue(float):
    """A real number in [0, 1]."""

    def __new__(cls, value: float) -> "UnitValue":
        number = float(value)
        if math.isnan(number) or not 0.0 <= number <= 1.0:
            raise RangeError(f"value {value!r} is outside [0, 1]")
        return super().__new__(cls, number)


@dataclass(frozen=True)
class Tolerance:
    """Bisection stopping rule."""

    eps: float = 1e-9
    max_iter: int = 80

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise InvalidTolerance(f"eps must be positive, got {self.eps}")
        if self.max_iter < 1:
            raise InvalidTolerance(f"max_iter must be at least 1, got {self.max_iter}")
        if 2.0 ** (-self.max_iter) >= self.eps:
            raise InvalidTolerance(
                f"max_iter={self.max_iter} cannot reach eps={self.eps} by bisection"
            )


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class Grid:
    """Uniform sample of [0, 1] including both endpoints."""

    n: int
    points: np.ndarray = field(repr=False, compare=False)

    @property
    def step(self) -> float:
        return 1.0 / (self.n - 1)


def grid_points(n: int) -> Grid:
    """Build the grid k/(n-1), k = 0..n-1."""
    if n < 2:
        raise ValueError(f"a grid needs at least 2 points, got {n}")
    # snapped so decimal grids hold the doubles nearest to k/(n-1)
    points = np.round(np.linspace(0.0, 1.0, n), 12)
    points.setflags(write=False)
    return Grid(n=n, points=points)


def _as_result(values: np.ndarray) -> ArrayLike:
    return float(values) if values.ndim == 0 else values


def _check_midpoint(pred: Predicate, empty: np.ndarray, shape: tuple[int, ...], message: str) -> None:
    """Raise if the predicate holds at 1/2 where the endpoints say its true-set is empty."""
    if not np.any(empty):
        return
    at_half = np.broadcast_to(np.asarray(pred(np.full(shape, 0.5)), dtype=bool), shape)
    if np.any(at_half & empty):
        raise MonotonicityViolation(f"predicate {message}")


def sup_satisfying(
    pred: Predicate,
    tol: Tolerance = DEFAULT_TOLERANCE,
    shape: tuple[int, ...] = (),
) -> ArrayLike:
    """Supremum of a down-set predicate on [0, 1], element-wise over ``shape``.

    Returns 0 where the predicate is false everywhere and 1 where it holds at 1.
    Monotonicity is only checked at 0, 1/2 and 1; a predicate that passes
    those checks but is not a down-set bisects to one of its boundary points.
    """
    at_zero = np.broadcast_to(np.asarray(pred(np.zeros(shape)), dtype=bool), shape)
    at_one = np.broadcast_to(np.asarray(pred(np.ones(shape)), dtype=bool), shape)
    if np.any(at_one & ~at_zero):
        raise MonotonicityViolation(
            "predicate holds at 1 but not at 0; its true-set is not a down-set"
        )
    _check_midpoint(pred, ~at_zero, shape, "holds at 1/2 but not at 0; its true-set is not a down-set")

    lo = np.zeros(shape)
    hi = np.ones(shape)
    active = at_zero & ~at_one
    iterations = 0
    while iterations < tol.max_iter and np.any(active & (hi - lo > tol.eps)):
        mid = 0.5 * (lo + hi)
        holds = np.broadcast_to(np.asarray(pred(mid), dtype=bool), shape)
        lo = np.where(active & holds, mid, lo)
        hi = np.where(active & ~holds, mid, hi)
        iterations += 1
    logger.debug(f"sup bisection finished after {iterations} iterations")

    result = np.where(at_one, 1.0, np.where(at_zero, lo, 0.0))
    return _as_result(result)


def inf_satisfying(
    pred: Predicate,
    tol: Tolerance = DEFAULT_TOLERANCE,
    shape: tuple[int, ...] = (),
) -> ArrayLike:
    """Infimum of an up-set predicate on [0, 1], element-wise over ``shape``.

    Returns 1 where the predicate is false everywhere and 0 where it holds at 0.
    Monotonicity is only checked at 0, 1/2 and 1; a predicate that passes
    those checks but is not an up-set bisects to one of its boundary points.
    """
    at_zero = np.broadcast_to(np.asarray(pred(np.zeros(shape)), dtype=bool), shape)
    at_one = np.broadcast_to(np.asarray(pred(np.ones(shape)), dtype=bool), shape)
    if np.any(at_zero & ~at_one):
        raise MonotonicityViolation(
            "predicate holds at 0 but not at 1; its true-set is not an up-set"
        )
    _check_midpoint(pred, ~at_one, shape, "holds at 1/2 but not at 1; its true-set is not an up-set")

    lo = np.zeros(shape)
    hi = np.ones(shape)
    active = at_one & ~at_zero
    iterations = 0
    while iterations < tol.max_iter and np.any(active & (hi - lo > tol.eps)):
        mid = 0.5 * (lo + hi)
        holds = np.broadcast_to(np.asarray(pred(mid), dtype=bool), shape)
        hi = np.where(active & holds, mid, hi)
        lo = np.where(active & ~holds, mid, lo)
        iterations += 1
    logger.debug(f"inf bisection finished after {iterations} iterations")

    result = np.where(at_zero, 0.0, np.where(at_one, hi, 1.0))
    return _as_result(result)


def to_unit_array(values: ArrayLike) -> np.ndarray:
    """Convert to a float array, clipping round-off just outside [0, 1]."""
    return np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
