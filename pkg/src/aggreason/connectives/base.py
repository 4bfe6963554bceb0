"""Base classes and descriptor records for fuzzy connectives."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Union

import numpy as np

from aggreason.numerics import ArrayLike, Grid

BinaryFn = Callable[[np.ndarray, np.ndarray], ArrayLike]
UnaryFn = Callable[[np.ndarray], ArrayLike]
Side = Literal["left", "right", "both"]

AGGREGATION_TAGS = frozenset(
    {
        "commutative",
        "associative",
        "conjunctive",
        "disjunctive",
        "averaging",
        "semicopula",
        "tnorm",
        "tconorm",
        "copula",
    }
)


def _unwrap(values: ArrayLike) -> ArrayLike:
    out = np.asarray(values, dtype=float)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SidedElement:
    """A neutral element or annihilator together with the side it acts on."""

    value: float
    side: Side = "both"

    def covers(self, side: Side) -> bool:
        return self.side == "both" or self.side == side


@dataclass(frozen=True)
class AggregationAttributes:
    """Declared analytic attributes of a binary aggregation function."""

    left_continuous_in_second_arg: bool = False
    right_continuous_in_second_arg: bool = False
    neutral_element: Optional[SidedElement] = None
    annihilator: Optional[SidedElement] = None
    class_tags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        unknown = set(self.class_tags) - AGGREGATION_TAGS
        if unknown:
            raise ValueError(f"unknown aggregation tags: {sorted(unknown)}")


@dataclass(frozen=True)
class ImplicationAttributes:
    """Declared attributes of a fuzzy implication; None means undeclared."""

    right_continuous_in_second_arg: bool = False
    satisfies_np: Optional[bool] = None
    satisfies_ip: Optional[bool] = None
    satisfies_ep: Optional[bool] = None
    satisfies_op: Optional[bool] = None
    satisfies_cp: Optional[bool] = None
    family: str = "custom"


class BinaryConnective(ABC):
    """A function [0,1]^2 -> [0,1] evaluated element-wise on numpy arrays."""

    name: str
    fn: BinaryFn
    # 0 for closed forms, the bisection eps for numerically derived connectives
    resolution: float

    @property
    @abstractmethod
    def kind(self) -> str:
        """Return the connective kind ("aggregation" or "implication")."""
        pass

    def __call__(self, x: ArrayLike, y: ArrayLike) -> ArrayLike:
        return _unwrap(self.fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))

    def table(self, grid: Grid) -> np.ndarray:
        """Values on grid x grid, rows indexed by the first argument."""
        points = grid.points
        return np.broadcast_to(
            np.asarray(self.fn(points[:, None], points[None, :]), dtype=float),
            (grid.n, grid.n),
        )


@dataclass(frozen=True)
class Aggregation(BinaryConnective):
    """A binary aggregation function with its declared attributes."""

    name: str
    fn: BinaryFn = field(compare=False, repr=False)
    attrs: AggregationAttributes = field(default_factory=AggregationAttributes)
    # builtin implication name of the closed-form residual, if any
    residual_name: Optional[str] = None
    resolution: float = 0.0

    @property
    def kind(self) -> str:
        return "aggregation"

    def has_tag(self, tag: str) -> bool:
        return tag in self.attrs.class_tags

    def neutral(self, side: Side) -> Optional[float]:
        element = self.attrs.neutral_element
        return element.value if element is not None and element.covers(side) else None

    def annihilates(self, side: Side) -> Optional[float]:
        element = self.attrs.annihilator
        return element.value if element is not None and element.covers(side) else None


@dataclass(frozen=True)
class Implication(BinaryConnective):
    """A fuzzy implication with its declared attributes.

    ``certified`` is False for residuals whose implication axioms could not
    be established; such descriptors still evaluate.
    """

    name: str
    fn: BinaryFn = field(compare=False, repr=False)
    attrs: ImplicationAttributes = field(default_factory=ImplicationAttributes)
    # closed form of the induced aggregation: a builtin name or a function
    induced_name: Optional[str] = None
    induced_fn: Optional[BinaryFn] = field(default=None, compare=False, repr=False)
    resolution: float = 0.0
    certified: bool = True
    warnings: tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return "implication"


@dataclass(frozen=True)
class Negation:
    """A fuzzy negation N: [0,1] -> [0,1]."""

    name: str
    fn: UnaryFn = field(compare=False, repr=False)
    declared_strict: bool = False
    declared_strong: bool = False

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return _unwrap(self.fn(np.asarray(x, dtype=float)))


Connective = Union[Aggregation, Implication]
