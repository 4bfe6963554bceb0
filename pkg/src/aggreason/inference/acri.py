"""Compositional rule of inference with an aggregation function.

Single rules are evaluated by a sup-A composition of the input with the
relation D(x) -> B(y). Rule bases with several inputs combine their
antecedents with the rule base's AND connective and join the rules either
after inference (FITA) or before it (FATI).
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence, Union

import numpy as np

from aggreason.checks import Verdict, first_index
from aggreason.connectives.base import Aggregation, BinaryConnective, Implication
from aggreason.errors import ArityMismatch, DimensionMismatch, RangeError, UniverseMismatch
from aggreason.fuzzysets import DiscreteFuzzySet, FiniteUniverse, require_same_universe
from aggreason.numerics import Grid, to_unit_array

logger = logging.getLogger(__name__)

LEQ_TOL = 1e-9
SINGLE_POINT = FiniteUniverse("point", ("*",))

# The rule arrow of FITA/FATI: an implication, or a t-norm for Mamdani-style rules
Arrow = Union[Implication, Aggregation]


def _evaluate(connective: BinaryConnective, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    shape = np.broadcast(x, y).shape
    return np.broadcast_to(np.asarray(connective.fn(x, y), dtype=float), shape)


def _as_set(universe: FiniteUniverse, values: np.ndarray, name: str = "") -> DiscreteFuzzySet:
    return DiscreteFuzzySet.from_vector(universe, to_unit_array(values), name)


@dataclass(frozen=True, eq=False)
class FuzzyRelation:
    """A fuzzy relation on rows x columns stored as a dense matrix."""

    rows: FiniteUniverse
    columns: FiniteUniverse
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        matrix = np.array(self.values, dtype=float)
        if matrix.shape != (len(self.rows), len(self.columns)):
            raise DimensionMismatch(
                f"relation on {self.rows.name} x {self.columns.name} needs shape "
                f"({len(self.rows)}, {len(self.columns)}), got {matrix.shape}"
            )
        if np.any(np.isnan(matrix)) or np.any((matrix < 0.0) | (matrix > 1.0)):
            raise RangeError(f"relation on {self.rows.name} x {self.columns.name} leaves [0, 1]")
        matrix.setflags(write=False)
        object.__setattr__(self, "values", matrix)

    @classmethod
    def from_rule(
        cls, antecedent: DiscreteFuzzySet, consequent: DiscreteFuzzySet, arrow: BinaryConnective
    ) -> "FuzzyRelation":
        """The conditional relation R(x, y) = arrow(D(x), B(y))."""
        values = _evaluate(arrow, antecedent.vector[:, None], consequent.vector[None, :])
        return cls(antecedent.universe, consequent.universe, to_unit_array(values))

    @classmethod
    def identity(cls, universe: FiniteUniverse) -> "FuzzyRelation":
        return cls(universe, universe, np.eye(len(universe)))

    @classmethod
    def from_set(cls, fuzzy_set: DiscreteFuzzySet) -> "FuzzyRelation":
        """A fuzzy set as a one-row relation on a single point x its universe."""
        return cls(SINGLE_POINT, fuzzy_set.universe, fuzzy_set.vector[None, :])

    def transposed(self) -> "FuzzyRelation":
        return FuzzyRelation(self.columns, self.rows, self.values.T)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzyRelation):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.columns == other.columns
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]


def sup_a_compose(first: FuzzyRelation, second: FuzzyRelation, agg: Aggregation) -> FuzzyRelation:
    """Sup-A composition (S o_A R)(x, z) = max_y A(S(x, y), R(y, z)).

    Raises:
        DimensionMismatch: If the columns of ``first`` are not the rows of ``second``.
    """
    if first.columns != second.rows:
        raise DimensionMismatch(
            f"cannot compose {first.rows.name} x {first.columns.name} "
            f"with {second.rows.name} x {second.columns.name}"
        )
    stacked = _evaluate(agg, first.values[:, :, None], second.values[None, :, :])
    return FuzzyRelation(first.rows, second.columns, to_unit_array(stacked.max(axis=1)))


def acri_fmp(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    agg: Aggregation,
    imp: Implication,
) -> DiscreteFuzzySet:
    """FMP conclusion B'(y) = max_x A(D'(x), I(D(x), B(y))).

    Raises:
        UniverseMismatch: If D' and D live on different universes.
    """
    require_same_universe(d_prime, d)
    relation = FuzzyRelation.from_rule(d, b, imp)
    conclusion = sup_a_compose(FuzzyRelation.from_set(d_prime), relation, agg)
    return _as_set(b.universe, conclusion.values[0], "B'")


def acri_fmt(
    b_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    agg: Aggregation,
    imp: Implication,
) -> DiscreteFuzzySet:
    """FMT conclusion D'(x) = max_y A(B'(y), I(D(x), B(y))).

    Raises:
        UniverseMismatch: If B' and B live on different universes.
    """
    require_same_universe(b_prime, b)
    relation = FuzzyRelation.from_rule(d, b, imp).transposed()
    conclusion = sup_a_compose(FuzzyRelation.from_set(b_prime), relation, agg)
    return _as_set(d.universe, conclusion.values[0], "D'")


@dataclass(frozen=True)
class MisoRule:
    """IF x1 is D1 AND ... AND xm is Dm THEN y is B."""

    antecedents: tuple[DiscreteFuzzySet, ...]
    consequent: DiscreteFuzzySet


@dataclass(frozen=True)
class RuleBase:
    """Rules sharing input universes and an output universe.

    ``and_combiner`` evaluates the ANDs of each antecedent.
    """

    rules: tuple[MisoRule, ...]
    and_combiner: Aggregation

    def __post_init__(self) -> None:
        if not self.rules:
            raise ArityMismatch("a rule base needs at least one rule")
        first = self.rules[0]
        if not first.antecedents:
            raise ArityMismatch("a rule needs at least one antecedent")
        inputs = tuple(s.universe for s in first.antecedents)
        for k, rule in enumerate(self.rules):
            if len(rule.antecedents) != len(inputs):
                raise ArityMismatch(
                    f"rule {k} has {len(rule.antecedents)} antecedents, expected {len(inputs)}"
                )
            for i, antecedent in enumerate(rule.antecedents):
                require_same_universe(antecedent, first.antecedents[i])
            require_same_universe(rule.consequent, first.consequent)

    @property
    def arity(self) -> int:
        return len(self.rules[0].antecedents)

    @property
    def input_universes(self) -> tuple[FiniteUniverse, ...]:
        return tuple(s.universe for s in self.rules[0].antecedents)

    @property
    def output_universe(self) -> FiniteUniverse:
        return self.rules[0].consequent.universe


def fold_aggregation(agg: Aggregation, values: Sequence[np.ndarray]) -> np.ndarray:
    """m-ary aggregation as the left fold A(...A(A(v1, v2), v3)..., vm)."""
    if not values:
        raise ArityMismatch("cannot aggregate an empty sequence")
    return reduce(lambda acc, v: _evaluate(agg, acc, v), values[1:], np.asarray(values[0], dtype=float))


def joint_membership(sets: Sequence[DiscreteFuzzySet], and_combiner: Aggregation) -> np.ndarray:
    """Membership of the product set over U1 x ... x Um, flattened in C order."""
    m = len(sets)
    axes = []
    for i, fuzzy_set in enumerate(sets):
        shape = [1] * m
        shape[i] = len(fuzzy_set.universe)
        axes.append(fuzzy_set.vector.reshape(shape))
    sizes = tuple(len(s.universe) for s in sets)
    joint = np.broadcast_to(fold_aggregation(and_combiner, axes), sizes)
    return joint.ravel()


def _inputs(d_prime: Sequence[DiscreteFuzzySet], rb: RuleBase) -> np.ndarray:
    if len(d_prime) != rb.arity:
        raise ArityMismatch(f"{len(d_prime)} inputs given to a rule base of arity {rb.arity}")
    for i, (given, universe) in enumerate(zip(d_prime, rb.input_universes)):
        if given.universe != universe:
            raise UniverseMismatch(
                f"input {i} lives on '{given.universe.name}', the rules on '{universe.name}'"
            )
    return joint_membership(d_prime, rb.and_combiner)


def _rule_relations(rb: RuleBase, arrow: Arrow) -> list[np.ndarray]:
    relations = []
    for rule in rb.rules:
        antecedent = joint_membership(rule.antecedents, rb.and_combiner)
        relations.append(_evaluate(arrow, antecedent[:, None], rule.consequent.vector[None, :]))
    return relations


def fita(
    d_prime: Sequence[DiscreteFuzzySet],
    rb: RuleBase,
    agg: Aggregation,
    arrow: Arrow,
    combiner: Aggregation,
) -> DiscreteFuzzySet:
    """First infer then aggregate.

    Each rule's conclusion max_x A(D'(x), D_j(x) -> B_j(y)) is computed and
    the conclusions are joined pointwise by the left fold of ``combiner``.

    Raises:
        ArityMismatch: If the number of inputs differs from the rule base arity.
    """
    joint = _inputs(d_prime, rb)
    conclusions = [
        _evaluate(agg, joint[:, None], relation).max(axis=0) for relation in _rule_relations(rb, arrow)
    ]
    logger.debug(f"FITA over {len(conclusions)} rules on {joint.size} input points")
    return _as_set(rb.output_universe, fold_aggregation(combiner, conclusions), "B'")


def fati(
    d_prime: Sequence[DiscreteFuzzySet],
    rb: RuleBase,
    agg: Aggregation,
    arrow: Arrow,
    combiner: Aggregation,
) -> DiscreteFuzzySet:
    """First aggregate then infer.

    The rule relations are joined by the left fold of ``combiner`` into one
    relation, which is then composed with the input.

    Raises:
        ArityMismatch: If the number of inputs differs from the rule base arity.
    """
    joint = _inputs(d_prime, rb)
    relation = fold_aggregation(combiner, _rule_relations(rb, arrow))
    conclusion = _evaluate(agg, joint[:, None], relation).max(axis=0)
    return _as_set(rb.output_universe, conclusion, "B'")


def pointwise_leq(first: Implication, second: Implication, grid: Grid) -> Verdict:
    """Check first(x, y) <= second(x, y) + 1e-9 on every grid pair."""
    lhs, rhs = first.table(grid), second.table(grid)
    idx = first_index(lhs > rhs + LEQ_TOL)
    if idx is None:
        return Verdict(True, note=f"{grid.n}x{grid.n} grid")
    i, j = idx
    points = grid.points
    cex = {
        "x": float(points[i]),
        "y": float(points[j]),
        "first": float(lhs[i, j]),
        "second": float(rhs[i, j]),
    }
    return Verdict(False, cex, f"{first.name} exceeds {second.name}")
