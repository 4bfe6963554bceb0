"""Discrete fuzzy sets over finite universes and similarity measures."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from aggreason.checks import PropertyCheck, PropertyReport, Verdict
from aggreason.connectives.base import Negation
from aggreason.errors import InvalidUniverse, RangeError, UniverseMismatch, UnknownName

logger = logging.getLogger(__name__)

SIMILARITY_TOL = 1e-12
PARTITION_TOL = 1e-9


@dataclass(frozen=True)
class FiniteUniverse:
    """A named, ordered set of point labels."""

    name: str
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise InvalidUniverse(f"universe '{self.name}' has no labels")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidUniverse(f"universe '{self.name}' repeats a label")

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UniverseMismatch(f"'{label}' is not a point of universe '{self.name}'") from None


@dataclass(frozen=True, eq=False)
class DiscreteFuzzySet:
    """Membership map over a finite universe; absent labels have membership 0."""

    universe: FiniteUniverse
    membership: Mapping[str, float] = field(default_factory=dict)
    name: str = ""
    _vector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        vector = np.zeros(len(self.universe))
        for label, value in self.membership.items():
            number = float(value)
            if np.isnan(number) or not 0.0 <= number <= 1.0:
                where = f"{self.name}.{label}" if self.name else label
                raise RangeError(f"membership {where} = {value!r} is outside [0, 1]")
            vector[self.universe.index(label)] = number
        vector.setflags(write=False)
        object.__setattr__(self, "_vector", vector)

    @classmethod
    def from_vector(
        cls, universe: FiniteUniverse, values: Iterable[float], name: str = ""
    ) -> "DiscreteFuzzySet":
        """Build a set from memberships listed in universe order."""
        vector = np.asarray(list(values), dtype=float)
        if vector.shape != (len(universe),):
            raise UniverseMismatch(
                f"{vector.size} memberships given for universe '{universe.name}' "
                f"of size {len(universe)}"
            )
        membership = {label: float(v) for label, v in zip(universe.labels, vector) if v != 0.0}
        return cls(universe, membership, name)

    @classmethod
    def empty(cls, universe: FiniteUniverse) -> "DiscreteFuzzySet":
        return cls(universe, {})

    @classmethod
    def universal(cls, universe: FiniteUniverse) -> "DiscreteFuzzySet":
        return cls.from_vector(universe, np.ones(len(universe)))

    @property
    def vector(self) -> np.ndarray:
        """Memberships in universe order."""
        return self._vector

    def __getitem__(self, label: str) -> float:
        return float(self._vector[self.universe.index(label)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteFuzzySet):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(self._vector, other._vector)

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict[str, float]:
        """Sparse membership map with zero entries omitted."""
        return {label: float(v) for label, v in zip(self.universe.labels, self._vector) if v != 0.0}

    def renamed(self, name: str) -> "DiscreteFuzzySet":
        return DiscreteFuzzySet(self.universe, self.to_dict(), name)


def require_same_universe(*sets: DiscreteFuzzySet) -> FiniteUniverse:
    """Return the common universe of the sets or raise UniverseMismatch."""
    universe = sets[0].universe
    for other in sets[1:]:
        if other.universe != universe:
            raise UniverseMismatch(
                f"sets live on '{universe.name}' and '{other.universe.name}'"
            )
    return universe


def membership_levels(step: float) -> np.ndarray:
    """Levels 0, step, 2*step, ..., 1 snapped to 12 decimals."""
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must lie in (0, 1], got {step}")
    count = int(round(1.0 / step))
    if count < 1 or not math.isclose(count * step, 1.0, abs_tol=1e-9):
        raise ValueError(f"step {step} does not divide [0, 1]")
    return np.round(np.linspace(0.0, 1.0, count + 1), 12)


def random_fuzzy_set(
    rng: np.random.Generator,
    universe: FiniteUniverse,
    step: float = 0.25,
    normal: bool = False,
    name: str = "",
) -> DiscreteFuzzySet:
    """Draw memberships uniformly from the levels of ``step``.

    With ``normal=True`` one random point is raised to 1.
    """
    values = rng.choice(membership_levels(step), size=len(universe))
    if normal:
        values[rng.integers(len(universe))] = 1.0
    return DiscreteFuzzySet.from_vector(universe, values, name)


def complement(fuzzy_set: DiscreteFuzzySet, negation: Negation) -> DiscreteFuzzySet:
    """Pointwise negation over every label, so absent points map to N(0)."""
    values = np.clip(np.asarray(negation(fuzzy_set.vector), dtype=float), 0.0, 1.0)
    return DiscreteFuzzySet.from_vector(fuzzy_set.universe, values)


def is_normal(fuzzy_set: DiscreteFuzzySet) -> bool:
    """True iff some membership equals 1 exactly."""
    return bool(np.any(fuzzy_set.vector == 1.0))


def is_crisp(fuzzy_set: DiscreteFuzzySet) -> bool:
    return bool(np.all((fuzzy_set.vector == 0.0) | (fuzzy_set.vector == 1.0)))


def is_subset(smaller: DiscreteFuzzySet, larger: DiscreteFuzzySet, tol: float = 0.0) -> bool:
    """Pointwise order D <= D' within ``tol``."""
    require_same_universe(smaller, larger)
    return bool(np.all(smaller.vector <= larger.vector + tol))


# ---------------------------------------------------------------------------
# Similarity


VectorSimilarity = Callable[[np.ndarray, np.ndarray], np.ndarray]


def jaccard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum of minima over sum of maxima along the last axis; 1 for two empty sets."""
    low = np.sum(np.minimum(a, b), axis=-1)
    high = np.sum(np.maximum(a, b), axis=-1)
    return np.where(high > 0.0, low / np.where(high > 0.0, high, 1.0), 1.0)


@dataclass(frozen=True)
class SimilarityMeasure:
    """A similarity measure evaluated on membership vectors.

    ``fn`` reduces over the last axis, so batches of vector pairs are scored
    in one call.
    """

    name: str
    fn: VectorSimilarity = field(compare=False, repr=False)

    def __call__(self, first: DiscreteFuzzySet, second: DiscreteFuzzySet) -> float:
        require_same_universe(first, second)
        return float(self.fn(first.vector, second.vector))


def jaccard_similarity(first: DiscreteFuzzySet, second: DiscreteFuzzySet) -> float:
    """Jaccard similarity sum(min) / sum(max) of two sets on one universe.

    Raises:
        UniverseMismatch: If the universes differ.
    """
    return JACCARD(first, second)


JACCARD = SimilarityMeasure("jaccard", jaccard)

SIMILARITIES: dict[str, SimilarityMeasure] = {"jaccard": JACCARD}


def builtin_similarity(name: str) -> SimilarityMeasure:
    measure = SIMILARITIES.get(name)
    if measure is None:
        raise UnknownName(f"unknown similarity '{name}'")
    return measure


def _levels(denominator: int) -> np.ndarray:
    return np.arange(denominator + 1) / denominator


def _first_failure(bad: np.ndarray, **arrays: np.ndarray) -> Optional[dict[str, list[float]]]:
    hits = np.nonzero(bad)[0]
    if hits.size == 0:
        return None
    k = int(hits[0])
    return {name: [float(v) for v in np.atleast_1d(arr[k])] for name, arr in arrays.items()}


def check_similarity_axioms(
    measure: SimilarityMeasure,
    trials: int = 1000,
    seed: int = 0,
    universe_size: int = 4,
    denominator: int = 8,
) -> PropertyReport:
    """Randomized check of S1 (symmetry), S2, S3 and S4 (nested monotonicity).

    Memberships are drawn from multiples of 1/denominator with extra zeros,
    and every pair also gets a variant where one point has memberships 1
    and 0, so disjointness and sharp distances both come up.
    """
    rng = np.random.default_rng(seed)
    levels = _levels(denominator)
    shape = (trials, universe_size)

    def draw() -> np.ndarray:
        return rng.choice(levels, size=shape) * (rng.random(shape) < 0.7)

    first, second = draw(), draw()
    peaked_first, peaked_second = first.copy(), second.copy()
    peaked_first[:, 0], peaked_second[:, 0] = 1.0, 0.0
    a = np.concatenate([first, peaked_first])
    b = np.concatenate([second, peaked_second])

    report = PropertyReport(subject=measure.name, grid_n=denominator + 1)
    report.details.update({"trials": trials, "seed": seed, "universe_size": universe_size})

    forward, backward = measure.fn(a, b), measure.fn(b, a)
    bad = np.abs(forward - backward) > SIMILARITY_TOL
    report.add(PropertyCheck("S1", not bad.any(), _first_failure(bad, D=a, D_prime=b)))

    self_scores = measure.fn(a, a)
    identical = np.all(a == b, axis=-1)
    bad_self = np.abs(self_scores - 1.0) > SIMILARITY_TOL
    bad_pairs = (forward >= 1.0 - SIMILARITY_TOL) & ~identical
    s2_cex = _first_failure(bad_self, D=a) or _first_failure(bad_pairs, D=a, D_prime=b)
    report.add(PropertyCheck("S2", not (bad_self.any() or bad_pairs.any()), s2_cex))

    overlap = np.any(np.minimum(a, b) > 0.0, axis=-1)
    bad = (np.abs(forward) <= SIMILARITY_TOL) & overlap
    report.add(PropertyCheck("S3", not bad.any(), _first_failure(bad, D=a, D_prime=b)))

    base = draw()
    middle = np.minimum(base + draw(), 1.0)
    top = np.minimum(middle + draw(), 1.0)
    outer = measure.fn(base, top)
    bound = np.minimum(measure.fn(base, middle), measure.fn(middle, top))
    bad = outer > bound + SIMILARITY_TOL
    report.add(
        PropertyCheck("S4", not bad.any(), _first_failure(bad, D=base, D_prime=middle, D_second=top))
    )
    logger.debug(f"similarity axioms of {measure.name}: {2 * trials} pairs, {trials} chains")
    return report


def check_nested_monotonicity_exhaustive(
    measure: SimilarityMeasure, universe_size: int, denominator: int
) -> Verdict:
    """Check S4 on every chain D <= D' <= D'' with memberships k/denominator.

    The last two points are vectorized and the leading points are looped
    over, so memory stays bounded by the square of the per-point chain count.
    """
    levels = _levels(denominator)
    chains = np.array(
        [c for c in itertools.combinations_with_replacement(levels, 3)], dtype=float
    )
    tail = min(universe_size, 2)
    tail_picks = np.array(list(itertools.product(range(len(chains)), repeat=tail)), dtype=np.intp)
    checked = 0
    for lead in itertools.product(range(len(chains)), repeat=universe_size - tail):
        lead_picks = np.broadcast_to(np.array(lead, dtype=np.intp), (len(tail_picks), len(lead)))
        picks = np.hstack([lead_picks, tail_picks])
        # stacked[i, p, j] = j-th set of chain i at point p
        stacked = chains[picks]
        base, middle, top = stacked[..., 0], stacked[..., 1], stacked[..., 2]
        outer = measure.fn(base, top)
        bound = np.minimum(measure.fn(base, middle), measure.fn(middle, top))
        bad = outer > bound + SIMILARITY_TOL
        cex = _first_failure(bad, D=base, D_prime=middle, D_second=top)
        checked += len(picks)
        if cex is not None:
            return Verdict(False, cex, f"{checked} chains checked")
    logger.debug(f"nested monotonicity of {measure.name}: {checked} chains")
    return Verdict(True, note=f"{checked} chains checked")


def ruspini_partition_check(sets: Sequence[DiscreteFuzzySet]) -> Verdict:
    """True iff the memberships sum to 1 at every point of the common universe."""
    if not sets:
        return Verdict(False, note="no sets given")
    universe = require_same_universe(*sets)
    totals = np.sum([s.vector for s in sets], axis=0)
    bad = np.nonzero(np.abs(totals - 1.0) > PARTITION_TOL)[0]
    if bad.size == 0:
        return Verdict(True)
    label = universe.labels[int(bad[0])]
    return Verdict(False, {"label": label, "sum": float(totals[bad[0]])})
