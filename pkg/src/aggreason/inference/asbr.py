"""Similarity-based reasoning with an aggregation function.

The input D' only enters through its similarity s = S(D, D') to the rule
antecedent. Four conclusions are available:

- scheme 1: B'(y) = max_x I(s, A(D(x), B(y)))
- scheme 2: B'(y) = min_x I(s, I(D(x), B(y)))
- scheme 3: B'(y) = max_x A(s, A(D(x), B(y)))
- scheme 4: B'(y) = min_x A(s, I(D(x), B(y)))
"""

import logging
from typing import Any, Optional

import numpy as np

from aggreason.checks import Verdict
from aggreason.connectives.base import Aggregation, BinaryConnective, Implication
from aggreason.errors import BadScheme
from aggreason.fuzzysets import (
    DiscreteFuzzySet,
    FiniteUniverse,
    SimilarityMeasure,
    random_fuzzy_set,
    require_same_universe,
)
from aggreason.inference.acri import FuzzyRelation
from aggreason.numerics import UnitValue, to_unit_array

logger = logging.getLogger(__name__)

SCHEMES = (1, 2, 3, 4)
GMP2_PRIME_TOL = 1e-9


def _evaluate(connective: BinaryConnective, x: Any, y: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(connective.fn(np.asarray(x, dtype=float), y), dtype=float), np.shape(y))


def modified_relation_r1(s_val: float, relation: FuzzyRelation, agg: Aggregation) -> FuzzyRelation:
    """R1(x, y) = A(s, R(x, y))."""
    s = UnitValue(s_val)
    values = to_unit_array(_evaluate(agg, s, relation.values))
    return FuzzyRelation(relation.rows, relation.columns, values)


def modified_relation_r2(s_val: float, relation: FuzzyRelation, imp: Implication) -> FuzzyRelation:
    """R2(x, y) = I(s, R(x, y)); identically 1 when s = 0."""
    s = UnitValue(s_val)
    values = to_unit_array(_evaluate(imp, s, relation.values))
    return FuzzyRelation(relation.rows, relation.columns, values)


def conclude_from_similarity(
    s_val: float,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    agg: Aggregation,
    imp: Implication,
    scheme: int,
) -> DiscreteFuzzySet:
    """Evaluate one conclusion scheme for a known similarity value.

    Raises:
        BadScheme: If ``scheme`` is not 1, 2, 3 or 4.
    """
    if scheme not in SCHEMES:
        raise BadScheme(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    s = UnitValue(s_val)
    inner = agg if scheme in (1, 3) else imp
    outer: BinaryConnective = imp if scheme in (1, 2) else agg
    relation = np.broadcast_to(
        np.asarray(inner.fn(d.vector[:, None], b.vector[None, :]), dtype=float),
        (len(d.universe), len(b.universe)),
    )
    modified = _evaluate(outer, s, relation)
    # odd schemes project with sup, even ones with inf
    projected = modified.max(axis=0) if scheme % 2 else modified.min(axis=0)
    return DiscreteFuzzySet.from_vector(b.universe, to_unit_array(projected), f"B'{scheme}")


def asbr_conclude(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    agg: Aggregation,
    imp: Implication,
    similarity: SimilarityMeasure,
    scheme: int,
) -> DiscreteFuzzySet:
    """FMP conclusion of a similarity-based scheme with s = S(D, D').

    Raises:
        UniverseMismatch: If D and D' live on different universes.
        BadScheme: If ``scheme`` is not 1, 2, 3 or 4.
    """
    require_same_universe(d, d_prime)
    s = similarity(d, d_prime)
    logger.debug(f"ASBR scheme {scheme}: S(D, D') = {s:.6g}")
    return conclude_from_similarity(s, d, b, agg, imp, scheme)


def gmp2_prime_violation(
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    d_first: DiscreteFuzzySet,
    d_second: DiscreteFuzzySet,
    agg: Aggregation,
    imp: Implication,
    similarity: SimilarityMeasure,
    scheme: int,
) -> Optional[dict[str, Any]]:
    """Test one pair of inputs against the similarity-monotonicity rule.

    The inputs are ordered so that S(D, D') <= S(D, D''). Then B'' must lie
    inside B' and S(B', B) <= S(B'', B) must hold. Returns the violating
    instance, or None.
    """
    s_first, s_second = similarity(d, d_first), similarity(d, d_second)
    if s_first > s_second:
        d_first, d_second = d_second, d_first
        s_first, s_second = s_second, s_first
    b_first = conclude_from_similarity(s_first, d, b, agg, imp, scheme)
    b_second = conclude_from_similarity(s_second, d, b, agg, imp, scheme)
    sim_first, sim_second = similarity(b_first, b), similarity(b_second, b)

    contained = bool(np.all(b_second.vector <= b_first.vector + GMP2_PRIME_TOL))
    ordered = sim_first <= sim_second + GMP2_PRIME_TOL
    if contained and ordered:
        return None
    return {
        "D": d.to_dict(),
        "B": b.to_dict(),
        "D'": d_first.to_dict(),
        "D''": d_second.to_dict(),
        "S(D,D')": s_first,
        "S(D,D'')": s_second,
        "S(B',B)": sim_first,
        "S(B'',B)": sim_second,
        "failed": "containment" if not contained else "ordering",
    }


def check_gmp2_prime(
    agg: Aggregation,
    imp: Implication,
    similarity: SimilarityMeasure,
    scheme: int = 1,
    trials: int = 500,
    seed: int = 0,
    universe_sizes: tuple[int, int] = (3, 5),
    step: float = 0.25,
) -> Verdict:
    """Randomized check of S(D', D) <= S(D'', D) => S(B', B) <= S(B'', B).

    D is drawn normal; D' and D'' are arbitrary. Trial k uses the generator
    seeded with ``[seed, k]``.

    Raises:
        BadScheme: If ``scheme`` is not 1 or 2.
    """
    if scheme not in (1, 2):
        raise BadScheme(f"similarity monotonicity is checked for schemes 1 and 2, got {scheme!r}")
    if not imp.attrs.right_continuous_in_second_arg or not imp.attrs.satisfies_np:
        logger.warning(f"{imp.name} is not declared right-continuous with NP; no guarantee applies")

    low, high = universe_sizes
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        u = FiniteUniverse("U", tuple(f"x{i + 1}" for i in range(int(rng.integers(low, high + 1)))))
        v = FiniteUniverse("V", tuple(f"y{i + 1}" for i in range(int(rng.integers(low, high + 1)))))
        d = random_fuzzy_set(rng, u, step, normal=True, name="D")
        b = random_fuzzy_set(rng, v, step, name="B")
        d_first = random_fuzzy_set(rng, u, step, name="D'")
        d_second = random_fuzzy_set(rng, u, step, name="D''")
        cex = gmp2_prime_violation(d, b, d_first, d_second, agg, imp, similarity, scheme)
        if cex is not None:
            cex["trial"] = trial
            return Verdict(False, cex, f"scheme {scheme} fails at trial {trial}")
    return Verdict(True, note=f"{trials} trials, seed {seed}")
