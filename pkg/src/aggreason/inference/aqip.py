"""Quintuple implication reasoning with the aggregation induced by I.

For an implication I that is right-continuous in its second argument and
has I(1, y) < 1 for y < 1, the smallest conclusion maximizing the
quintuple-implication objective is

    B'(y) = max_x A_I(A_I(D'(x), A_I(I(D'(x), D(x)), I(D(x), B(y)))), 1)

with A_I the induced aggregation; the FMT solution mirrors it. The outer
A_I(., 1) is kept because A_I need not have 1 as a right neutral element.
The objectives themselves and a brute-force oracle for their minimality
live here too.
"""

import logging
import warnings

import numpy as np

from aggreason.checks import Verdict, first_index
from aggreason.connectives.base import Aggregation, BinaryConnective, Implication
from aggreason.errors import HypothesisViolated, NotATNorm
from aggreason.fuzzysets import DiscreteFuzzySet, require_same_universe
from aggreason.numerics import DEFAULT_TOLERANCE, Grid, Tolerance, to_unit_array
from aggreason.residuation import induced_aggregation, residual_implication, top_section_violation

logger = logging.getLogger(__name__)

OBJECTIVE_TOL = 1e-9


def _ev(connective: BinaryConnective, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.broadcast_to(
        np.asarray(connective.fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float)), dtype=float),
        np.broadcast(x, y).shape,
    )


def _fmp_objective(
    dp: np.ndarray, dx: np.ndarray, by: np.ndarray, candidate: np.ndarray, imp: Implication
) -> np.ndarray:
    """M on broadcast-ready arrays: D'(x), D(x), B(y) and candidate B*(y)."""
    return _ev(imp, _ev(imp, dx, by), _ev(imp, _ev(imp, dp, dx), _ev(imp, dp, candidate)))


def _fmt_objective(
    dx: np.ndarray, by: np.ndarray, bp: np.ndarray, candidate: np.ndarray, imp: Implication
) -> np.ndarray:
    """N on broadcast-ready arrays: D(x), B(y), B'(y) and candidate D*(x)."""
    return _ev(imp, _ev(imp, dx, by), _ev(imp, _ev(imp, by, bp), _ev(imp, dx, candidate)))


def qip_objective_fmp(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    b_candidate: DiscreteFuzzySet,
    imp: Implication,
    x: str,
    y: str,
) -> float:
    """M(x, y) = I(I(D(x), B(y)), I(I(D'(x), D(x)), I(D'(x), B*(y)))).

    Raises:
        UniverseMismatch: If D', D or B* and B live on different universes.
    """
    require_same_universe(d_prime, d)
    require_same_universe(b_candidate, b)
    i, j = d.universe.index(x), b.universe.index(y)
    matrix = _fmp_objective(
        d_prime.vector[:, None], d.vector[:, None], b.vector[None, :], b_candidate.vector[None, :], imp
    )
    return float(matrix[i, j])


def qip_objective_fmt(
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    b_prime: DiscreteFuzzySet,
    d_candidate: DiscreteFuzzySet,
    imp: Implication,
    x: str,
    y: str,
) -> float:
    """N(x, y) = I(I(D(x), B(y)), I(I(B(y), B'(y)), I(D(x), D*(x)))).

    Raises:
        UniverseMismatch: If B', B or D* and D live on different universes.
    """
    require_same_universe(b_prime, b)
    require_same_universe(d_candidate, d)
    i, j = d.universe.index(x), b.universe.index(y)
    matrix = _fmt_objective(
        d.vector[:, None], b.vector[None, :], b_prime.vector[None, :], d_candidate.vector[:, None], imp
    )
    return float(matrix[i, j])


def _induced_for_qip(imp: Implication, tol: Tolerance, closed_form: bool) -> Aggregation:
    problems = []
    if not imp.attrs.right_continuous_in_second_arg:
        problems.append("I is not declared right-continuous in its second argument")
    violation = top_section_violation(imp)
    if violation is not None:
        problems.append(f"I(1, y) = 1 at y={violation:g}")
    for problem in problems:
        message = f"{imp.name}: {problem}; the QIP solution carries no guarantee"
        logger.warning(message)
        warnings.warn(message, HypothesisViolated, stacklevel=3)
    return induced_aggregation(imp, tol, closed_form=closed_form, strict=False)


def aqip_fmp(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    imp: Implication,
    tol: Tolerance = DEFAULT_TOLERANCE,
    closed_form: bool = True,
) -> DiscreteFuzzySet:
    """FMP solution via the induced aggregation A_I.

    Inputs outside the guarantee (I not right-continuous, or I(1, y) = 1
    for some y < 1) emit a ``HypothesisViolated`` warning; the formula is
    still evaluated.

    Args:
        d_prime: Observed input D' on U.
        d: Rule antecedent D on U.
        b: Rule consequent B on V.
        imp: The implication I.
        tol: Bisection tolerance when A_I has no closed form.
        closed_form: Use the closed form of A_I when one is known.

    Returns:
        The conclusion B' on V.
    """
    require_same_universe(d_prime, d)
    agg = _induced_for_qip(imp, tol, closed_form)
    dp, dx, by = d_prime.vector[:, None], d.vector[:, None], b.vector[None, :]
    inner = _ev(agg, _ev(imp, dp, dx), _ev(imp, dx, by))
    values = _ev(agg, _ev(agg, dp, inner), np.ones(1)).max(axis=0)
    return DiscreteFuzzySet.from_vector(b.universe, to_unit_array(values), "B'")


def aqip_fmt(
    b_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    imp: Implication,
    tol: Tolerance = DEFAULT_TOLERANCE,
    closed_form: bool = True,
) -> DiscreteFuzzySet:
    """FMT solution D'(x) = max_y A_I(A_I(D(x), A_I(I(D(x), B(y)), I(B(y), B'(y)))), 1)."""
    require_same_universe(b_prime, b)
    agg = _induced_for_qip(imp, tol, closed_form)
    dx, by, bp = d.vector[:, None], b.vector[None, :], b_prime.vector[None, :]
    inner = _ev(agg, _ev(imp, dx, by), _ev(imp, by, bp))
    values = _ev(agg, _ev(agg, dx, inner), np.ones(1)).max(axis=1)
    return DiscreteFuzzySet.from_vector(d.universe, to_unit_array(values), "D'")


def _require_left_continuous_tnorm(tnorm: Aggregation) -> None:
    if not tnorm.has_tag("tnorm") or not tnorm.attrs.left_continuous_in_second_arg:
        raise NotATNorm(f"{tnorm.name} is not a left-continuous t-norm")


def qip_tnorm_solution(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    tnorm: Aggregation,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> DiscreteFuzzySet:
    """FMP solution B'(y) = max_x T(D'(x), T(I_T(D'(x), D(x)), I_T(D(x), B(y)))).

    Raises:
        NotATNorm: If T is not declared a left-continuous t-norm.
    """
    _require_left_continuous_tnorm(tnorm)
    require_same_universe(d_prime, d)
    imp = residual_implication(tnorm, tol)
    dp, dx, by = d_prime.vector[:, None], d.vector[:, None], b.vector[None, :]
    values = _ev(tnorm, dp, _ev(tnorm, _ev(imp, dp, dx), _ev(imp, dx, by))).max(axis=0)
    return DiscreteFuzzySet.from_vector(b.universe, to_unit_array(values), "B'")


def qip_tnorm_solution_fmt(
    b_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    tnorm: Aggregation,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> DiscreteFuzzySet:
    """FMT solution D'(x) = max_y T(D(x), T(I_T(D(x), B(y)), I_T(B(y), B'(y)))).

    Raises:
        NotATNorm: If T is not declared a left-continuous t-norm.
    """
    _require_left_continuous_tnorm(tnorm)
    require_same_universe(b_prime, b)
    imp = residual_implication(tnorm, tol)
    dx, by, bp = d.vector[:, None], b.vector[None, :], b_prime.vector[None, :]
    values = _ev(tnorm, dx, _ev(tnorm, _ev(imp, dx, by), _ev(imp, by, bp))).max(axis=1)
    return DiscreteFuzzySet.from_vector(d.universe, to_unit_array(values), "D'")


def _least_reaching(reaches: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Per row, the least grid value whose column reaches the maximum; NaN if none."""
    least = values[np.argmax(reaches, axis=-1)]
    return np.where(reaches.any(axis=-1), least, np.nan)


def _optimality_verdict(
    reached: np.ndarray,
    least: np.ndarray,
    candidate: np.ndarray,
    labels: tuple[str, ...],
    step: float,
    tol: float,
) -> Verdict:
    idx = first_index(~reached)
    if idx is not None:
        k = idx[0]
        return Verdict(
            False,
            {"point": labels[k], "candidate": float(candidate[k])},
            "objective stays below its maximum",
        )
    bad = np.isnan(least) | (least < candidate - tol) | (least > candidate + step + tol)
    idx = first_index(bad)
    if idx is not None:
        k = idx[0]
        cex = {
            "point": labels[k],
            "candidate": float(candidate[k]),
            "least_on_grid": None if np.isnan(least[k]) else float(least[k]),
        }
        return Verdict(False, cex, "candidate is not the least maximizer")
    return Verdict(True, note=f"value grid step {step:g}")


def verify_qip_optimality(
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    b_candidate: DiscreteFuzzySet,
    imp: Implication,
    value_grid: Grid,
    tol: float = OBJECTIVE_TOL,
) -> Verdict:
    """Brute-force check that B* maximizes the FMP objective and is minimal.

    (a) With B*, M(x, y) reaches the largest attainable value
    I(I(D(x), B(y)), I(I(D'(x), D(x)), I(D'(x), 1))) at every (x, y).
    (b) For each y, the least value c on ``value_grid`` that keeps M(., y)
    at that maximum for every x lies in [B*(y), B*(y) + step].
    """
    require_same_universe(d_prime, d)
    require_same_universe(b_candidate, b)
    # axes: x, y, candidate value
    dp, dx = d_prime.vector[:, None, None], d.vector[:, None, None]
    by = b.vector[None, :, None]
    best = _fmp_objective(dp, dx, by, np.ones((1, 1, 1)), imp)
    with_candidate = _fmp_objective(dp, dx, by, b_candidate.vector[None, :, None], imp)
    reached = np.all(with_candidate >= best - tol, axis=(0, 2))

    values = value_grid.points
    scan = _fmp_objective(dp, dx, by, values[None, None, :], imp)
    least = _least_reaching(np.all(scan >= best - tol, axis=0), values)
    return _optimality_verdict(reached, least, b_candidate.vector, b.universe.labels, value_grid.step, tol)


def verify_qip_optimality_fmt(
    b_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    d_candidate: DiscreteFuzzySet,
    imp: Implication,
    value_grid: Grid,
    tol: float = OBJECTIVE_TOL,
) -> Verdict:
    """FMT twin of ``verify_qip_optimality`` scanning D*(x) per x."""
    require_same_universe(b_prime, b)
    require_same_universe(d_candidate, d)
    dx = d.vector[:, None, None]
    by, bp = b.vector[None, :, None], b_prime.vector[None, :, None]
    best = _fmt_objective(dx, by, bp, np.ones((1, 1, 1)), imp)
    with_candidate = _fmt_objective(dx, by, bp, d_candidate.vector[:, None, None], imp)
    reached = np.all(with_candidate >= best - tol, axis=(1, 2))

    values = value_grid.points
    scan = _fmt_objective(dx, by, bp, values[None, None, :], imp)
    least = _least_reaching(np.all(scan >= best - tol, axis=1), values)
    return _optimality_verdict(reached, least, d_candidate.vector, d.universe.labels, value_grid.step, tol)


def check_min_identity(imp: Implication, grid: Grid, tol: Tolerance = DEFAULT_TOLERANCE) -> Verdict:
    """Check A_I(x, I(x, y)) = min(x, y) on the grid.

    Under this identity the FMP solution is monotone in D'.
    """
    agg = induced_aggregation(imp, tol, strict=False)
    x, y = grid.points[:, None], grid.points[None, :]
    lhs = _ev(agg, x, _ev(imp, x, y))
    rhs = np.minimum(x, y)
    idx = first_index(np.abs(lhs - rhs) > 1e-6)
    if idx is None:
        return Verdict(True, note=f"{grid.n}x{grid.n} grid")
    i, j = idx
    cex = {"x": float(grid.points[i]), "y": float(grid.points[j]), "A_I(x,I(x,y))": float(lhs[i, j])}
    return Verdict(False, cex)
