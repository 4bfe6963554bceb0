"""Residuation between aggregation functions and fuzzy implications.

``residual_implication`` turns an aggregation A into
I_A(x, y) = sup{z : A(x, z) <= y} and ``induced_aggregation`` turns an
implication I into A_I(x, y) = inf{z : I(x, z) >= y}. Builtin connectives
short-circuit to their closed forms; everything else is bisected.
"""

import logging
from typing import Optional

import numpy as np

from aggreason.checks import Verdict, first_index
from aggreason.connectives.aggregations import builtin_aggregation
from aggreason.connectives.base import (
    Aggregation,
    AggregationAttributes,
    Implication,
    ImplicationAttributes,
    SidedElement,
)
from aggreason.connectives.implications import IMPLICATION_FACTORIES, builtin_implication
from aggreason.errors import ConditionViolated
from aggreason.numerics import (
    DEFAULT_TOLERANCE,
    Grid,
    Tolerance,
    grid_points,
    inf_satisfying,
    sup_satisfying,
)

logger = logging.getLogger(__name__)

ADJUNCTION_SLACK = 1e-6
CERTIFICATE_GRID = 101


def _certificate_warnings(agg: Aggregation, grid: Grid) -> list[str]:
    """Grid check of A(1, y) > 0 for y > 0 and A(0, y) = 0 for y < 1."""
    points = grid.points
    problems = []
    top = np.broadcast_to(np.asarray(agg.fn(np.ones_like(points), points), dtype=float), points.shape)
    idx = first_index((points > 0.0) & (top <= 0.0))
    if idx is not None:
        problems.append(f"A(1, y) = 0 at y={points[idx[0]]:g}")
    bottom = np.broadcast_to(np.asarray(agg.fn(np.zeros_like(points), points), dtype=float), points.shape)
    idx = first_index((points < 1.0) & (bottom != 0.0))
    if idx is not None:
        problems.append(f"A(0, y) = {bottom[idx[0]]:g} at y={points[idx[0]]:g}")
    return problems


def residual_implication(
    agg: Aggregation,
    tol: Tolerance = DEFAULT_TOLERANCE,
    closed_form: bool = True,
) -> Implication:
    """The residual I_A(x, y) = sup{z : A(x, z) <= y}.

    The result is a certified fuzzy implication only when A(1, y) > 0 for
    every y > 0 and A(0, y) = 0 for every y < 1. Otherwise it is still
    returned, flagged ``certified=False`` with the failed conditions listed
    in ``warnings``.

    Args:
        agg: The aggregation to residuate.
        tol: Bisection tolerance for the numeric path.
        closed_form: Use the builtin closed form when one is known.
    """
    if closed_form and agg.residual_name:
        return builtin_implication(agg.residual_name)

    # predicates against a derived aggregation are widened by its own error
    slack = 2.0 * agg.resolution

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        shape = np.broadcast(x, y).shape
        xs = np.broadcast_to(x, shape)
        ys = np.broadcast_to(y, shape)

        def below(z: np.ndarray) -> np.ndarray:
            return np.asarray(agg.fn(xs, z), dtype=float) <= ys + slack

        return np.asarray(sup_satisfying(below, tol, shape), dtype=float)

    left_one = agg.neutral("left") == 1.0
    right_one = agg.neutral("right") == 1.0
    left_continuous = agg.attrs.left_continuous_in_second_arg
    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=left_continuous,
        satisfies_np=True if left_one else None,
        satisfies_ip=True if right_one else None,
        satisfies_op=True if right_one and left_continuous else None,
        satisfies_ep=True if agg.has_tag("tnorm") and left_continuous else None,
        family="residual",
    )

    problems = _certificate_warnings(agg, grid_points(CERTIFICATE_GRID))
    for problem in problems:
        logger.warning(f"residual of {agg.name} is not a certified implication: {problem}")
    return Implication(
        name=f"residual({agg.name})",
        fn=fn,
        attrs=attrs,
        resolution=tol.eps,
        certified=not problems,
        warnings=tuple(problems),
    )


def top_section_violation(imp: Implication) -> Optional[float]:
    """First grid y < 1 with I(1, y) = 1, or None when I(1, y) < 1 throughout."""
    points = grid_points(CERTIFICATE_GRID).points
    section = np.broadcast_to(np.asarray(imp.fn(np.ones_like(points), points), dtype=float), points.shape)
    idx = first_index((points < 1.0) & (section >= 1.0))
    return None if idx is None else float(points[idx[0]])


def induced_aggregation(
    imp: Implication,
    tol: Tolerance = DEFAULT_TOLERANCE,
    closed_form: bool = True,
    strict: bool = True,
) -> Aggregation:
    """The induced aggregation A_I(x, y) = inf{z : I(x, z) >= y}.

    0 annihilates A_I on both sides. A_I is declared left-continuous in its
    second argument when I is declared right-continuous in its second.

    Args:
        imp: The implication to induce from.
        tol: Bisection tolerance for the numeric path.
        closed_form: Use the builtin closed form when one is known.
        strict: Refuse implications with I(1, y) = 1 for some y < 1. With
            ``strict=False`` the infimum is still formed; the result then
            need not fix (1, 1).

    Raises:
        ConditionViolated: If ``strict`` and I(1, y) = 1 for some grid y < 1.
    """
    violation = top_section_violation(imp)
    if violation is not None and strict:
        raise ConditionViolated(
            f"{imp.name}: I(1, y) = 1 at y={violation:g}; A_I is not an aggregation"
        )

    if closed_form and imp.induced_name:
        return builtin_aggregation(imp.induced_name)

    attrs = AggregationAttributes(
        left_continuous_in_second_arg=imp.attrs.right_continuous_in_second_arg,
        neutral_element=SidedElement(1.0, "left") if imp.attrs.satisfies_np else None,
        annihilator=SidedElement(0.0),
    )
    residual_name = imp.name if imp.name in IMPLICATION_FACTORIES else None
    if closed_form and imp.induced_fn is not None:
        return Aggregation(
            name=f"induced({imp.name})",
            fn=imp.induced_fn,
            attrs=attrs,
            residual_name=residual_name if imp.attrs.right_continuous_in_second_arg else None,
        )

    slack = 2.0 * imp.resolution

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        shape = np.broadcast(x, y).shape
        xs = np.broadcast_to(x, shape)
        ys = np.broadcast_to(y, shape)

        def reaches(z: np.ndarray) -> np.ndarray:
            return np.asarray(imp.fn(xs, z), dtype=float) >= ys - slack

        return np.asarray(inf_satisfying(reaches, tol, shape), dtype=float)

    return Aggregation(name=f"induced({imp.name})", fn=fn, attrs=attrs, resolution=tol.eps)


def _triples(samples: Optional[np.ndarray], grid: Optional[Grid]) -> tuple[np.ndarray, ...]:
    if samples is not None:
        triples = np.asarray(samples, dtype=float).reshape(-1, 3)
        return triples[:, 0], triples[:, 1], triples[:, 2]
    points = (grid or grid_points(51)).points
    x, y, z = np.meshgrid(points, points, points, indexing="ij")
    return x.ravel(), y.ravel(), z.ravel()


def check_adjunction(
    agg: Aggregation,
    imp: Implication,
    samples: Optional[np.ndarray] = None,
    grid: Optional[Grid] = None,
    slack: float = ADJUNCTION_SLACK,
) -> Verdict:
    """Check A(x, z) <= y  <=>  z <= I(x, y) on sampled (x, y, z) triples.

    Without explicit samples every triple of a 51-point grid is used. A
    violation must clear ``slack``; the "z <= I but A > y" direction is
    also confirmed at z - slack so a jump shifted by rounding is ignored.
    """
    x, y, z = _triples(samples, grid)
    aggregated = np.broadcast_to(np.asarray(agg.fn(x, z), dtype=float), x.shape)
    implied = np.broadcast_to(np.asarray(imp.fn(x, y), dtype=float), x.shape)
    shifted = np.broadcast_to(
        np.asarray(agg.fn(x, np.maximum(z - slack, 0.0)), dtype=float), x.shape
    )

    too_far = (aggregated <= y) & (z > implied + slack)
    too_high = (z <= implied) & (aggregated > y + slack) & (shifted > y + slack)
    idx = first_index(too_far | too_high)
    if idx is None:
        return Verdict(True, note=f"{x.size} triples checked")

    k = idx[0]
    direction = "A(x,z) <= y but z > I(x,y)" if too_far[k] else "z <= I(x,y) but A(x,z) > y"
    cex = {
        "x": float(x[k]),
        "y": float(y[k]),
        "z": float(z[k]),
        "A(x,z)": float(aggregated[k]),
        "I(x,y)": float(implied[k]),
    }
    return Verdict(False, cex, direction)


def roundtrip_check(
    imp: Implication, grid: Grid, tol: Tolerance = DEFAULT_TOLERANCE
) -> float:
    """Largest grid gap |I(x, y) - I_{A_I}(x, y)| with both steps bisected."""
    if not imp.attrs.right_continuous_in_second_arg:
        logger.warning(f"{imp.name} is not declared right-continuous; the round trip may not close")
    induced = induced_aggregation(imp, tol, closed_form=False)
    back = residual_implication(induced, tol, closed_form=False)
    gap = float(np.max(np.abs(np.asarray(imp.table(grid)) - np.asarray(back.table(grid)))))
    logger.debug(f"round trip of {imp.name} on grid n={grid.n}: gap {gap:.3g}")
    return gap
