"""Negations and binary aggregation functions with their grid classifiers."""

import logging
from typing import Callable, Optional

import numpy as np

from aggreason.checks import PropertyCheck, PropertyReport, Verdict, first_index, locate_jumps
from aggreason.connectives.base import (
    AGGREGATION_TAGS,
    Aggregation,
    AggregationAttributes,
    Negation,
    Side,
    SidedElement,
)
from aggreason.errors import InvalidParameter, UnknownName
from aggreason.numerics import Grid

logger = logging.getLogger(__name__)

CHECK_TOL = 1e-9
RECTANGLE_TOL = 1e-12

TNORM_TAGS = frozenset({"commutative", "associative", "conjunctive", "semicopula", "tnorm"})
TCONORM_TAGS = frozenset({"commutative", "associative", "disjunctive", "tconorm"})


# ---------------------------------------------------------------------------
# Negations


def standard_negation() -> Negation:
    return Negation(
        name="standard", fn=lambda x: 1.0 - x, declared_strict=True, declared_strong=True
    )


def sugeno_negation(lam: float = 1.0) -> Negation:
    """Sugeno negation (1 - x) / (1 + lam x), strong for every lam > -1."""
    if not lam > -1.0:
        raise InvalidParameter(f"sugeno negation needs lambda > -1, got {lam}")
    return Negation(
        name=f"sugeno({lam:g})",
        fn=lambda x: (1.0 - x) / (1.0 + lam * x),
        declared_strict=True,
        declared_strong=True,
    )


def godel_negation() -> Negation:
    """The least fuzzy negation that is 0 on (0, 1]."""
    return Negation(name="godel", fn=lambda x: np.where(x == 0.0, 1.0, 0.0))


NEGATION_FACTORIES: dict[str, Callable[..., Negation]] = {
    "standard": standard_negation,
    "sugeno": sugeno_negation,
    "godel": godel_negation,
}


def check_negation(negation: Negation, grid: Grid) -> PropertyReport:
    """Check N1, N2 and the strictness and involution declarations."""
    points = grid.points
    values = np.asarray(negation(points), dtype=float)
    report = PropertyReport(subject=negation.name, grid_n=grid.n)

    at_zero, at_one = float(negation(0.0)), float(negation(1.0))
    boundary = abs(at_zero - 1.0) <= CHECK_TOL and abs(at_one) <= CHECK_TOL
    report.add(
        PropertyCheck("N1", boundary, None if boundary else {"N(0)": at_zero, "N(1)": at_one})
    )

    steps = np.diff(values)
    idx = first_index(steps > CHECK_TOL)
    report.add(
        PropertyCheck(
            "N2",
            idx is None,
            None if idx is None else {"x1": float(points[idx[0]]), "x2": float(points[idx[0] + 1])},
        )
    )

    idx = first_index(steps >= 0.0)
    report.add(
        PropertyCheck(
            "strict",
            idx is None,
            None if idx is None else {"x1": float(points[idx[0]]), "x2": float(points[idx[0] + 1])},
            declared=negation.declared_strict,
        )
    )

    twice = np.asarray(negation(values), dtype=float)
    idx = first_index(np.abs(twice - points) > CHECK_TOL)
    report.add(
        PropertyCheck(
            "strong",
            idx is None,
            None if idx is None else {"x": float(points[idx[0]]), "N(N(x))": float(twice[idx[0]])},
            declared=negation.declared_strong,
        )
    )
    return report


# ---------------------------------------------------------------------------
# Aggregation functions


def _minimum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.minimum(x, y)


def _product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x * y


def _lukasiewicz_tnorm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.maximum(x + y - 1.0, 0.0)


def _drastic_tnorm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x == 1.0, y, np.where(y == 1.0, x, 0.0))


def _nilpotent_minimum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x + y > 1.0, np.minimum(x, y), 0.0)


def _maximum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.maximum(x, y)


def _probabilistic_sum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x + y - x * y


def _lukasiewicz_tconorm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.minimum(x + y, 1.0)


def _arithmetic_mean(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 0.5 * (x + y)


def _geometric_mean(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.sqrt(x * y)


def _clayton(theta: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        positive = (x > 0.0) & (y > 0.0)
        # only positive entries reach the negative powers
        safe_x = np.where(positive, x, 1.0)
        safe_y = np.where(positive, y, 1.0)
        inner = np.maximum(safe_x ** (-theta) + safe_y ** (-theta) - 1.0, 1.0)
        return np.where(positive, inner ** (-1.0 / theta), 0.0)

    return fn


def _attrs(
    tags: frozenset[str],
    neutral: Optional[float] = None,
    annihilator: Optional[float] = None,
    left_continuous: bool = True,
    right_continuous: bool = True,
) -> AggregationAttributes:
    return AggregationAttributes(
        left_continuous_in_second_arg=left_continuous,
        right_continuous_in_second_arg=right_continuous,
        neutral_element=None if neutral is None else SidedElement(neutral),
        annihilator=None if annihilator is None else SidedElement(annihilator),
        class_tags=tags,
    )


def minimum() -> Aggregation:
    attrs = _attrs(TNORM_TAGS | {"copula", "averaging"}, neutral=1.0, annihilator=0.0)
    return Aggregation(name="min", fn=_minimum, attrs=attrs, residual_name="godel")


def product() -> Aggregation:
    attrs = _attrs(TNORM_TAGS | {"copula"}, neutral=1.0, annihilator=0.0)
    return Aggregation(name="product", fn=_product, attrs=attrs, residual_name="goguen")


def lukasiewicz_tnorm() -> Aggregation:
    attrs = _attrs(TNORM_TAGS | {"copula"}, neutral=1.0, annihilator=0.0)
    return Aggregation(
        name="lukasiewicz_tnorm",
        fn=_lukasiewicz_tnorm,
        attrs=attrs,
        residual_name="lukasiewicz",
    )


def drastic_tnorm() -> Aggregation:
    attrs = _attrs(TNORM_TAGS, neutral=1.0, annihilator=0.0, left_continuous=False)
    return Aggregation(name="drastic_tnorm", fn=_drastic_tnorm, attrs=attrs)


def nilpotent_minimum() -> Aggregation:
    """Left-continuous but not continuous t-norm; its residual is Fodor's implication."""
    attrs = _attrs(TNORM_TAGS, neutral=1.0, annihilator=0.0, right_continuous=False)
    return Aggregation(
        name="nilpotent_minimum", fn=_nilpotent_minimum, attrs=attrs, residual_name="fodor"
    )


def maximum() -> Aggregation:
    attrs = _attrs(TCONORM_TAGS | {"averaging"}, neutral=0.0, annihilator=1.0)
    return Aggregation(name="max", fn=_maximum, attrs=attrs)


def probabilistic_sum() -> Aggregation:
    attrs = _attrs(TCONORM_TAGS, neutral=0.0, annihilator=1.0)
    return Aggregation(name="probabilistic_sum", fn=_probabilistic_sum, attrs=attrs)


def lukasiewicz_tconorm() -> Aggregation:
    attrs = _attrs(TCONORM_TAGS, neutral=0.0, annihilator=1.0)
    return Aggregation(name="lukasiewicz_tconorm", fn=_lukasiewicz_tconorm, attrs=attrs)


def arithmetic_mean() -> Aggregation:
    attrs = _attrs(frozenset({"commutative", "averaging"}))
    return Aggregation(name="arithmetic_mean", fn=_arithmetic_mean, attrs=attrs)


def geometric_mean() -> Aggregation:
    attrs = _attrs(frozenset({"commutative", "averaging"}), annihilator=0.0)
    return Aggregation(name="geometric_mean", fn=_geometric_mean, attrs=attrs)


def clayton_copula(theta: float = 1.0) -> Aggregation:
    """Clayton copula (x^-theta + y^-theta - 1)^(-1/theta), theta > 0.

    The family is a strict t-norm for every theta and tends to the product
    as theta tends to 0.
    """
    if not theta > 0.0:
        raise InvalidParameter(f"clayton copula needs theta > 0, got {theta}")
    attrs = _attrs(TNORM_TAGS | {"copula"}, neutral=1.0, annihilator=0.0)
    return Aggregation(name=f"clayton_copula({theta:g})", fn=_clayton(theta), attrs=attrs)


AGGREGATION_FACTORIES: dict[str, Callable[..., Aggregation]] = {
    "min": minimum,
    "product": product,
    "lukasiewicz_tnorm": lukasiewicz_tnorm,
    "drastic_tnorm": drastic_tnorm,
    "nilpotent_minimum": nilpotent_minimum,
    "max": maximum,
    "probabilistic_sum": probabilistic_sum,
    "lukasiewicz_tconorm": lukasiewicz_tconorm,
    "arithmetic_mean": arithmetic_mean,
    "geometric_mean": geometric_mean,
    "clayton_copula": clayton_copula,
}


def builtin_aggregation(name: str, **params: float) -> Aggregation:
    """Build a named aggregation function.

    Args:
        name: One of the keys of ``AGGREGATION_FACTORIES``.
        **params: Family parameters, e.g. ``theta`` for ``clayton_copula``.

    Raises:
        UnknownName: If the name is not a builtin aggregation.
        InvalidParameter: If a parameter is unknown or out of range.
    """
    factory = AGGREGATION_FACTORIES.get(name)
    if factory is None:
        raise UnknownName(f"unknown aggregation '{name}'")
    try:
        return factory(**params)
    except TypeError as e:
        raise InvalidParameter(f"bad parameters for aggregation '{name}': {params}") from e


# ---------------------------------------------------------------------------
# Classifiers


def _pair(points: np.ndarray, idx: tuple[int, ...], **values: float) -> dict[str, float]:
    out = {"x": float(points[idx[0]]), "y": float(points[idx[1]])}
    out.update({k: float(v) for k, v in values.items()})
    return out


def check_aggregation_axioms(agg: Aggregation, grid: Grid) -> PropertyReport:
    """Check the boundary conditions (A1) and monotonicity (A2) on a grid."""
    report = PropertyReport(subject=agg.name, grid_n=grid.n)
    points = grid.points
    table = agg.table(grid)

    low, high = float(agg(0.0, 0.0)), float(agg(1.0, 1.0))
    a1 = abs(low) <= CHECK_TOL and abs(high - 1.0) <= CHECK_TOL
    report.add(PropertyCheck("A1", a1, None if a1 else {"A(0,0)": low, "A(1,1)": high}))

    for axis, label in ((0, "A2_first"), (1, "A2_second")):
        idx = first_index(np.diff(table, axis=axis) < -CHECK_TOL)
        cex = None
        if idx is not None:
            later = (idx[0] + 1, idx[1]) if axis == 0 else (idx[0], idx[1] + 1)
            cex = {
                "before": _pair(points, idx, value=table[idx]),
                "after": _pair(points, later, value=table[later]),
            }
        report.add(PropertyCheck(label, idx is None, cex))
    return report


def _element_check(
    agg: Aggregation,
    points: np.ndarray,
    role: str,
    side: Side,
    declared: Optional[float],
) -> tuple[PropertyCheck, Optional[float]]:
    """Check or search a neutral element / annihilator acting on one side."""

    def acts(candidate: np.ndarray) -> np.ndarray:
        # rows: candidates, columns: every grid point
        c = candidate[:, None]
        values = agg.fn(c, points[None, :]) if side == "left" else agg.fn(points[None, :], c)
        values = np.broadcast_to(np.asarray(values, dtype=float), (candidate.size, points.size))
        target = points[None, :] if role == "neutral" else c
        return np.abs(values - target) <= CHECK_TOL

    name = f"{side}_{role}"
    if declared is not None:
        ok = acts(np.array([declared]))[0]
        idx = first_index(~ok)
        cex = None if idx is None else {role: declared, "x": float(points[idx[0]])}
        return PropertyCheck(name, idx is None, cex, declared=True), declared if idx is None else None

    hits = np.nonzero(np.all(acts(points), axis=1))[0]
    found = float(points[hits[0]]) if hits.size else None
    return PropertyCheck(name, found is not None, None, declared=False), found


def classify(agg: Aggregation, grid: Grid) -> PropertyReport:
    """Grid verdicts for the algebraic classes of an aggregation function.

    Declared class tags are compared with the evidence; any mismatch shows
    up in ``report.contradictions``.
    """
    report = PropertyReport(subject=agg.name, grid_n=grid.n)
    points = grid.points
    table = np.asarray(agg.table(grid))
    low = np.minimum(points[:, None], points[None, :])
    high = np.maximum(points[:, None], points[None, :])
    found: dict[str, bool] = {}

    idx = first_index(np.abs(table - table.T) > CHECK_TOL)
    found["commutative"] = idx is None
    commutative_cex = None if idx is None else _pair(points, idx, xy=table[idx], yx=table.T[idx])

    cube = (grid.n, grid.n, grid.n)
    left = np.broadcast_to(
        np.asarray(agg.fn(table[:, :, None], points[None, None, :]), dtype=float), cube
    )
    right = np.broadcast_to(
        np.asarray(agg.fn(points[:, None, None], table[None, :, :]), dtype=float), cube
    )
    idx = first_index(np.abs(left - right) > CHECK_TOL)
    found["associative"] = idx is None
    associative_cex = None
    if idx is not None:
        associative_cex = {
            "x": float(points[idx[0]]),
            "y": float(points[idx[1]]),
            "z": float(points[idx[2]]),
            "A(A(x,y),z)": float(left[idx]),
            "A(x,A(y,z))": float(right[idx]),
        }

    conjunctive = table <= low + CHECK_TOL
    disjunctive = table >= high - CHECK_TOL
    found["conjunctive"] = bool(np.all(conjunctive))
    found["disjunctive"] = bool(np.all(disjunctive))
    found["averaging"] = bool(np.all((table >= low - CHECK_TOL) & (table <= high + CHECK_TOL)))

    elements: dict[str, Optional[float]] = {}
    for role in ("neutral", "annihilator"):
        for side in ("left", "right"):
            declared = agg.neutral(side) if role == "neutral" else agg.annihilates(side)
            check, value = _element_check(agg, points, role, side, declared)
            report.add(check)
            elements[f"{side}_{role}"] = value
    report.details.update(elements)

    found["semicopula"] = elements["left_neutral"] == 1.0 and elements["right_neutral"] == 1.0
    rectangles = np.diff(np.diff(table, axis=0), axis=1)
    idx = first_index(rectangles < -RECTANGLE_TOL)
    two_increasing = idx is None
    rectangle_cex = None
    if idx is not None:
        rectangle_cex = {
            "x1": float(points[idx[0]]),
            "x2": float(points[idx[0] + 1]),
            "y1": float(points[idx[1]]),
            "y2": float(points[idx[1] + 1]),
            "volume": float(rectangles[idx]),
        }
    report.add(PropertyCheck("two_increasing", two_increasing, rectangle_cex))

    found["copula"] = found["semicopula"] and two_increasing
    found["tnorm"] = found["commutative"] and found["associative"] and found["semicopula"]
    found["tconorm"] = (
        found["commutative"]
        and found["associative"]
        and elements["left_neutral"] == 0.0
        and elements["right_neutral"] == 0.0
    )

    cexes = {"commutative": commutative_cex, "associative": associative_cex}
    for tag in sorted(AGGREGATION_TAGS):
        report.add(
            PropertyCheck(tag, found[tag], cexes.get(tag), declared=agg.has_tag(tag))
        )

    for check in report.contradictions:
        logger.warning(f"{agg.name}: declared '{check.name}' contradicts grid evidence")
    return report


def check_left_continuity_second_arg(
    agg: Aggregation, grid: Grid, jump_tol: float = 1e-3
) -> Verdict:
    """Scan z -> A(x, z) for jumps whose upper value is attained at the jump.

    This is a heuristic. The declared flag stays authoritative and the scan
    only reports evidence that contradicts it.
    """
    jumps = locate_jumps(agg.fn, grid, jump_tol)
    at_value = np.broadcast_to(np.asarray(agg.fn(jumps.x, jumps.at), dtype=float), jumps.x.shape)
    below = np.broadcast_to(np.asarray(agg.fn(jumps.x, jumps.lower), dtype=float), jumps.x.shape)
    idx = first_index(at_value - below > jump_tol)
    if idx is None:
        return Verdict(True, note=f"no left jump above {jump_tol:g} on grid n={grid.n}")

    k = idx[0]
    cex = {
        "x": float(jumps.x[k]),
        "z": float(jumps.at[k]),
        "value": float(at_value[k]),
        "left_limit": float(below[k]),
    }
    note = None
    if agg.attrs.left_continuous_in_second_arg:
        note = "declared left-continuous, but a left jump was found"
        logger.warning(f"{agg.name}: {note} at x={cex['x']:g}, z={cex['z']:g}")
    return Verdict(False, cex, note)
