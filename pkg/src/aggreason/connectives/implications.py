"""Fuzzy implications: builtin closed forms, family constructors and checkers."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from aggreason.checks import PropertyCheck, PropertyReport, Verdict, first_index, locate_jumps
from aggreason.connectives.aggregations import classify, standard_negation
from aggreason.connectives.base import (
    Aggregation,
    Implication,
    ImplicationAttributes,
    Negation,
    UnaryFn,
)
from aggreason.errors import (
    InvalidGenerator,
    InvalidParameter,
    NotACopula,
    NotADisjunctor,
    NotATNorm,
    UnknownName,
)
from aggreason.numerics import (
    DEFAULT_TOLERANCE,
    INFINITY,
    ArrayLike,
    Grid,
    Tolerance,
    grid_points,
    inf_satisfying,
)

logger = logging.getLogger(__name__)

CHECK_TOL = 1e-9
# coarse grid used to confirm class preconditions of constructor inputs
PRECONDITION_GRID = 21


def _safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    return num / np.where(den > 0.0, den, 1.0)


# ---------------------------------------------------------------------------
# Builtin closed forms


def _goguen(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x <= y, 1.0, _safe_ratio(y, x))


def _godel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x <= y, 1.0, y)


def _lukasiewicz(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x <= y, 1.0, 1.0 - x + y)


def _kleene_dienes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.maximum(1.0 - x, y)


def _reichenbach(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 1.0 - x + x * y


def _rescher_gaines(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x <= y, 1.0, 0.0)


def _fodor(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(x <= y, 1.0, np.maximum(1.0 - x, y))


# Induced aggregations inf{z : I(x, z) >= y} with no builtin aggregation name.


def _kleene_dienes_induced(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(1.0 - x >= y, 0.0, y)


def _reichenbach_induced(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(1.0 - x >= y, 0.0, np.clip(_safe_ratio(y - 1.0 + x, x), 0.0, 1.0))


def _rescher_gaines_induced(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.where(y > 0.0, x, 0.0)


RESIDUATED = ImplicationAttributes(
    right_continuous_in_second_arg=True,
    satisfies_np=True,
    satisfies_ip=True,
    satisfies_ep=True,
    satisfies_op=True,
    satisfies_cp=False,
    family="r_implication",
)
S_IMPLICATION = ImplicationAttributes(
    right_continuous_in_second_arg=True,
    satisfies_np=True,
    satisfies_ip=False,
    satisfies_ep=True,
    satisfies_op=False,
    satisfies_cp=True,
    family="s_implication",
)


def goguen() -> Implication:
    return Implication(name="goguen", fn=_goguen, attrs=RESIDUATED, induced_name="product")


def godel() -> Implication:
    return Implication(name="godel", fn=_godel, attrs=RESIDUATED, induced_name="min")


def lukasiewicz() -> Implication:
    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=True,
        satisfies_np=True,
        satisfies_ip=True,
        satisfies_ep=True,
        satisfies_op=True,
        satisfies_cp=True,
        family="r_implication",
    )
    return Implication(
        name="lukasiewicz", fn=_lukasiewicz, attrs=attrs, induced_name="lukasiewicz_tnorm"
    )


def fodor() -> Implication:
    """Residual of the nilpotent minimum; also an S-implication of the nilpotent maximum."""
    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=True,
        satisfies_np=True,
        satisfies_ip=True,
        satisfies_ep=True,
        satisfies_op=True,
        satisfies_cp=True,
        family="r_implication",
    )
    return Implication(name="fodor", fn=_fodor, attrs=attrs, induced_name="nilpotent_minimum")


def kleene_dienes() -> Implication:
    return Implication(
        name="kleene_dienes",
        fn=_kleene_dienes,
        attrs=S_IMPLICATION,
        induced_fn=_kleene_dienes_induced,
    )


def reichenbach() -> Implication:
    return Implication(
        name="reichenbach",
        fn=_reichenbach,
        attrs=S_IMPLICATION,
        induced_fn=_reichenbach_induced,
    )


def rescher_gaines() -> Implication:
    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=True,
        satisfies_np=False,
        satisfies_ip=True,
        satisfies_ep=False,
        satisfies_op=True,
        satisfies_cp=True,
        family="rescher_gaines",
    )
    return Implication(
        name="rescher_gaines",
        fn=_rescher_gaines,
        attrs=attrs,
        induced_fn=_rescher_gaines_induced,
    )


IMPLICATION_FACTORIES: dict[str, Callable[[], Implication]] = {
    "goguen": goguen,
    "godel": godel,
    "lukasiewicz": lukasiewicz,
    "kleene_dienes": kleene_dienes,
    "reichenbach": reichenbach,
    "rescher_gaines": rescher_gaines,
    "fodor": fodor,
}


def builtin_implication(name: str) -> Implication:
    """Build a named closed-form implication.

    Raises:
        UnknownName: If the name is not a builtin implication.
    """
    factory = IMPLICATION_FACTORIES.get(name)
    if factory is None:
        raise UnknownName(f"unknown implication '{name}'")
    return factory()


# ---------------------------------------------------------------------------
# Generators


@dataclass(frozen=True)
class Generator:
    """An f-generator (decreasing, f(1)=0) or g-generator (increasing, g(0)=0).

    Values live in [0, INFINITY]. Without an explicit inverse the
    pseudo-inverse is found by bisection.
    """

    name: str
    kind: Literal["f", "g"]
    fn: UnaryFn = field(compare=False, repr=False)
    inverse: Optional[UnaryFn] = field(default=None, compare=False, repr=False)

    def __call__(self, t: ArrayLike) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    def pseudo_inverse(self, u: ArrayLike, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
        """f^(-1)(u) = f^-1(min(u, f(0))), g^(-1)(u) = g^-1(min(u, g(1)))."""
        cap = float(self(0.0 if self.kind == "f" else 1.0))
        u = np.minimum(np.asarray(u, dtype=float), cap)
        if self.inverse is not None:
            with np.errstate(over="ignore"):
                return np.clip(np.asarray(self.inverse(u), dtype=float), 0.0, 1.0)

        shape = u.shape
        if self.kind == "f":
            found = inf_satisfying(lambda t: self(t) <= u, tol, shape)
        else:
            found = inf_satisfying(lambda t: self(t) >= u, tol, shape)
        return np.asarray(found, dtype=float)


def _neg_log(t: np.ndarray) -> np.ndarray:
    return -np.log(t)


def _neg_log_complement(t: np.ndarray) -> np.ndarray:
    return -np.log1p(-t)


def neg_log() -> Generator:
    return Generator("neg_log", "f", _neg_log, lambda u: np.exp(-u))


def one_minus() -> Generator:
    return Generator("one_minus", "f", lambda t: 1.0 - t, lambda u: 1.0 - u)


def f_power(lam: float = 2.0) -> Generator:
    """f(t) = 1 - t^lam."""
    if not lam > 0.0:
        raise InvalidParameter(f"power generator needs lam > 0, got {lam}")
    return Generator(f"power({lam:g})", "f", lambda t: 1.0 - t**lam, lambda u: (1.0 - u) ** (1.0 / lam))


def identity() -> Generator:
    return Generator("identity", "g", lambda t: t, lambda u: u)


def neg_log_complement() -> Generator:
    return Generator("neg_log_complement", "g", _neg_log_complement, lambda u: -np.expm1(-u))


def g_power(lam: float = 2.0) -> Generator:
    """g(t) = t^lam."""
    if not lam > 0.0:
        raise InvalidParameter(f"power generator needs lam > 0, got {lam}")
    return Generator(f"power({lam:g})", "g", lambda t: t**lam, lambda u: u ** (1.0 / lam))


F_GENERATORS: dict[str, Callable[..., Generator]] = {
    "neg_log": neg_log,
    "one_minus": one_minus,
    "power": f_power,
}
G_GENERATORS: dict[str, Callable[..., Generator]] = {
    "identity": identity,
    "neg_log_complement": neg_log_complement,
    "power": g_power,
}


def validate_generator(gen: Generator, grid: Optional[Grid] = None) -> None:
    """Check the boundary value and strict monotonicity of a generator.

    Raises:
        InvalidGenerator: If a condition fails on the grid.
    """
    grid = grid or grid_points(101)
    values = gen(grid.points)
    if np.any(np.isnan(values)) or np.any(values < 0.0):
        raise InvalidGenerator(f"generator '{gen.name}' leaves [0, inf]")
    anchor = 1.0 if gen.kind == "f" else 0.0
    if float(gen(anchor)) != 0.0:
        raise InvalidGenerator(f"{gen.kind}-generator '{gen.name}' must vanish at {anchor:g}")
    steps = np.diff(values)
    strict = np.all(steps < 0.0) if gen.kind == "f" else np.all(steps > 0.0)
    if not strict:
        direction = "decreasing" if gen.kind == "f" else "increasing"
        raise InvalidGenerator(f"{gen.kind}-generator '{gen.name}' is not strictly {direction}")


def f_implication(gen: Generator, tol: Tolerance = DEFAULT_TOLERANCE) -> Implication:
    """I(x, y) = f^(-1)(x f(y)) with 0 * INFINITY = 0."""
    if gen.kind != "f":
        raise InvalidGenerator(f"'{gen.name}' is a {gen.kind}-generator, expected an f-generator")
    validate_generator(gen)

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        fy = gen(y)
        with np.errstate(invalid="ignore"):
            scaled = np.where(x == 0.0, 0.0, x * fy)
        return gen.pseudo_inverse(scaled, tol)

    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=True,
        satisfies_np=True,
        satisfies_ep=True,
        family="f_generated",
    )
    return Implication(
        name=f"f_implication({gen.name})",
        fn=fn,
        attrs=attrs,
        resolution=0.0 if gen.inverse is not None else tol.eps,
    )


def g_implication(gen: Generator, tol: Tolerance = DEFAULT_TOLERANCE) -> Implication:
    """I(x, y) = g^(-1)(g(y) / x) with g(y) / 0 = INFINITY."""
    if gen.kind != "g":
        raise InvalidGenerator(f"'{gen.name}' is an {gen.kind}-generator, expected a g-generator")
    validate_generator(gen)

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        gy = gen(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(x == 0.0, INFINITY, gy / x)
        return gen.pseudo_inverse(scaled, tol)

    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=True,
        satisfies_np=True,
        satisfies_ep=True,
        family="g_generated",
    )
    return Implication(
        name=f"g_implication({gen.name})",
        fn=fn,
        attrs=attrs,
        resolution=0.0 if gen.inverse is not None else tol.eps,
    )


# ---------------------------------------------------------------------------
# Constructors from aggregations


def r_implication_from_tnorm(tnorm: Aggregation, tol: Tolerance = DEFAULT_TOLERANCE) -> Implication:
    """The R-implication sup{z : T(x, z) <= y} of a t-norm.

    Raises:
        NotATNorm: If the aggregation is not declared and verified a t-norm.
    """
    if not tnorm.has_tag("tnorm") or not classify(tnorm, grid_points(PRECONDITION_GRID)).holds("tnorm"):
        raise NotATNorm(f"'{tnorm.name}' is not a t-norm")
    # Import here to avoid circular imports
    from aggreason.residuation import residual_implication

    return residual_implication(tnorm, tol)


def _is_disjunctor(agg: Aggregation, grid: Grid) -> bool:
    points = grid.points
    left = np.asarray(agg(1.0, points), dtype=float)
    right = np.asarray(agg(points, 1.0), dtype=float)
    return bool(np.all(np.abs(left - 1.0) <= CHECK_TOL) and np.all(np.abs(right - 1.0) <= CHECK_TOL))


def an_implication(agg: Aggregation, negation: Negation) -> Implication:
    """I(x, y) = A(N(x), y) for a disjunctor A.

    A disjunctor is an aggregation with annihilator 1, which makes
    I(0, y) = A(1, y) = 1.

    Raises:
        NotADisjunctor: If 1 does not annihilate A on the grid.
    """
    if agg.annihilates("left") != 1.0 or not _is_disjunctor(agg, grid_points(101)):
        raise NotADisjunctor(f"'{agg.name}' does not have annihilator 1")

    def fn(x: np.ndarray, y: np.ndarray) -> ArrayLike:
        return agg.fn(np.asarray(negation.fn(x), dtype=float), y)

    tconorm = agg.has_tag("tconorm")
    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=agg.attrs.right_continuous_in_second_arg,
        satisfies_np=True if agg.neutral("left") == 0.0 else None,
        satisfies_ep=True if tconorm else None,
        satisfies_cp=True if tconorm and negation.name == "standard" else None,
        family="s_implication" if tconorm else "an_implication",
    )
    return Implication(name=f"an({agg.name},{negation.name})", fn=fn, attrs=attrs)


def _require_copula(copula: Aggregation) -> None:
    if not copula.has_tag("copula") or not classify(copula, grid_points(PRECONDITION_GRID)).holds("copula"):
        raise NotACopula(f"'{copula.name}' is not a copula")


def probabilistic_implication(copula: Aggregation) -> Implication:
    """I_C(x, y) = C(x, y) / x for x > 0 and 1 for x = 0.

    Not every copula yields a fuzzy implication this way; when (I1) fails on
    the grid the descriptor is returned uncertified.

    Raises:
        NotACopula: If the aggregation is not a copula.
    """
    _require_copula(copula)

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        values = np.asarray(copula.fn(x, y), dtype=float)
        return np.where(x > 0.0, np.minimum(_safe_ratio(values, x), 1.0), 1.0)

    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=copula.attrs.right_continuous_in_second_arg,
        satisfies_np=True,
        family="probabilistic",
    )
    implication = Implication(name=f"probabilistic({copula.name})", fn=fn, attrs=attrs)

    grid = grid_points(101)
    idx = first_index(np.diff(implication.table(grid), axis=0) > CHECK_TOL)
    if idx is None:
        return implication
    message = f"not nonincreasing in the first argument near x={grid.points[idx[0]]:g}, y={grid.points[idx[1]]:g}"
    logger.warning(f"{implication.name}: {message}")
    return Implication(
        name=implication.name, fn=fn, attrs=attrs, certified=False, warnings=(message,)
    )


def probabilistic_s_implication(copula: Aggregation) -> Implication:
    """I~_C(x, y) = C(x, y) - x + 1.

    Raises:
        NotACopula: If the aggregation is not a copula.
    """
    _require_copula(copula)

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(copula.fn(x, y), dtype=float) - x + 1.0, 0.0, 1.0)

    attrs = ImplicationAttributes(
        right_continuous_in_second_arg=copula.attrs.right_continuous_in_second_arg,
        satisfies_np=True,
        family="probabilistic_s",
    )
    return Implication(name=f"probabilistic_s({copula.name})", fn=fn, attrs=attrs)


# ---------------------------------------------------------------------------
# Property checks


def _pair_cex(points: np.ndarray, idx: Optional[tuple[int, ...]], **values: np.ndarray) -> Optional[dict]:
    if idx is None:
        return None
    cex = {"x": float(points[idx[0]]), "y": float(points[idx[1]])}
    cex.update({key: float(table[idx]) for key, table in values.items()})
    return cex


def check_implication_properties(
    imp: Implication, grid: Grid, negation: Optional[Negation] = None
) -> PropertyReport:
    """Grid verdicts for (I1)-(I5), (LB), (RB), (NP), (IP), (EP), (CP), (OP).

    (CP) is checked against ``negation``, the standard negation by default.
    Also checks that the section y -> I(1, y) is strictly increasing.
    """
    negation = negation or standard_negation()
    tol = CHECK_TOL + 4.0 * imp.resolution
    report = PropertyReport(subject=imp.name, grid_n=grid.n)
    report.details["negation"] = negation.name
    points = grid.points
    n = grid.n
    table = np.asarray(imp.table(grid))
    xs = np.broadcast_to(points[:, None], (n, n))
    ys = np.broadcast_to(points[None, :], (n, n))
    attrs = imp.attrs

    idx = first_index(np.diff(table, axis=0) > tol)
    report.add(PropertyCheck("I1", idx is None, _pair_cex(points, idx, I=table)))
    idx = first_index(np.diff(table, axis=1) < -tol)
    report.add(PropertyCheck("I2", idx is None, _pair_cex(points, idx, I=table)))
    for name, x, y, target in (("I3", 0.0, 0.0, 1.0), ("I4", 1.0, 1.0, 1.0), ("I5", 1.0, 0.0, 0.0)):
        value = float(imp(x, y))
        ok = abs(value - target) <= tol
        report.add(PropertyCheck(name, ok, None if ok else {"x": x, "y": y, "I": value}))

    idx = first_index(table[0, :] < 1.0 - tol)
    lb_cex = None if idx is None else {"y": float(points[idx[0]]), "I(0,y)": float(table[0, idx[0]])}
    report.add(PropertyCheck("LB", idx is None, lb_cex))
    idx = first_index(table[:, -1] < 1.0 - tol)
    rb_cex = None if idx is None else {"x": float(points[idx[0]]), "I(x,1)": float(table[idx[0], -1])}
    report.add(PropertyCheck("RB", idx is None, rb_cex))

    idx = first_index(np.abs(table[-1, :] - points) > tol)
    np_cex = None if idx is None else {"y": float(points[idx[0]]), "I(1,y)": float(table[-1, idx[0]])}
    report.add(PropertyCheck("NP", idx is None, np_cex, attrs.satisfies_np))

    diagonal = np.diagonal(table)
    idx = first_index(diagonal < 1.0 - tol)
    ip_cex = None if idx is None else {"x": float(points[idx[0]]), "I(x,x)": float(diagonal[idx[0]])}
    report.add(PropertyCheck("IP", idx is None, ip_cex, attrs.satisfies_ip))

    # lhs[i, j, k] = I(x_i, I(x_j, x_k)), rhs[i, j, k] = I(x_j, I(x_i, x_k))
    cube = (n, n, n)
    lhs = np.broadcast_to(
        np.asarray(imp.fn(points[:, None, None], table[None, :, :]), dtype=float), cube
    )
    rhs = np.broadcast_to(
        np.asarray(imp.fn(points[None, :, None], table[:, None, :]), dtype=float), cube
    )
    idx = first_index(np.abs(lhs - rhs) > tol)
    ep_cex = None
    if idx is not None:
        ep_cex = {
            "x": float(points[idx[0]]),
            "y": float(points[idx[1]]),
            "z": float(points[idx[2]]),
            "I(x,I(y,z))": float(lhs[idx]),
            "I(y,I(x,z))": float(rhs[idx]),
        }
    report.add(PropertyCheck("EP", idx is None, ep_cex, attrs.satisfies_ep))

    idx = first_index((table >= 1.0 - tol) != (xs <= ys))
    report.add(PropertyCheck("OP", idx is None, _pair_cex(points, idx, I=table), attrs.satisfies_op))

    negated = np.asarray(negation(points), dtype=float)
    contrapositive = np.broadcast_to(
        np.asarray(imp.fn(negated[None, :], negated[:, None]), dtype=float), (n, n)
    )
    idx = first_index(np.abs(table - contrapositive) > tol)
    declared_cp = attrs.satisfies_cp if negation.name == "standard" else None
    report.add(
        PropertyCheck(
            "CP",
            idx is None,
            _pair_cex(points, idx, I=table, contrapositive=contrapositive),
            declared_cp,
        )
    )

    section = table[-1, :]
    idx = first_index(np.diff(section) <= 0.0)
    section_cex = None
    if idx is not None:
        section_cex = {"y1": float(points[idx[0]]), "y2": float(points[idx[0] + 1])}
    report.add(PropertyCheck("strictly_increasing_section", idx is None, section_cex))

    for check in report.contradictions:
        logger.warning(f"{imp.name}: declared '{check.name}' contradicts grid evidence")
    return report


def check_right_continuity_second_arg(
    imp: Implication, grid: Grid, jump_tol: float = 1e-3
) -> Verdict:
    """Scan y -> I(x, y) for jumps whose value sits on the lower side.

    Heuristic twin of the aggregation left-continuity scan.
    """
    jumps = locate_jumps(imp.fn, grid, jump_tol)
    shape = jumps.x.shape
    at_value = np.broadcast_to(np.asarray(imp.fn(jumps.x, jumps.at), dtype=float), shape)
    above = np.broadcast_to(np.asarray(imp.fn(jumps.x, jumps.upper), dtype=float), shape)
    idx = first_index(above - at_value > jump_tol)
    if idx is None:
        return Verdict(True, note=f"no right jump above {jump_tol:g} on grid n={grid.n}")

    k = idx[0]
    cex = {
        "x": float(jumps.x[k]),
        "y": float(jumps.at[k]),
        "value": float(at_value[k]),
        "right_limit": float(above[k]),
    }
    note = None
    if imp.attrs.right_continuous_in_second_arg:
        note = "declared right-continuous, but a right jump was found"
        logger.warning(f"{imp.name}: {note} at x={cex['x']:g}, y={cex['y']:g}")
    return Verdict(False, cex, note)
