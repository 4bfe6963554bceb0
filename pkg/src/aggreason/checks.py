"""Verdict records shared by the numerical property checkers.

Grid checks are evidence, not proof: every report records the grid it was
computed on.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from aggreason.numerics import Grid


@dataclass(frozen=True)
class Verdict:
    """Outcome of a single check with its first counterexample."""

    holds: bool
    counterexample: Optional[dict[str, Any]] = None
    note: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of one named property on a grid."""

    name: str
    holds: bool
    counterexample: Optional[dict[str, Any]] = None
    declared: Optional[bool] = None

    @property
    def contradicts_declaration(self) -> bool:
        """True when a declared attribute disagrees with the grid evidence."""
        return self.declared is not None and self.declared != self.holds


@dataclass
class PropertyReport:
    """Collection of property checks for one connective."""

    subject: str
    grid_n: int
    checks: dict[str, PropertyCheck] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def add(self, check: PropertyCheck) -> None:
        self.checks[check.name] = check

    def holds(self, name: str) -> bool:
        check = self.checks.get(name)
        return bool(check and check.holds)

    @property
    def contradictions(self) -> list[PropertyCheck]:
        """Declared attributes that the grid evidence refutes."""
        return [c for c in self.checks.values() if c.contradicts_declaration]


def first_index(mask: Any) -> Optional[tuple[int, ...]]:
    """Index of the first True entry of a boolean array, or None."""
    hits = np.argwhere(np.asarray(mask))
    if hits.size == 0:
        return None
    return tuple(int(i) for i in hits[0])


@dataclass(frozen=True)
class Jumps:
    """Upward jumps of z -> fn(x, z), localized to tiny brackets.

    For jump k the value rises by more than the jump tolerance between
    ``lower[k]`` and ``upper[k]``; ``at[k]`` is the bracket point snapped to
    nine decimals, the best guess for where the jump sits.
    """

    x: np.ndarray
    lower: np.ndarray
    at: np.ndarray
    upper: np.ndarray

    def __len__(self) -> int:
        return int(self.x.size)


def locate_jumps(
    fn: Callable[[np.ndarray, np.ndarray], Any],
    grid: Grid,
    jump_tol: float,
    samples: int = 10001,
    iterations: int = 30,
) -> Jumps:
    """Scan z upwards on a fine grid for every grid x and localize jumps.

    A steep but continuous rise shrinks under bisection and is dropped; a
    genuine jump keeps its height however narrow the bracket gets.
    """
    fine = np.round(np.linspace(0.0, 1.0, samples), 12)
    points = grid.points

    def evaluate(x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(fn(x, z), dtype=float), np.broadcast(x, z).shape)

    values = evaluate(points[:, None], fine[None, :])
    rows, cols = np.nonzero(np.diff(values, axis=1) > jump_tol)
    x = points[rows]
    lower = fine[cols]
    upper = fine[cols + 1]

    for _ in range(iterations):
        mid = 0.5 * (lower + upper)
        f_lower, f_mid, f_upper = evaluate(x, lower), evaluate(x, mid), evaluate(x, upper)
        go_left = (f_mid - f_lower) >= (f_upper - f_mid)
        upper = np.where(go_left, mid, upper)
        lower = np.where(go_left, lower, mid)

    keep = evaluate(x, upper) - evaluate(x, lower) > jump_tol
    x, lower, upper = x[keep], lower[keep], upper[keep]
    at = np.clip(np.round(upper, 9), lower, upper)
    return Jumps(x=x, lower=lower, at=at, upper=upper)
