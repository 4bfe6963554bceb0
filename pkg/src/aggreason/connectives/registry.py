"""Connective registry resolving names and parameter specs to descriptors."""

from typing import Any, Callable, Mapping, Optional, Union

from aggreason.connectives.base import Aggregation, Implication, Negation
from aggreason.errors import InvalidParameter, UnknownName
from aggreason.numerics import DEFAULT_TOLERANCE, Tolerance

# A connective is selected by name or by {"name": ..., "params": {...}};
# constructor params may nest further selections.
ConnectiveSpec = Union[str, Mapping[str, Any]]


def split_spec(spec: ConnectiveSpec) -> tuple[str, dict[str, Any]]:
    """Split a connective selection into its name and parameters."""
    if isinstance(spec, str):
        return spec, {}
    if not isinstance(spec, Mapping) or not isinstance(spec.get("name"), str):
        raise InvalidParameter(f"connective selection needs a 'name': {spec!r}")
    params = spec.get("params", {})
    if not isinstance(params, Mapping):
        raise InvalidParameter(f"'params' of '{spec['name']}' must be an object")
    return spec["name"], dict(params)


def _numeric(name: str, params: Mapping[str, Any]) -> dict[str, float]:
    for key, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidParameter(f"parameter '{key}' of '{name}' must be a number")
    return {key: float(value) for key, value in params.items()}


def _required(name: str, params: Mapping[str, Any], key: str) -> Any:
    if key not in params:
        raise InvalidParameter(f"'{name}' needs the parameter '{key}'")
    return params[key]


class ConnectiveRegistry:
    """Registry for connective families with name-based lookup.

    This is a singleton that lazily imports the connective modules, so the
    registry can be imported from anywhere in the package.
    """

    _instance: Optional["ConnectiveRegistry"] = None
    _initialized: bool = False

    def __new__(cls) -> "ConnectiveRegistry":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self) -> None:
        if self._initialized:
            return
        self._aggregations: dict[str, Callable[..., Aggregation]] = {}
        self._implications: dict[str, Callable[[], Implication]] = {}
        self._negations: dict[str, Callable[..., Negation]] = {}
        self._f_generators: dict[str, Callable[..., Any]] = {}
        self._g_generators: dict[str, Callable[..., Any]] = {}
        self._similarities: dict[str, Any] = {}
        self._initialize_families()
        ConnectiveRegistry._initialized = True

    def _initialize_families(self) -> None:
        """Register all builtin families."""
        # Import here to avoid circular imports
        from aggreason.connectives.aggregations import AGGREGATION_FACTORIES, NEGATION_FACTORIES
        from aggreason.connectives.implications import (
            F_GENERATORS,
            G_GENERATORS,
            IMPLICATION_FACTORIES,
        )
        from aggreason.fuzzysets import SIMILARITIES

        self._aggregations.update(AGGREGATION_FACTORIES)
        self._implications.update(IMPLICATION_FACTORIES)
        self._negations.update(NEGATION_FACTORIES)
        self._f_generators.update(F_GENERATORS)
        self._g_generators.update(G_GENERATORS)
        self._similarities.update(SIMILARITIES)

    # Aggregations derived from other connectives
    AGGREGATION_CONSTRUCTORS = ("induced",)
    # Implications derived from other connectives
    IMPLICATION_CONSTRUCTORS = (
        "residual",
        "r_implication",
        "an_implication",
        "f_implication",
        "g_implication",
        "probabilistic",
        "probabilistic_s",
    )

    def aggregation_names(self) -> list[str]:
        """Builtin aggregation names."""
        return list(self._aggregations)

    def implication_names(self) -> list[str]:
        """Builtin implication names."""
        return list(self._implications)

    def negation_names(self) -> list[str]:
        return list(self._negations)

    def similarity_names(self) -> list[str]:
        return list(self._similarities)

    def aggregation(self, spec: ConnectiveSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> Aggregation:
        """Resolve an aggregation selection.

        Args:
            spec: A builtin name, or ``{"name": ..., "params": {...}}``. The
                constructor ``induced`` takes ``{"implication": <spec>}``.
            tol: Bisection tolerance for derived connectives.

        Returns:
            The aggregation descriptor.
        """
        name, params = split_spec(spec)
        if name == "induced":
            from aggreason.residuation import induced_aggregation

            implication = self.implication(_required(name, params, "implication"), tol)
            return induced_aggregation(implication, tol)

        factory = self._aggregations.get(name)
        if factory is None:
            raise UnknownName(f"unknown aggregation '{name}'")
        try:
            return factory(**_numeric(name, params))
        except TypeError as e:
            raise InvalidParameter(f"bad parameters for aggregation '{name}': {params}") from e

    def implication(self, spec: ConnectiveSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> Implication:
        """Resolve an implication selection.

        Builtin names take no parameters. Constructors take nested
        selections: ``residual`` / ``r_implication`` an ``aggregation`` /
        ``tnorm``, ``an_implication`` an ``aggregation`` and a ``negation``,
        ``f_implication`` / ``g_implication`` a ``generator``,
        ``probabilistic`` / ``probabilistic_s`` a ``copula``.
        """
        from aggreason.connectives import implications
        from aggreason.residuation import residual_implication

        name, params = split_spec(spec)
        if name in self._implications:
            if params:
                raise InvalidParameter(f"implication '{name}' takes no parameters")
            return self._implications[name]()
        if name == "residual":
            return residual_implication(self.aggregation(_required(name, params, "aggregation"), tol), tol)
        if name == "r_implication":
            return implications.r_implication_from_tnorm(
                self.aggregation(_required(name, params, "tnorm"), tol), tol
            )
        if name == "an_implication":
            return implications.an_implication(
                self.aggregation(_required(name, params, "aggregation"), tol),
                self.negation(params.get("negation", "standard")),
            )
        if name == "f_implication":
            return implications.f_implication(
                self.generator("f", _required(name, params, "generator")), tol
            )
        if name == "g_implication":
            return implications.g_implication(
                self.generator("g", _required(name, params, "generator")), tol
            )
        if name == "probabilistic":
            return implications.probabilistic_implication(
                self.aggregation(_required(name, params, "copula"), tol)
            )
        if name == "probabilistic_s":
            return implications.probabilistic_s_implication(
                self.aggregation(_required(name, params, "copula"), tol)
            )
        raise UnknownName(f"unknown implication '{name}'")

    def connective(
        self, spec: ConnectiveSpec, tol: Tolerance = DEFAULT_TOLERANCE
    ) -> Union[Aggregation, Implication]:
        """Resolve a selection that may name either kind of connective."""
        name, _ = split_spec(spec)
        if name in self._implications or name in self.IMPLICATION_CONSTRUCTORS:
            return self.implication(spec, tol)
        if name in self._aggregations or name in self.AGGREGATION_CONSTRUCTORS:
            return self.aggregation(spec, tol)
        raise UnknownName(f"'{name}' is neither an aggregation nor an implication")

    def negation(self, spec: ConnectiveSpec) -> Negation:
        name, params = split_spec(spec)
        factory = self._negations.get(name)
        if factory is None:
            raise UnknownName(f"unknown negation '{name}'")
        try:
            return factory(**_numeric(name, params))
        except TypeError as e:
            raise InvalidParameter(f"bad parameters for negation '{name}': {params}") from e

    def generator(self, kind: str, spec: ConnectiveSpec) -> Any:
        """Resolve an f- or g-generator selection."""
        name, params = split_spec(spec)
        family = self._f_generators if kind == "f" else self._g_generators
        factory = family.get(name)
        if factory is None:
            raise UnknownName(f"unknown {kind}-generator '{name}'")
        try:
            return factory(**_numeric(name, params))
        except TypeError as e:
            raise InvalidParameter(f"bad parameters for generator '{name}': {params}") from e

    def similarity(self, spec: ConnectiveSpec) -> Any:
        name, _ = split_spec(spec)
        measure = self._similarities.get(name)
        if measure is None:
            raise UnknownName(f"unknown similarity '{name}'")
        return measure


def get_registry() -> ConnectiveRegistry:
    """Get the global connective registry singleton."""
    return ConnectiveRegistry()
