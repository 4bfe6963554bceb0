"""JSON problem files: universes, fuzzy sets, connectives, rule bases and one task.

A problem file looks like::

    {
      "universes": {"U": ["x1", "x2"], "V": ["y1"]},
      "fuzzy_sets": {"D": {"universe": "U", "membership": {"x1": 1.0}}},
      "connectives": {"implication": "goguen", "aggregation": {"name": "product"}},
      "rule_bases": {"rb": {"and": "min", "rules": [{"if": ["D"], "then": "B"}]}},
      "validity": [{"label": "ACRI", "method": "acri", "connectives": {...}}],
      "task": {"kind": "infer", "method": "aqip-fmp", "inputs": {"D'": "Dp", "D": "D", "B": "B"}}
    }

Membership maps are sparse: labels left out have membership 0. Every name
is resolved while parsing, so a parsed problem only fails at run time on
numerical grounds.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from aggreason.connectives.base import Aggregation, Implication, Negation
from aggreason.connectives.registry import ConnectiveSpec, get_registry
from aggreason.errors import ParseError, UniverseMismatch, UnknownName, UnresolvedReference
from aggreason.fuzzysets import DiscreteFuzzySet, FiniteUniverse, SimilarityMeasure
from aggreason.inference.acri import MisoRule, RuleBase
from aggreason.numerics import DEFAULT_TOLERANCE, Tolerance
from aggreason.validity import RULES, ConnectiveSelection, HypothesisConfig, Sampling

logger = logging.getLogger(__name__)

TOP_LEVEL_FIELDS = ("universes", "fuzzy_sets", "connectives", "rule_bases", "validity", "task")
CONNECTIVE_KINDS = ("aggregation", "implication", "negation", "similarity", "combiner", "arrow")
TASK_KINDS = ("infer", "residuate", "validate", "report", "classify")

# named set inputs each inference method reads from task.inputs
INFER_INPUTS: dict[str, tuple[str, ...]] = {
    "acri": ("D'", "D", "B"),
    "acri-fmt": ("B'", "D", "B"),
    "asbr": ("D'", "D", "B"),
    "aqip-fmp": ("D'", "D", "B"),
    "aqip-fmt": ("B'", "D", "B"),
    "qip-tnorm": ("D'", "D", "B"),
    "qip-tnorm-fmt": ("B'", "D", "B"),
    "fita": (),
    "fati": (),
}


@dataclass(frozen=True)
class Task:
    """The single task of a problem file."""

    kind: str
    method: Optional[str] = None
    scheme: Optional[int] = None
    inputs: Mapping[str, Any] = field(default_factory=dict)


@dataclass
class ProblemFile:
    """A parsed and reference-checked problem."""

    universes: dict[str, FiniteUniverse] = field(default_factory=dict)
    fuzzy_sets: dict[str, DiscreteFuzzySet] = field(default_factory=dict)
    connectives: dict[str, ConnectiveSpec] = field(default_factory=dict)
    rule_bases: dict[str, RuleBase] = field(default_factory=dict)
    validity: list[HypothesisConfig] = field(default_factory=list)
    task: Optional[Task] = None
    source: Optional[Path] = None

    def fuzzy_set(self, name: str) -> DiscreteFuzzySet:
        try:
            return self.fuzzy_sets[name]
        except KeyError:
            raise UnresolvedReference(f"unknown fuzzy set '{name}'") from None

    def connective(self, kind: str) -> ConnectiveSpec:
        spec = self.connectives.get(kind)
        if spec is None:
            raise UnresolvedReference(f"the problem selects no {kind}")
        return spec

    def aggregation(self, kind: str = "aggregation", tol: Tolerance = DEFAULT_TOLERANCE) -> Aggregation:
        return get_registry().aggregation(self.connective(kind), tol)

    def implication(self, tol: Tolerance = DEFAULT_TOLERANCE) -> Implication:
        return get_registry().implication(self.connective("implication"), tol)

    def arrow(self, tol: Tolerance = DEFAULT_TOLERANCE) -> Union[Aggregation, Implication]:
        """The rule translation: an implication or an aggregation."""
        return get_registry().connective(self.connective("arrow"), tol)

    def negation(self) -> Negation:
        return get_registry().negation(self.connectives.get("negation", "standard"))

    def similarity(self) -> SimilarityMeasure:
        return get_registry().similarity(self.connectives.get("similarity", "jaccard"))


def _require(value: Any, kind: type, path: str) -> Any:
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        expected = {dict: "an object", list: "an array", str: "a string", int: "an integer"}.get(
            kind, kind.__name__
        )
        raise ParseError(f"{path} must be {expected}")
    return value


def _parse_universes(data: Any) -> dict[str, FiniteUniverse]:
    universes = {}
    for name, labels in _require(data, dict, "universes").items():
        path = f"universes.{name}"
        for k, label in enumerate(_require(labels, list, path)):
            _require(label, str, f"{path}[{k}]")
        universes[name] = FiniteUniverse(name, tuple(labels))
    return universes


def _parse_fuzzy_set(name: str, data: Any, universes: Mapping[str, FiniteUniverse]) -> DiscreteFuzzySet:
    path = f"fuzzy_sets.{name}"
    _require(data, dict, path)
    universe_name = _require(data.get("universe"), str, f"{path}.universe")
    universe = universes.get(universe_name)
    if universe is None:
        raise UnresolvedReference(f"{path}.universe: unknown universe '{universe_name}'")
    membership = _require(data.get("membership", {}), dict, f"{path}.membership")
    for label, value in membership.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{path}.membership.{label} must be a number")
        if label not in universe.labels:
            raise UnresolvedReference(
                f"{path}.membership.{label}: '{label}' is not a point of universe '{universe_name}'"
            )
    return DiscreteFuzzySet(universe, {k: float(v) for k, v in membership.items()}, name)


def _check_spec(spec: Any, path: str, resolve: Any) -> ConnectiveSpec:
    if not isinstance(spec, (str, dict)):
        raise ParseError(f"{path} must be a name or an object with 'name' and 'params'")
    try:
        resolve(spec)
    except UnknownName as e:
        raise UnresolvedReference(f"{path}: {e}") from None
    return spec


def _spec_resolver(kind: str) -> Any:
    registry = get_registry()
    if kind == "implication":
        return registry.implication
    if kind == "negation":
        return registry.negation
    if kind == "similarity":
        return registry.similarity
    if kind == "arrow":
        return registry.connective
    return registry.aggregation


def _parse_connectives(data: Any, path: str = "connectives") -> dict[str, ConnectiveSpec]:
    specs = {}
    for kind, spec in _require(data, dict, path).items():
        if kind not in CONNECTIVE_KINDS:
            raise ParseError(f"{path}.{kind} is not one of {', '.join(CONNECTIVE_KINDS)}")
        specs[kind] = _check_spec(spec, f"{path}.{kind}", _spec_resolver(kind))
    return specs


def _set_ref(name: Any, sets: Mapping[str, DiscreteFuzzySet], path: str) -> DiscreteFuzzySet:
    _require(name, str, path)
    if name not in sets:
        raise UnresolvedReference(f"{path}: unknown fuzzy set '{name}'")
    return sets[name]


def _parse_rule_base(name: str, data: Any, sets: Mapping[str, DiscreteFuzzySet]) -> RuleBase:
    path = f"rule_bases.{name}"
    _require(data, dict, path)
    and_spec = _check_spec(data.get("and", "min"), f"{path}.and", get_registry().aggregation)
    rules = []
    for k, rule in enumerate(_require(data.get("rules"), list, f"{path}.rules")):
        rule_path = f"{path}.rules[{k}]"
        _require(rule, dict, rule_path)
        antecedents = tuple(
            _set_ref(ref, sets, f"{rule_path}.if[{i}]")
            for i, ref in enumerate(_require(rule.get("if"), list, f"{rule_path}.if"))
        )
        rules.append(MisoRule(antecedents, _set_ref(rule.get("then"), sets, f"{rule_path}.then")))
    try:
        return RuleBase(tuple(rules), get_registry().aggregation(and_spec))
    except UniverseMismatch as e:
        raise ParseError(f"{path}: {e}") from None


def _selection(data: Any, path: str) -> ConnectiveSelection:
    specs = _parse_connectives(data, path)
    return ConnectiveSelection(
        aggregation=specs.get("aggregation"),
        implication=specs.get("implication"),
        negation=specs.get("negation", "standard"),
        similarity=specs.get("similarity", "jaccard"),
    )


def _rule_map(data: Any, path: str, kind: type) -> dict[str, Any]:
    out = {}
    for rule, value in _require(data, dict, path).items():
        if rule not in RULES:
            raise ParseError(f"{path}.{rule} is not one of {', '.join(RULES)}")
        out[rule] = _require(value, kind, f"{path}.{rule}")
    return out


def _parse_sampling(data: Any, path: str) -> Sampling:
    _require(data, dict, path)
    defaults = Sampling()
    sizes = data.get("universe_sizes", list(defaults.universe_sizes))
    if not isinstance(sizes, list) or len(sizes) != 2:
        raise ParseError(f"{path}.universe_sizes must be an array of two integers")
    step = data.get("step", defaults.step)
    if isinstance(step, bool) or not isinstance(step, (int, float)):
        raise ParseError(f"{path}.step must be a number")
    low = _require(sizes[0], int, f"{path}.universe_sizes[0]")
    high = _require(sizes[1], int, f"{path}.universe_sizes[1]")
    return Sampling(
        universe_sizes=(low, high),
        step=float(step),
        trials=_require(data.get("trials", defaults.trials), int, f"{path}.trials"),
        seed=_require(data.get("seed", defaults.seed), int, f"{path}.seed"),
    )


def _parse_config(k: int, data: Any) -> HypothesisConfig:
    path = f"validity[{k}]"
    _require(data, dict, path)
    overrides = {
        rule: _selection(spec, f"{path}.rule_overrides.{rule}")
        for rule, spec in _rule_map(data.get("rule_overrides", {}), f"{path}.rule_overrides", dict).items()
    }
    requirements = _require(data.get("requirements", []), list, f"{path}.requirements")
    return HypothesisConfig(
        label=_require(data.get("label", f"row {k}"), str, f"{path}.label"),
        method=_require(data.get("method"), str, f"{path}.method"),
        connectives=_selection(data.get("connectives", {}), f"{path}.connectives"),
        requirements=frozenset(_require(r, str, f"{path}.requirements") for r in requirements),
        sampling=_parse_sampling(data.get("sampling", {}), f"{path}.sampling"),
        rule_overrides=overrides,
        expected=_rule_map(data.get("expected", {}), f"{path}.expected", bool),
        notes=_rule_map(data.get("notes", {}), f"{path}.notes", str),
    )


def _parse_task(data: Any, problem: ProblemFile) -> Task:
    _require(data, dict, "task")
    kind = _require(data.get("kind"), str, "task.kind")
    if kind not in TASK_KINDS:
        raise ParseError(f"task.kind must be one of {', '.join(TASK_KINDS)}, got '{kind}'")
    inputs = _require(data.get("inputs", {}), dict, "task.inputs")
    method = data.get("method")
    scheme = data.get("scheme")
    if kind == "infer":
        method = _require(method, str, "task.method")
        if method not in INFER_INPUTS:
            raise ParseError(f"task.method must be one of {', '.join(INFER_INPUTS)}, got '{method}'")
        for role in INFER_INPUTS[method]:
            _set_ref(inputs.get(role), problem.fuzzy_sets, f"task.inputs.{role}")
        if method in ("fita", "fati"):
            rb_name = _require(inputs.get("rule_base"), str, "task.inputs.rule_base")
            if rb_name not in problem.rule_bases:
                raise UnresolvedReference(f"task.inputs.rule_base: unknown rule base '{rb_name}'")
            for i, ref in enumerate(_require(inputs.get("inputs"), list, "task.inputs.inputs")):
                _set_ref(ref, problem.fuzzy_sets, f"task.inputs.inputs[{i}]")
        if method == "asbr":
            scheme = _require(scheme if scheme is not None else 1, int, "task.scheme")
    return Task(kind=kind, method=method, scheme=scheme, inputs=inputs)


def parse_problem_text(text: str, source: Optional[Path] = None) -> ProblemFile:
    """Parse and reference-check a problem given as JSON text.

    Raises:
        ParseError: Malformed JSON or a field of the wrong shape.
        UnresolvedReference: A name that nothing defines.
        RangeError: A membership outside [0, 1].
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    _require(data, dict, "problem")
    unknown = sorted(set(data) - set(TOP_LEVEL_FIELDS))
    if unknown:
        raise ParseError(f"unknown top-level fields: {', '.join(unknown)}")

    problem = ProblemFile(source=source)
    problem.universes = _parse_universes(data.get("universes", {}))
    problem.fuzzy_sets = {
        name: _parse_fuzzy_set(name, spec, problem.universes)
        for name, spec in _require(data.get("fuzzy_sets", {}), dict, "fuzzy_sets").items()
    }
    problem.connectives = _parse_connectives(data.get("connectives", {}))
    problem.rule_bases = {
        name: _parse_rule_base(name, spec, problem.fuzzy_sets)
        for name, spec in _require(data.get("rule_bases", {}), dict, "rule_bases").items()
    }
    problem.validity = [
        _parse_config(k, cfg) for k, cfg in enumerate(_require(data.get("validity", []), list, "validity"))
    ]
    if "task" in data:
        problem.task = _parse_task(data["task"], problem)
    logger.debug(
        f"parsed problem: {len(problem.fuzzy_sets)} sets, {len(problem.rule_bases)} rule bases, "
        f"{len(problem.validity)} validity rows"
    )
    return problem


def parse_problem(path: Path) -> ProblemFile:
    """Read and parse a problem file.

    Raises:
        OSError: If the file cannot be read.
        ParseError: Malformed JSON or a field of the wrong shape.
        UnresolvedReference: A name that nothing defines.
        RangeError: A membership outside [0, 1].
    """
    return parse_problem_text(Path(path).read_text(encoding="utf-8"), Path(path))
