"""Randomized validation of inference methods against the GMP rules.

Each method is run under a hypothesis configuration: the connectives, the
structural requirements on the sampled sets and the sampling plan. For a
rule the checker first replays the configuration's witness instance, if
any, then draws seeded random instances until one violates the rule or
the trial budget is spent. Trial k of rule r uses the generator seeded
with ``[seed, r, k]``, so every counterexample can be regenerated.

Rules:
- GMP1: D' normal gives B inside B'.
- GMP2: D' inside D'' gives B' inside B''.
- GMP2': S(D', D) <= S(D'', D) gives S(B', B) <= S(B'', B).
- GMP3: D' = D^C gives B' = 1 everywhere.
- GMP4: D' = D with D normal gives B' = B.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Literal, Mapping, Optional

import numpy as np

from aggreason.connectives.base import Aggregation, Implication, Negation
from aggreason.connectives.registry import ConnectiveSpec, get_registry
from aggreason.errors import InvalidParameter
from aggreason.fuzzysets import (
    DiscreteFuzzySet,
    FiniteUniverse,
    SimilarityMeasure,
    complement,
    membership_levels,
)
from aggreason.inference.acri import acri_fmp
from aggreason.inference.aqip import aqip_fmp
from aggreason.inference.asbr import asbr_conclude, gmp2_prime_violation
from aggreason.numerics import DEFAULT_TOLERANCE, Tolerance

logger = logging.getLogger(__name__)

RULES = ("GMP1", "GMP2", "GMP2'", "GMP3", "GMP4")
METHODS = ("acri", "asbr1", "asbr2", "asbr3", "asbr4", "aqip")
REQUIREMENTS = frozenset({"D_normal", "Dprime_normal", "Dcomplement_normal", "crisp_D"})
EQUALITY_TOL = 1e-9

Status = Literal["pass", "fail", "not-applicable"]


def applicable_rules(method: str) -> tuple[str, ...]:
    """Similarity-based schemes 1 and 2 replace GMP2 by GMP2'."""
    if method in ("asbr1", "asbr2"):
        return ("GMP1", "GMP2'", "GMP3", "GMP4")
    return ("GMP1", "GMP2", "GMP3", "GMP4")


@dataclass(frozen=True)
class Sampling:
    """Random instance plan: universe sizes, membership step, trials and seed."""

    universe_sizes: tuple[int, int] = (3, 5)
    step: float = 0.25
    trials: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        low, high = self.universe_sizes
        if low < 1 or high < low:
            raise InvalidParameter(f"bad universe size range {self.universe_sizes}")
        if self.trials < 0:
            raise InvalidParameter(f"trials must be non-negative, got {self.trials}")
        try:
            membership_levels(self.step)
        except ValueError as e:
            raise InvalidParameter(str(e)) from None


@dataclass(frozen=True)
class ConnectiveSelection:
    """Connectives of a configuration, each by name or ``{name, params}``."""

    aggregation: Optional[ConnectiveSpec] = None
    implication: Optional[ConnectiveSpec] = None
    negation: ConnectiveSpec = "standard"
    similarity: ConnectiveSpec = "jaccard"


@dataclass(frozen=True)
class Witness:
    """A fixed instance tried before the random trials."""

    name: str
    d: DiscreteFuzzySet
    b: DiscreteFuzzySet
    d_prime: DiscreteFuzzySet
    d_second: Optional[DiscreteFuzzySet] = None


@dataclass(frozen=True)
class HypothesisConfig:
    """One row of the validity table.

    ``rule_overrides`` swaps in other connectives for single rules, since
    the hypotheses behind different rules can exclude each other.
    ``expected`` holds the asserted verdict per rule (True for valid);
    ``notes`` annotates cells.
    """

    label: str
    method: str
    connectives: ConnectiveSelection
    requirements: frozenset[str] = frozenset()
    sampling: Sampling = field(default_factory=Sampling)
    rule_overrides: Mapping[str, ConnectiveSelection] = field(default_factory=dict)
    expected: Mapping[str, bool] = field(default_factory=dict)
    notes: Mapping[str, str] = field(default_factory=dict)
    witnesses: Mapping[str, Witness] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InvalidParameter(f"unknown method '{self.method}', expected one of {METHODS}")
        unknown = set(self.requirements) - REQUIREMENTS
        if unknown:
            raise InvalidParameter(f"unknown requirements: {sorted(unknown)}")
        for rule in (*self.rule_overrides, *self.expected, *self.notes, *self.witnesses):
            if rule not in RULES:
                raise InvalidParameter(f"unknown rule '{rule}'")

    def selection(self, rule: str) -> ConnectiveSelection:
        return self.rule_overrides.get(rule, self.connectives)


@dataclass(frozen=True)
class RuleVerdict:
    """Outcome of one rule for one configuration."""

    rule: str
    status: Status
    trials: int = 0
    counterexample: Optional[dict[str, Any]] = None
    expected: Optional[bool] = None
    note: Optional[str] = None

    @property
    def symbol(self) -> str:
        return {"pass": "✓", "fail": "×"}.get(self.status, "")

    @property
    def matches_expectation(self) -> bool:
        """False only when an asserted expectation is contradicted."""
        if self.expected is None or self.status == "not-applicable":
            return True
        return (self.status == "pass") == self.expected


@dataclass
class ValidityRow:
    config: HypothesisConfig
    verdicts: dict[str, RuleVerdict] = field(default_factory=dict)
    note: Optional[str] = None


@dataclass
class ValidityReport:
    """Verdict matrix with one row per configuration and one column per rule."""

    rows: list[ValidityRow] = field(default_factory=list)

    def mismatches(self) -> list[tuple[str, RuleVerdict]]:
        """(row label, verdict) pairs contradicting their expectation."""
        return [
            (row.config.label, verdict)
            for row in self.rows
            for verdict in row.verdicts.values()
            if not verdict.matches_expectation
        ]

    def grid(self) -> list[tuple[str, list[str]]]:
        """Row labels with one symbol per rule; blank where not applicable."""
        return [
            (row.config.label, [row.verdicts[r].symbol if r in row.verdicts else "" for r in RULES])
            for row in self.rows
        ]


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class Instance:
    """Sets drawn for one trial; ``d_second`` only for the GMP2 rules."""

    d: DiscreteFuzzySet
    b: DiscreteFuzzySet
    d_prime: DiscreteFuzzySet
    d_second: Optional[DiscreteFuzzySet] = None


@dataclass(frozen=True)
class _Resolved:
    agg: Optional[Aggregation]
    imp: Implication
    negation: Negation
    similarity: Optional[SimilarityMeasure]


def _resolve(selection: ConnectiveSelection, method: str, tol: Tolerance) -> _Resolved:
    registry = get_registry()
    if selection.implication is None:
        raise InvalidParameter(f"method '{method}' needs an implication")
    agg = None
    if method != "aqip":
        if selection.aggregation is None:
            raise InvalidParameter(f"method '{method}' needs an aggregation")
        agg = registry.aggregation(selection.aggregation, tol)
    similarity = registry.similarity(selection.similarity) if method.startswith("asbr") else None
    return _Resolved(
        agg=agg,
        imp=registry.implication(selection.implication, tol),
        negation=registry.negation(selection.negation),
        similarity=similarity,
    )


def _complement_levels(levels: np.ndarray, negation: Negation) -> np.ndarray:
    """Levels v with N(v) = 1."""
    return levels[np.abs(np.asarray(negation(levels), dtype=float) - 1.0) <= EQUALITY_TOL]


def _requirements(cfg: HypothesisConfig, rule: str) -> set[str]:
    needed = set(cfg.requirements)
    if rule == "GMP1":
        needed.add("Dprime_normal")
    if rule == "GMP3":
        needed.add("Dcomplement_normal")
        if cfg.method.startswith("asbr"):
            needed.add("crisp_D")
    if rule == "GMP4":
        needed.add("D_normal")
    return needed


def _unsatisfiable(cfg: HypothesisConfig, rule: str, negation: Negation) -> Optional[str]:
    needed = _requirements(cfg, rule)
    levels = membership_levels(cfg.sampling.step)
    if "crisp_D" in needed:
        levels = np.array([0.0, 1.0])
    pinned = int("D_normal" in needed)
    if "Dcomplement_normal" in needed:
        if _complement_levels(levels, negation).size == 0:
            return f"no membership level of D has {negation.name} negation 1"
        pinned += 1
    if pinned > cfg.sampling.universe_sizes[0]:
        return f"universes of size {cfg.sampling.universe_sizes[0]} cannot meet {sorted(needed)}"
    return None


def _draw(rng: np.random.Generator, levels: np.ndarray, size: int) -> np.ndarray:
    return rng.choice(levels, size=size)


def _sample(cfg: HypothesisConfig, rule: str, trial: int, negation: Negation) -> Instance:
    sampling = cfg.sampling
    rng = np.random.default_rng([sampling.seed, RULES.index(rule), trial])
    low, high = sampling.universe_sizes
    u = FiniteUniverse("U", tuple(f"x{i + 1}" for i in range(int(rng.integers(low, high + 1)))))
    v = FiniteUniverse("V", tuple(f"y{i + 1}" for i in range(int(rng.integers(low, high + 1)))))
    levels = membership_levels(sampling.step)
    needed = _requirements(cfg, rule)

    d_levels = np.array([0.0, 1.0]) if "crisp_D" in needed else levels
    d = _draw(rng, d_levels, len(u))
    spots = rng.permutation(len(u))
    if "D_normal" in needed:
        d[spots[0]] = 1.0
    if "Dcomplement_normal" in needed:
        d[spots[1] if "D_normal" in needed else spots[0]] = rng.choice(_complement_levels(d_levels, negation))
    d_set = DiscreteFuzzySet.from_vector(u, d, "D")
    b_set = DiscreteFuzzySet.from_vector(v, _draw(rng, levels, len(v)), "B")

    if rule == "GMP3":
        return Instance(d_set, b_set, complement(d_set, negation).renamed("D'"))
    if rule == "GMP4":
        return Instance(d_set, b_set, d_set.renamed("D'"))
    if rule == "GMP2":
        # similarity-based schemes are monotone in inclusion only below D
        top = d if cfg.method.startswith("asbr") else np.ones(len(u))
        second = np.minimum(top, _draw(rng, levels, len(u)))
        first = np.minimum(second, _draw(rng, levels, len(u)))
        return Instance(
            d_set,
            b_set,
            DiscreteFuzzySet.from_vector(u, first, "D'"),
            DiscreteFuzzySet.from_vector(u, second, "D''"),
        )
    first = _draw(rng, levels, len(u))
    if "Dprime_normal" in needed:
        first[rng.integers(len(u))] = 1.0
    second = _draw(rng, levels, len(u)) if rule == "GMP2'" else None
    return Instance(
        d_set,
        b_set,
        DiscreteFuzzySet.from_vector(u, first, "D'"),
        None if second is None else DiscreteFuzzySet.from_vector(u, second, "D''"),
    )


def replay_counterexample(
    cfg: HypothesisConfig, rule: str, trial: int, tol: Tolerance = DEFAULT_TOLERANCE
) -> Instance:
    """Regenerate the instance drawn for ``trial`` of ``rule``."""
    if rule not in RULES:
        raise InvalidParameter(f"unknown rule '{rule}'")
    resolved = _resolve(cfg.selection(rule), cfg.method, tol)
    return _sample(cfg, rule, trial, resolved.negation)


# ---------------------------------------------------------------------------
# Rule evaluation


def _aggregation(resolved: _Resolved) -> Aggregation:
    if resolved.agg is None:
        raise InvalidParameter("this method needs an aggregation")
    return resolved.agg


def _similarity(resolved: _Resolved) -> SimilarityMeasure:
    if resolved.similarity is None:
        raise InvalidParameter("this method needs a similarity measure")
    return resolved.similarity


def _conclude(
    method: str,
    resolved: _Resolved,
    d_prime: DiscreteFuzzySet,
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
) -> DiscreteFuzzySet:
    if method == "acri":
        return acri_fmp(d_prime, d, b, _aggregation(resolved), resolved.imp)
    if method == "aqip":
        return aqip_fmp(d_prime, d, b, resolved.imp)
    scheme = int(method[-1])
    return asbr_conclude(d_prime, d, b, _aggregation(resolved), resolved.imp, _similarity(resolved), scheme)


def _first_violation(
    bad: np.ndarray, universe: FiniteUniverse, **values: np.ndarray
) -> Optional[dict[str, Any]]:
    hits = np.nonzero(bad)[0]
    if hits.size == 0:
        return None
    k = int(hits[0])
    return {"point": universe.labels[k], **{name: float(v[k]) for name, v in values.items()}}


def _second_input(instance: Instance) -> DiscreteFuzzySet:
    if instance.d_second is None:
        raise InvalidParameter("the GMP2 rules need a second input D''")
    return instance.d_second


def _violation(
    cfg: HypothesisConfig, rule: str, resolved: _Resolved, instance: Instance
) -> Optional[dict[str, Any]]:
    d, b = instance.d, instance.b
    if rule == "GMP2'":
        return gmp2_prime_violation(
            d,
            b,
            instance.d_prime,
            _second_input(instance),
            _aggregation(resolved),
            resolved.imp,
            _similarity(resolved),
            int(cfg.method[-1]),
        )

    b_prime = _conclude(cfg.method, resolved, instance.d_prime, d, b).vector
    v = b.universe
    if rule == "GMP1":
        return _first_violation(b.vector > b_prime + EQUALITY_TOL, v, B=b.vector, B_prime=b_prime)
    if rule == "GMP2":
        b_second = _conclude(cfg.method, resolved, _second_input(instance), d, b).vector
        return _first_violation(
            b_prime > b_second + EQUALITY_TOL, v, B_prime=b_prime, B_second=b_second
        )
    if rule == "GMP3":
        return _first_violation(b_prime < 1.0 - EQUALITY_TOL, v, B_prime=b_prime)
    return _first_violation(np.abs(b_prime - b.vector) > EQUALITY_TOL, v, B=b.vector, B_prime=b_prime)


def _payload(instance: Instance, violation: dict[str, Any]) -> dict[str, Any]:
    sets = {"D": instance.d.to_dict(), "B": instance.b.to_dict(), "D'": instance.d_prime.to_dict()}
    if instance.d_second is not None:
        sets["D''"] = instance.d_second.to_dict()
    return {
        "universes": {
            "U": list(instance.d.universe.labels),
            "V": list(instance.b.universe.labels),
        },
        "sets": sets,
        "violation": violation,
    }


def check_rule(cfg: HypothesisConfig, rule: str, tol: Tolerance = DEFAULT_TOLERANCE) -> RuleVerdict:
    """Validate one rule for a configuration.

    Returns a not-applicable verdict when the rule does not belong to the
    method or the requirements cannot be met by the sampler.
    """
    expected = cfg.expected.get(rule)
    note = cfg.notes.get(rule)
    if rule not in applicable_rules(cfg.method):
        return RuleVerdict(rule, "not-applicable", note=note)

    resolved = _resolve(cfg.selection(rule), cfg.method, tol)
    reason = _unsatisfiable(cfg, rule, resolved.negation)
    if reason is not None:
        return RuleVerdict(rule, "not-applicable", expected=expected, note=reason)

    witness = cfg.witnesses.get(rule)
    if witness is not None:
        instance = Instance(witness.d, witness.b, witness.d_prime, witness.d_second)
        violation = _violation(cfg, rule, resolved, instance)
        if violation is not None:
            cex = {"source": "witness", "witness": witness.name, **_payload(instance, violation)}
            logger.info(f"{cfg.label} {rule}: witness '{witness.name}' violates the rule")
            return RuleVerdict(rule, "fail", 0, cex, expected, note)

    sampling = cfg.sampling
    for trial in range(sampling.trials):
        instance = _sample(cfg, rule, trial, resolved.negation)
        violation = _violation(cfg, rule, resolved, instance)
        if violation is not None:
            cex = {
                "source": "random",
                "trial": trial,
                "seed": [sampling.seed, RULES.index(rule), trial],
                **_payload(instance, violation),
            }
            logger.info(f"{cfg.label} {rule}: violated at trial {trial}")
            return RuleVerdict(rule, "fail", trial + 1, cex, expected, note)

    logger.debug(f"{cfg.label} {rule}: {sampling.trials} trials passed")
    return RuleVerdict(rule, "pass", sampling.trials, None, expected, note)


def validity_report(configs: list[HypothesisConfig], tol: Tolerance = DEFAULT_TOLERANCE) -> ValidityReport:
    """Run every applicable rule for every configuration."""
    report = ValidityReport()
    for cfg in configs:
        row = ValidityRow(cfg)
        for rule in RULES:
            if rule in applicable_rules(cfg.method):
                row.verdicts[rule] = check_rule(cfg, rule, tol)
        reasons = {v.note for v in row.verdicts.values() if v.status == "not-applicable" and v.note}
        if reasons and all(v.status == "not-applicable" for v in row.verdicts.values()):
            row.note = "; ".join(sorted(reasons))
        report.rows.append(row)
    return report


# ---------------------------------------------------------------------------
# Default configurations


def _universe(name: str, prefix: str, size: int) -> FiniteUniverse:
    return FiniteUniverse(name, tuple(f"{prefix}{i + 1}" for i in range(size)))


def qip_witnesses() -> dict[str, Witness]:
    """Small instances on which the Goguen QIP solution breaks GMP1 and GMP3."""
    u, v = _universe("U", "x", 5), _universe("V", "y", 5)
    d = DiscreteFuzzySet(u, {"x1": 1.0, "x2": 0.2, "x3": 0.5}, "D")
    b = DiscreteFuzzySet(v, {"y4": 0.5, "y5": 1.0}, "B")
    shifted = DiscreteFuzzySet(u, {"x2": 0.5, "x3": 1.0, "x4": 0.2}, "D'")
    return {
        "GMP1": Witness("shifted input", d, b, shifted),
        "GMP3": Witness("complement input", d, b, complement(d, get_registry().negation("standard"))),
    }


def fodor_witness() -> Witness:
    """Nested inputs on which the Fodor QIP solution shrinks as D' grows."""
    u, v = _universe("U", "x", 3), _universe("V", "y", 2)
    return Witness(
        "fodor nested inputs",
        DiscreteFuzzySet(u, {"x1": 1.0, "x2": 0.25}, "D"),
        DiscreteFuzzySet(v, {"y1": 0.25}, "B"),
        DiscreteFuzzySet(u, {"x2": 0.25}, "D'"),
        DiscreteFuzzySet(u, {"x2": 0.5}, "D''"),
    )


def _all_valid(method: str) -> dict[str, bool]:
    return {rule: True for rule in applicable_rules(method)}


def default_configs(sampling: Optional[Sampling] = None) -> list[HypothesisConfig]:
    """One configuration per row of the validity table, each under its own hypotheses."""
    sampling = sampling or Sampling()
    normal = frozenset({"D_normal"})
    product_goguen = ConnectiveSelection(aggregation="product", implication="goguen")
    disjunctive = ConnectiveSelection(aggregation="max", implication="goguen")
    asbr_gmp4 = {"GMP4": product_goguen}
    witnesses = qip_witnesses()
    return [
        HypothesisConfig("ACRI", "acri", product_goguen, normal, sampling, expected=_all_valid("acri")),
        HypothesisConfig(
            "ASBR1", "asbr1", product_goguen, frozenset({"D_normal", "Dcomplement_normal"}),
            sampling, expected=_all_valid("asbr1"),
        ),
        HypothesisConfig(
            "ASBR2", "asbr2", product_goguen, frozenset({"D_normal", "Dcomplement_normal"}),
            sampling, expected=_all_valid("asbr2"),
        ),
        HypothesisConfig(
            "ASBR3", "asbr3", disjunctive, normal, sampling,
            rule_overrides=asbr_gmp4,
            expected=_all_valid("asbr3"),
            notes={"GMP4": "checked with product, which has left neutral element 1"},
        ),
        HypothesisConfig(
            "ASBR4", "asbr4", disjunctive, normal, sampling,
            rule_overrides=asbr_gmp4,
            expected={"GMP1": True, "GMP2": True, "GMP3": False, "GMP4": True},
            notes={"GMP4": "checked with product, which has left neutral element 1"},
        ),
        HypothesisConfig(
            "AQIP", "aqip", ConnectiveSelection(implication="goguen"), normal, sampling,
            rule_overrides={"GMP2": ConnectiveSelection(implication="fodor")},
            expected={"GMP2": False, "GMP3": False, "GMP4": True},
            notes={
                "GMP1": "commonly listed as valid, yet the shifted-input witness gives "
                "B'(y5) = 0.5 < B(y5) = 1",
                "GMP2": "checked with fodor; goguen satisfies A_I(x, I(x, y)) = min(x, y) and passes",
            },
            witnesses={**witnesses, "GMP2": fodor_witness()},
        ),
    ]


def extended_configs(sampling: Optional[Sampling] = None) -> list[HypothesisConfig]:
    """Extra ACRI rows: A_I with its own implication, and a failing pair."""
    sampling = sampling or Sampling()
    normal = frozenset({"D_normal"})
    induced_kd = {"name": "induced", "params": {"implication": "kleene_dienes"}}
    return [
        HypothesisConfig(
            "ACRI(A_I, KD)", "acri",
            ConnectiveSelection(aggregation=induced_kd, implication="kleene_dienes"),
            normal, sampling, expected=_all_valid("acri"),
        ),
        HypothesisConfig(
            "ACRI(product, KD)", "acri",
            ConnectiveSelection(aggregation="product", implication="kleene_dienes"),
            normal, sampling,
            expected={"GMP1": True, "GMP2": True, "GMP3": True, "GMP4": False},
            notes={"GMP4": "kleene_dienes is not below the residual of product"},
        ),
    ]
