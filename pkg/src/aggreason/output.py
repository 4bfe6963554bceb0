"""JSON, text and table renderings of inference results and reports.

Every JSON document carries a "command" field naming the response type.
Floats are written with 12 significant digits, so emitted fuzzy sets parse
back to equal values.
"""

import json
from dataclasses import asdict
from typing import Any, Optional

import numpy as np
from rich.table import Table

from aggreason.checks import PropertyReport, Verdict
from aggreason.connectives.base import BinaryConnective
from aggreason.fuzzysets import DiscreteFuzzySet
from aggreason.numerics import Grid
from aggreason.validity import RULES, RuleVerdict, ValidityReport, ValidityRow


def _number(value: float) -> float:
    return float(f"{float(value):.12g}")


def _plain(value: Any) -> Any:
    """Recursively convert numpy scalars and arrays, rounding floats."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (frozenset, set)) else value
        return [_plain(v) for v in items]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _number(float(value))
    return value


def fuzzy_set_to_dict(fuzzy_set: DiscreteFuzzySet) -> dict[str, Any]:
    """Problem-file shape of a fuzzy set, every label listed."""
    return {
        "name": fuzzy_set.name,
        "universe": fuzzy_set.universe.name,
        "labels": list(fuzzy_set.universe.labels),
        "membership": {label: _number(fuzzy_set[label]) for label in fuzzy_set.universe.labels},
    }


def _verdict_to_dict(verdict: Verdict) -> dict[str, Any]:
    return {
        "holds": verdict.holds,
        "counterexample": _plain(verdict.counterexample),
        "note": verdict.note,
    }


def _rule_verdict_to_dict(verdict: RuleVerdict) -> dict[str, Any]:
    return {
        "status": verdict.status,
        "symbol": verdict.symbol,
        "trials": verdict.trials,
        "expected": verdict.expected,
        "matches_expectation": verdict.matches_expectation,
        "note": verdict.note,
        "counterexample": _plain(verdict.counterexample),
    }


def _row_to_dict(row: ValidityRow) -> dict[str, Any]:
    cfg = row.config
    return {
        "label": cfg.label,
        "method": cfg.method,
        "connectives": _plain(asdict(cfg.connectives)),
        "rule_overrides": {rule: _plain(asdict(sel)) for rule, sel in cfg.rule_overrides.items()},
        "requirements": sorted(cfg.requirements),
        "sampling": _plain(asdict(cfg.sampling)),
        "note": row.note,
        "verdicts": {rule: _rule_verdict_to_dict(v) for rule, v in row.verdicts.items()},
    }


class JsonFormatter:
    """Formats results as JSON for programmatic consumption."""

    @staticmethod
    def format_inference(
        method: str, result: DiscreteFuzzySet, inputs: dict[str, str], scheme: Optional[int] = None
    ) -> str:
        """Format an inferred fuzzy set as JSON."""
        data: dict[str, Any] = {
            "command": "infer",
            "method": method,
            "inputs": inputs,
            "result": fuzzy_set_to_dict(result),
        }
        if scheme is not None:
            data["scheme"] = scheme
        return json.dumps(data, indent=2)

    @staticmethod
    def format_residuation(
        source: BinaryConnective,
        derived: BinaryConnective,
        grid: Grid,
        adjunction: Optional[Verdict] = None,
    ) -> str:
        """Format a derived connective as a sample table on ``grid``."""
        data: dict[str, Any] = {
            "command": "residuate",
            "from": {"name": source.name, "kind": source.kind},
            "to": {"name": derived.name, "kind": derived.kind},
            "certified": getattr(derived, "certified", True),
            "warnings": list(getattr(derived, "warnings", ())),
            "grid": _plain(grid.points),
            "table": _plain(np.asarray(derived.table(grid))),
        }
        if adjunction is not None:
            data["adjunction"] = _verdict_to_dict(adjunction)
        return json.dumps(data, indent=2)

    @staticmethod
    def format_classification(report: PropertyReport, kind: str) -> str:
        """Format the property verdicts of a connective as JSON."""
        data = {
            "command": "classify",
            "subject": report.subject,
            "kind": kind,
            "grid_n": report.grid_n,
            "checks": {
                name: {
                    "holds": check.holds,
                    "declared": check.declared,
                    "counterexample": _plain(check.counterexample),
                }
                for name, check in report.checks.items()
            },
            "contradictions": [check.name for check in report.contradictions],
            "details": _plain(report.details),
        }
        return json.dumps(data, indent=2)

    @staticmethod
    def format_validity(command: str, report: ValidityReport) -> str:
        """Format a validity report with every verdict and counterexample."""
        data = {
            "command": command,
            "rules": list(RULES),
            "rows": [_row_to_dict(row) for row in report.rows],
            "grid": [{"label": label, "cells": cells} for label, cells in report.grid()],
            "mismatches": [
                {"label": label, "rule": verdict.rule, "status": verdict.status}
                for label, verdict in report.mismatches()
            ],
        }
        return json.dumps(data, indent=2)


def singleton_sum(fuzzy_set: DiscreteFuzzySet) -> str:
    """Render as ``0.5/x2 + 1/x3``, leaving out zero memberships."""
    terms = [
        f"{_number(fuzzy_set[label]):g}/{label}"
        for label in fuzzy_set.universe.labels
        if fuzzy_set[label] > 0.0
    ]
    return " + ".join(terms) if terms else "0"


class TextFormatter:
    """Short human-readable renderings."""

    @staticmethod
    def format_inference(method: str, result: DiscreteFuzzySet) -> str:
        return f"{method}: {result.name} = {singleton_sum(result)}"

    @staticmethod
    def format_residuation(source: BinaryConnective, derived: BinaryConnective, grid: Grid) -> str:
        points = grid.points
        table = np.asarray(derived.table(grid))
        header = "x\\y    " + " ".join(f"{p:>6.3g}" for p in points)
        lines = [f"{derived.name} (from {source.name})", header]
        for x, row in zip(points, table):
            lines.append(f"{x:>6.3g} " + " ".join(f"{v:>6.4g}" for v in row))
        return "\n".join(lines)

    @staticmethod
    def format_classification(report: PropertyReport) -> str:
        lines = [f"{report.subject} (grid n={report.grid_n})"]
        for name, check in report.checks.items():
            mark = "yes" if check.holds else "no"
            flag = "  [contradicts declaration]" if check.contradicts_declaration else ""
            lines.append(f"  {name}: {mark}{flag}")
        return "\n".join(lines)

    @staticmethod
    def format_validity(report: ValidityReport) -> str:
        lines = []
        for row in report.rows:
            lines.append(f"{row.config.label} ({row.config.method})")
            if row.note:
                lines.append(f"  note: {row.note}")
            for rule, verdict in row.verdicts.items():
                status = verdict.status if verdict.matches_expectation else f"{verdict.status} (unexpected)"
                line = f"  {rule}: {status}"
                if verdict.note:
                    line += f" - {verdict.note}"
                lines.append(line)
        return "\n".join(lines)


def validity_table(report: ValidityReport, title: str = "GMP rules") -> Table:
    """Verdict grid with one column per rule; blank cells stay blank."""
    table = Table(title=title)
    table.add_column("Method")
    for rule in RULES:
        table.add_column(rule.replace("'", "′"), justify="center")
    for label, cells in report.grid():
        table.add_row(label, *cells)
    return table
