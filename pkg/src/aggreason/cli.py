"""CLI commands for aggreason."""

import io
import json
import logging
from contextlib import contextmanager
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterator, NoReturn, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from aggreason.checks import PropertyReport
from aggreason.connectives.aggregations import check_aggregation_axioms, classify
from aggreason.connectives.base import Aggregation, Implication
from aggreason.connectives.implications import check_implication_properties
from aggreason.connectives.registry import ConnectiveSpec, get_registry
from aggreason.errors import AggreasonError, ParseError, UnresolvedReference
from aggreason.fuzzysets import DiscreteFuzzySet
from aggreason.inference import (
    acri_fmp,
    acri_fmt,
    aqip_fmp,
    aqip_fmt,
    asbr_conclude,
    fati,
    fita,
    qip_tnorm_solution,
    qip_tnorm_solution_fmt,
)
from aggreason.numerics import DEFAULT_TOLERANCE, Tolerance, grid_points
from aggreason.output import JsonFormatter, TextFormatter, validity_table
from aggreason.problem import INFER_INPUTS, ProblemFile, parse_problem
from aggreason.residuation import check_adjunction, induced_aggregation, residual_implication
from aggreason.validity import (
    HypothesisConfig,
    Sampling,
    ValidityReport,
    default_configs,
    extended_configs,
    validity_report,
)

HELP_TEXT = """
Approximate reasoning with aggregation functions and fuzzy implications.
Inference results and reports are JSON by default.

COMMANDS:
  aggreason infer <problem.json>        # Run the problem's inference task
  aggreason residuate --from <name>     # Residual implication or induced aggregation
  aggreason classify <name>             # Grid verdicts for a connective's properties
  aggreason validate <problem.json>     # Check the problem's validity rows
  aggreason report                      # Validity table for the built-in rows
  aggreason run <problem.json>          # Dispatch on the problem's task kind

EXAMPLES:
  aggreason infer problems/qip_fmp.json --format text
  aggreason residuate --from product
  aggreason residuate --from '{"name": "clayton_copula", "params": {"theta": 2}}'
  aggreason classify nilpotent_minimum --grid 51
  aggreason report --format table --expect

EXIT CODES:
  0 success, 1 a verdict contradicts its expectation (--expect), 2 bad input.
"""

app = typer.Typer(
    name="aggreason",
    help=HELP_TEXT,
    no_args_is_help=True,
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)


class OutputFormat(str, Enum):
    json = "json"
    text = "text"
    table = "table"


@app.callback()
def main(
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Log numerical progress to stderr",
    ),
) -> None:
    """Approximate reasoning with aggregation functions and fuzzy implications."""
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    package_logger = logging.getLogger("aggreason")
    package_logger.handlers.clear()
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _fail(message: str, code: int = 2) -> NoReturn:
    err_console.print(f"[red]Error:[/red] {escape(message)}")
    raise typer.Exit(code)


@contextmanager
def _input_errors() -> Iterator[None]:
    """Map library and file errors to exit code 2."""
    try:
        yield
    except (AggreasonError, OSError) as e:
        _fail(str(e))


def _tolerance(tol: Optional[float]) -> Tolerance:
    return DEFAULT_TOLERANCE if tol is None else Tolerance(eps=tol)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")


def _table_text(report: ValidityReport, title: str) -> str:
    buffer = io.StringIO()
    Console(file=buffer, width=100).print(validity_table(report, title))
    return buffer.getvalue().rstrip("\n")


def _selection(text: str) -> ConnectiveSpec:
    """A connective name, or a JSON object ``{"name": ..., "params": ...}``."""
    if not text.lstrip().startswith("{"):
        return text
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid connective selection: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(spec, dict):
        raise ParseError("a connective selection must be a name or an object")
    return spec


# ---------------------------------------------------------------------------
# Task runners shared by the commands and `run`


def _input_set(problem: ProblemFile, role: str) -> DiscreteFuzzySet:
    inputs = problem.task.inputs if problem.task else {}
    name = inputs.get(role)
    if not isinstance(name, str):
        raise UnresolvedReference(f"task.inputs.{role} names no fuzzy set")
    return problem.fuzzy_set(name)


def _infer(
    problem: ProblemFile, method: str, scheme: int, tol: Tolerance, similarity: Optional[str] = None
) -> tuple[DiscreteFuzzySet, dict[str, str]]:
    """Run one inference method on the sets named by the problem's task."""
    if method not in INFER_INPUTS:
        raise ParseError(f"unknown inference method '{method}', expected one of {', '.join(INFER_INPUTS)}")
    if method in ("fita", "fati"):
        inputs = problem.task.inputs if problem.task else {}
        rb_name = inputs.get("rule_base")
        if not isinstance(rb_name, str) or rb_name not in problem.rule_bases:
            raise UnresolvedReference(f"task.inputs.rule_base: unknown rule base {rb_name!r}")
        names = inputs.get("inputs")
        if not isinstance(names, list):
            raise UnresolvedReference("task.inputs.inputs must list one fuzzy set per antecedent")
        sets = [problem.fuzzy_set(str(n)) for n in names]
        scheme_fn = fita if method == "fita" else fati
        result = scheme_fn(
            sets,
            problem.rule_bases[rb_name],
            problem.aggregation(tol=tol),
            problem.arrow(tol),
            problem.aggregation("combiner", tol),
        )
        return result, {"rule_base": rb_name, "inputs": ", ".join(str(n) for n in names)}

    roles = INFER_INPUTS[method]
    sets = [_input_set(problem, role) for role in roles]
    used = {role: fuzzy_set.name for role, fuzzy_set in zip(roles, sets)}
    first, d, b = sets
    if method == "acri":
        result = acri_fmp(first, d, b, problem.aggregation(tol=tol), problem.implication(tol))
    elif method == "acri-fmt":
        result = acri_fmt(first, d, b, problem.aggregation(tol=tol), problem.implication(tol))
    elif method == "asbr":
        measure = get_registry().similarity(similarity) if similarity else problem.similarity()
        result = asbr_conclude(
            first, d, b, problem.aggregation(tol=tol), problem.implication(tol), measure, scheme
        )
    elif method == "aqip-fmp":
        result = aqip_fmp(first, d, b, problem.implication(tol), tol)
    elif method == "aqip-fmt":
        result = aqip_fmt(first, d, b, problem.implication(tol), tol)
    elif method == "qip-tnorm":
        result = qip_tnorm_solution(first, d, b, problem.aggregation(tol=tol), tol)
    else:
        result = qip_tnorm_solution_fmt(first, d, b, problem.aggregation(tol=tol), tol)
    return result, used


def _render_inference(
    problem: ProblemFile,
    method: Optional[str],
    scheme: Optional[int],
    tol: Tolerance,
    fmt: OutputFormat,
    similarity: Optional[str] = None,
) -> str:
    task = problem.task
    if method is None:
        if task is None or task.kind != "infer" or task.method is None:
            raise ParseError("the problem has no inference task; pass --method")
        method = task.method
    if scheme is None:
        scheme = task.scheme if task is not None and task.scheme is not None else 1
    result, used = _infer(problem, method, scheme, tol, similarity)
    if fmt is OutputFormat.json:
        return JsonFormatter.format_inference(method, result, used, scheme if method == "asbr" else None)
    return TextFormatter.format_inference(method, result)


def _render_residuation(
    spec: ConnectiveSpec, tol: Tolerance, grid_n: int, numeric: bool, fmt: OutputFormat
) -> str:
    source = get_registry().connective(spec, tol)
    derived: Any
    if isinstance(source, Aggregation):
        derived = residual_implication(source, tol, closed_form=not numeric)
        adjunction = check_adjunction(source, derived)
    else:
        derived = induced_aggregation(source, tol, closed_form=not numeric)
        adjunction = check_adjunction(derived, source)
    grid = grid_points(grid_n)
    if fmt is OutputFormat.json:
        return JsonFormatter.format_residuation(source, derived, grid, adjunction)
    return TextFormatter.format_residuation(source, derived, grid)


def _render_classification(
    spec: ConnectiveSpec, grid_n: int, negation: str, tol: Tolerance, fmt: OutputFormat
) -> str:
    registry = get_registry()
    subject = registry.connective(spec, tol)
    grid = grid_points(grid_n)
    report: PropertyReport
    if isinstance(subject, Implication):
        report = check_implication_properties(subject, grid, registry.negation(negation))
    else:
        report = classify(subject, grid)
        axioms = check_aggregation_axioms(subject, grid)
        for check in axioms.checks.values():
            report.add(check)
    if fmt is OutputFormat.json:
        return JsonFormatter.format_classification(report, subject.kind)
    return TextFormatter.format_classification(report)


def _resampled(
    configs: list[HypothesisConfig], trials: Optional[int], seed: Optional[int]
) -> list[HypothesisConfig]:
    """Apply --trials / --seed on top of each row's own sampling plan."""
    out = []
    for cfg in configs:
        sampling = replace(
            cfg.sampling,
            trials=cfg.sampling.trials if trials is None else trials,
            seed=cfg.sampling.seed if seed is None else seed,
        )
        out.append(replace(cfg, sampling=sampling))
    return out


def _render_validity(command: str, report: ValidityReport, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.json:
        return JsonFormatter.format_validity(command, report)
    if fmt is OutputFormat.table:
        return _table_text(report, "Validity of GMP rules")
    return TextFormatter.format_validity(report)


def _check_expectations(report: ValidityReport) -> None:
    mismatches = report.mismatches()
    if mismatches:
        cells = ", ".join(f"{label} {verdict.rule} ({verdict.status})" for label, verdict in mismatches)
        _fail(f"verdicts contradict their expectation: {cells}", code=1)


def _builtin_configs(
    extended: bool, trials: Optional[int], seed: Optional[int]
) -> list[HypothesisConfig]:
    defaults = Sampling()
    sampling = Sampling(
        trials=defaults.trials if trials is None else trials,
        seed=defaults.seed if seed is None else seed,
    )
    configs = default_configs(sampling)
    if extended:
        configs += extended_configs(sampling)
    return configs


# ---------------------------------------------------------------------------
# Commands


TOL_OPTION = typer.Option(None, "--tol", help="Bisection tolerance (default: 1e-9)")
FORMAT_OPTION = typer.Option(OutputFormat.json, "--format", "-f", help="Output format: json, text or table")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Write the result to this file instead of stdout")
TRIALS_OPTION = typer.Option(None, "--trials", min=0, help="Random trials per rule (default: 500)")
SEED_OPTION = typer.Option(None, "--seed", help="Sampling seed (default: 0)")
EXPECT_OPTION = typer.Option(False, "--expect", help="Exit 1 when a verdict contradicts its expectation")


@app.command()
def infer(
    problem_path: Path = typer.Argument(..., help="Problem file (JSON)"),
    method: Optional[str] = typer.Option(
        None,
        "--method",
        "-m",
        help=f"Override the task's method: {', '.join(INFER_INPUTS)}",
    ),
    scheme: Optional[int] = typer.Option(None, "--scheme", help="Similarity-based scheme 1-4 (asbr only)"),
    similarity: Optional[str] = typer.Option(
        None, "--similarity", help="Override the problem's similarity measure (asbr only)"
    ),
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Infer a conclusion from the sets named by the problem's task.

    Returns: the method, the input set names and the inferred fuzzy set with
    every label of its universe.
    """
    with _input_errors():
        problem = parse_problem(problem_path)
        text = _render_inference(problem, method, scheme, _tolerance(tol), fmt, similarity)
        _emit(text, out)


@app.command()
def residuate(
    source: str = typer.Option(
        ...,
        "--from",
        help="Aggregation or implication: a name or a JSON selection",
    ),
    grid: int = typer.Option(11, "--grid", "-g", min=2, help="Points per axis of the sample table"),
    numeric: bool = typer.Option(False, "--numeric", help="Bisect even when a closed form is known"),
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Derive a residual implication or an induced aggregation.

    An aggregation yields its residual implication; an implication yields
    the aggregation it induces.

    Returns: a sample table of the derived connective, its certification
    warnings and an adjunction check on a 51-point grid.
    """
    with _input_errors():
        text = _render_residuation(_selection(source), _tolerance(tol), grid, numeric, fmt)
        _emit(text, out)


@app.command(name="classify")
def classify_command(
    name: str = typer.Argument(..., help="Aggregation or implication: a name or a JSON selection"),
    grid: int = typer.Option(101, "--grid", "-g", min=2, help="Points per axis of the check grid"),
    negation: str = typer.Option("standard", "--negation", help="Negation for contrapositive symmetry"),
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Check the algebraic properties of a connective on a grid.

    Aggregations get their class tags, neutral elements and annihilators;
    implications get (I1)-(I5) and the optional laws. Declared attributes
    that the grid refutes are listed under 'contradictions'.
    """
    with _input_errors():
        text = _render_classification(_selection(name), grid, negation, _tolerance(tol), fmt)
        _emit(text, out)


@app.command()
def validate(
    problem_path: Path = typer.Argument(..., help="Problem file with a 'validity' section"),
    trials: Optional[int] = TRIALS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    expect: bool = EXPECT_OPTION,
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Check the GMP rules for every validity row of a problem file.

    Failing cells carry a counterexample that names its witness or the seed
    triple [seed, rule, trial] it was drawn with.
    """
    with _input_errors():
        problem = parse_problem(problem_path)
        configs = _resampled(problem.validity, trials, seed)
        validity = validity_report(configs, _tolerance(tol))
        _emit(_render_validity("validate", validity, fmt), out)
    if expect:
        _check_expectations(validity)


@app.command()
def report(
    extended: bool = typer.Option(False, "--extended", help="Add the extra ACRI rows"),
    trials: Optional[int] = TRIALS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    expect: bool = EXPECT_OPTION,
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Validity table of ACRI, the four similarity-based schemes and AQIP.

    Each row runs under its own hypotheses; see the cell notes for rules
    checked with other connectives.
    """
    with _input_errors():
        configs = _builtin_configs(extended, trials, seed)
        validity = validity_report(configs, _tolerance(tol))
        _emit(_render_validity("report", validity, fmt), out)
    if expect:
        _check_expectations(validity)


@app.command()
def run(
    problem_path: Path = typer.Argument(..., help="Problem file (JSON) with a task"),
    trials: Optional[int] = TRIALS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    expect: bool = EXPECT_OPTION,
    tol: Optional[float] = TOL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
) -> None:
    """Run whatever task the problem file declares.

    residuate and classify read the connective from task.inputs.connective,
    falling back to the problem's aggregation or implication.
    """
    validity: Optional[ValidityReport] = None
    with _input_errors():
        problem = parse_problem(problem_path)
        task = problem.task
        if task is None:
            raise ParseError("the problem declares no task")
        tolerance = _tolerance(tol)
        if task.kind == "infer":
            text = _render_inference(problem, None, None, tolerance, fmt)
        elif task.kind in ("residuate", "classify"):
            spec = (
                task.inputs.get("connective")
                or problem.connectives.get("aggregation")
                or problem.connectives.get("implication")
            )
            if spec is None:
                raise UnresolvedReference("task.inputs.connective names no connective")
            if task.kind == "residuate":
                text = _render_residuation(spec, tolerance, 11, False, fmt)
            else:
                text = _render_classification(spec, 101, "standard", tolerance, fmt)
        elif task.kind == "validate":
            validity = validity_report(_resampled(problem.validity, trials, seed), tolerance)
            text = _render_validity("validate", validity, fmt)
        else:
            configs = _builtin_configs(bool(task.inputs.get("extended")), trials, seed)
            validity = validity_report(configs, tolerance)
            text = _render_validity("report", validity, fmt)
        _emit(text, out)
    if expect and validity is not None:
        _check_expectations(validity)


if __name__ == "__main__":
    app()
