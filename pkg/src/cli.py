"""Command-line front end.

Data (CSV/JSON/DOT) goes to stdout or --output; summaries and errors go to
stderr. Exit status: 0 success, 1 validation or usage failure, 2 I/O failure.
"""

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from core import (
    Backend,
    DilutionError,
    ErrorVector,
    OutputWriter,
    Reagent,
    SearchSpaceError,
    SplitDisposition,
    TargetCF,
    UsageError,
    format_number,
    parse_epsilon,
)

from .analysis import (
    argmax_row,
    check_search_space,
    classify_critical_steps,
    enumerate_error_vectors,
    gray_position,
    search_space_size,
    sweep_maxima,
    sweep_targets,
    within_tolerance_count,
    worst_case,
)
from .closed_forms import dominant_triple_branches, single_error_surface, triple_error_family
from .config import AnalysisConfig
from .dilution import build_plan, parse_target
from .engine import simulate, trace_records
from .sequencing_graph import build_sequencing_graph, plan_from_json, plan_to_json, to_dot
from .summaries import get_summary

logger = logging.getLogger(__name__)

_FLAG_RE = re.compile(r"(?:argument |arguments?: |required: )(-{1,2}[\w-]+)")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        match = _FLAG_RE.search(message)
        raise UsageError(message, flag=match.group(1) if match else None)


class Command(BaseModel):
    """Validated command-line request."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    subcommand: str
    target: Optional[TargetCF] = None
    plan_file: Optional[Path] = None
    accuracy: Optional[int] = None
    epsilon: Optional[Fraction] = None
    vector: Optional[ErrorVector] = None
    positions: Optional[Tuple[int, ...]] = None
    tolerance: Optional[Fraction] = None
    fmt: str = "csv"
    output: Optional[Path] = None
    include_skip: bool = False
    backend: Backend = Backend.FLOAT
    workers: Optional[int] = None
    force: bool = False
    final_split: SplitDisposition = SplitDisposition.SKIP
    kind: str = "single"
    reagent: Optional[Reagent] = None
    reagents: Optional[Tuple[Reagent, Reagent, Reagent]] = None
    points: int = 101
    verbose: int = 0

    def analysis_config(self) -> AnalysisConfig:
        fields = {
            "backend": self.backend,
            "include_skip": self.include_skip,
            "force": self.force,
            "tolerance": self.tolerance,
        }
        if self.epsilon is not None:
            fields["epsilon"] = self.epsilon
        if self.workers is not None:
            fields["workers"] = self.workers
        return AnalysisConfig(**fields)


# ══════════════════════════════════════════════════════════════════════════════
#  ARGUMENT PARSING
# ══════════════════════════════════════════════════════════════════════════════

def _epsilon_arg(text: str) -> Fraction:
    try:
        return parse_epsilon(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tolerance_arg(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed tolerance {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _positions_arg(text: str) -> Tuple[int, ...]:
    try:
        positions = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed position list {text!r}") from None
    if not positions:
        raise argparse.ArgumentTypeError("position list is empty")
    return positions


def _reagents_arg(text: str) -> Tuple[Reagent, Reagent, Reagent]:
    if len(text) != 3 or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"expected three bits r1r2r3 such as 011, got {text!r}")
    return tuple(Reagent.from_bit(int(b)) for b in text)  # type: ignore[return-value]


def _add_common(parser: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    parser.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
    parser.add_argument("--output", type=Path, help="Write data here instead of stdout")
    parser.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.FLOAT.value)
    parser.add_argument("--workers", type=int, help="Worker threads (default: $SPLIT_ERROR_WORKERS or 1)")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _add_target(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--target", required=required, help='Target CF, "87/128" or a decimal with --accuracy')
    parser.add_argument("--accuracy", type=int, help="Accuracy level n for decimal targets")


def _add_search(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=_epsilon_arg, required=True, help='Split error, "0.07" or "7%%"')
    parser.add_argument("--include-skip", action="store_true", help="Search {+, -, 0} per step")
    parser.add_argument("--force", action="store_true", help="Bypass the search-space guard")


def build_parser() -> CliParser:
    parser = CliParser(prog="dmfb-split", description="Split-error analysis of (1:1) mix-split dilution plans.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=CliParser)

    plan = sub.add_parser("plan", help="twoWayMix plan as JSON or DOT")
    _add_target(plan)
    _add_common(plan, ("json", "dot"))

    sim = sub.add_parser("simulate", help="Run a plan under one error vector")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--target")
    source.add_argument("--plan-file", type=Path, help="Plan JSON written by `plan --format json`")
    sim.add_argument("--accuracy", type=int)
    sim.add_argument("--epsilon", type=_epsilon_arg, required=True)
    sim.add_argument("--vector", required=True, help='Dispositions for O_1..O_{n-1}, e.g. "000+00"')
    sim.add_argument("--final-split", choices=[d.value for d in SplitDisposition], default="0")
    _add_common(sim, ("json", "csv"))

    enum = sub.add_parser("enumerate", help="All error vectors over chosen positions")
    _add_target(enum)
    _add_search(enum)
    enum.add_argument("--positions", type=_positions_arg, help="Comma-separated steps, default all")
    enum.add_argument("--tolerance", type=_tolerance_arg, help="CF tolerance, default 0.5/2^n")
    _add_common(enum, ("csv", "json"))

    worst = sub.add_parser("worst-case", help="Exhaustive maximum CF-error")
    _add_target(worst)
    _add_search(worst)
    _add_common(worst, ("csv", "json"))

    classify = sub.add_parser("classify", help="Critical / non-critical steps")
    _add_target(classify)
    classify.add_argument("--epsilon", type=_epsilon_arg, required=True)
    classify.add_argument("--tolerance", type=_tolerance_arg)
    _add_common(classify, ("csv", "json"))

    sweep = sub.add_parser("sweep", help="Worst case for every target of an accuracy level")
    sweep.add_argument("--accuracy", type=int, required=True)
    sweep.add_argument("--epsilon", type=_epsilon_arg, required=True)
    sweep.add_argument("--force", action="store_true")
    _add_common(sweep, ("csv", "json"))

    closed = sub.add_parser("closed-form", help="Closed-form error curves as CSV")
    closed.add_argument("--kind", choices=("single", "triple"), default="single")
    closed.add_argument("--epsilon", type=_epsilon_arg, required=True)
    closed.add_argument("--reagent", choices=[r.value for r in Reagent], help="single: one reagent only")
    closed.add_argument("--reagents", type=_reagents_arg, default="011", help="triple: r1r2r3 bits")
    closed.add_argument("--points", type=int, default=101, help="Starting-CF grid size")
    _add_common(closed, ("csv",))
    return parser


def _usage(message: str, flag: str) -> UsageError:
    return UsageError(f"{flag}: {message}", flag=flag)


# Flags whose values may begin with "-" (error vectors such as "-++-+-").
_SIGNED_VALUE_FLAGS = ("--vector", "--final-split")


def _attach_signed_values(argv: Sequence[str]) -> List[str]:
    """Rewrite "--vector -0+" as "--vector=-0+" so argparse keeps it as a value."""
    args = list(argv)
    out: List[str] = []
    i = 0
    while i < len(args):
        token = args[i]
        if token in _SIGNED_VALUE_FLAGS and i + 1 < len(args) and args[i + 1].startswith("-"):
            out.append(f"{token}={args[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def parse_args(argv: Optional[Sequence[str]] = None) -> Command:
    """Parse and validate argv into a Command; raises UsageError naming the flag."""
    ns = build_parser().parse_args(_attach_signed_values(sys.argv[1:] if argv is None else argv))
    fields: Dict[str, object] = {
        "subcommand": ns.subcommand,
        "fmt": ns.fmt,
        "output": ns.output,
        "backend": Backend(ns.backend),
        "workers": ns.workers,
        "verbose": ns.verbose,
    }
    if ns.workers is not None and ns.workers < 1:
        raise _usage("must be at least 1", "--workers")

    for name in ("epsilon", "tolerance", "positions", "include_skip", "force", "kind", "points", "plan_file"):
        if getattr(ns, name, None) is not None:
            fields[name] = getattr(ns, name)
    if ns.subcommand == "closed-form":
        fields["reagents"] = ns.reagents if isinstance(ns.reagents, tuple) else _reagents_arg(ns.reagents)
        if ns.reagent:
            fields["reagent"] = Reagent(ns.reagent)
        if ns.points < 2:
            raise _usage("needs at least 2 points", "--points")

    accuracy = getattr(ns, "accuracy", None)
    fields["accuracy"] = accuracy
    if getattr(ns, "target", None) is not None:
        try:
            fields["target"] = parse_target(ns.target, accuracy)
        except DilutionError as exc:
            raise _usage(str(exc), "--target") from None
    if ns.subcommand == "sweep" and accuracy < 2:
        raise _usage("sweep needs accuracy >= 2", "--accuracy")

    if ns.subcommand == "simulate":
        try:
            fields["vector"] = ErrorVector.parse(ns.vector, ns.epsilon)
        except ValueError as exc:
            raise _usage(str(exc), "--vector") from None
        fields["final_split"] = SplitDisposition(ns.final_split)
    return Command(**fields)


# ══════════════════════════════════════════════════════════════════════════════
#  EXECUTION
# ══════════════════════════════════════════════════════════════════════════════

def _x(value, scale: int) -> str:
    return format_number(value * scale)


def _yes(flag: bool) -> str:
    return "Yes" if flag else "No"


def _guard(cmd: Command, config: AnalysisConfig, accuracy: int, targets: int = 1) -> int:
    try:
        return check_search_space(
            accuracy, cmd.include_skip, config.max_sign_accuracy, config.max_skip_accuracy,
            force=cmd.force, targets=targets,
        )
    except SearchSpaceError as exc:
        raise SearchSpaceError(
            get_summary("search-space", vectors=f"{exc.vectors:,}", accuracy=accuracy), exc.vectors
        ) from None


def _run_plan(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    plan = build_plan(cmd.target)
    if cmd.fmt == "dot":
        writer.write_text(to_dot(build_sequencing_graph(plan)))
    else:
        writer.write_json(plan_to_json(plan))


def _run_simulate(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    if cmd.plan_file is not None:
        plan = plan_from_json(json.loads(cmd.plan_file.read_text(encoding="utf-8")))
    else:
        plan = build_plan(cmd.target)
    result = simulate(plan, cmd.vector, backend=cmd.backend, final_split=cmd.final_split)
    scale = plan.target.denominator
    records = trace_records(result)
    if cmd.fmt == "csv":
        header = ("op", "cf", "total_volume", "kept_volume", "disposition")
        writer.write_csv(header, [[r[k] for k in header] for r in records])
    else:
        writer.write_json({
            "target": str(plan.target),
            "vector": str(cmd.vector),
            "epsilon": format_number(cmd.epsilon),
            "produced_cf": float(result.produced_cf),
            "produced_cf_x2n": float(result.produced_cf * scale),
            "cf_error": float(result.cf_error),
            "cf_error_x2n": float(result.scaled_error),
            "final_volume": float(result.final_volume),
            "trace": records,
        })
    print(get_summary(
        "simulate", target=plan.target, vector=cmd.vector, epsilon=float(cmd.epsilon), scale=scale,
        produced=float(result.produced_cf * scale), error=float(result.scaled_error),
        volume=float(result.final_volume),
    ), file=diagnostics)


def _run_enumerate(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    config = cmd.analysis_config()
    plan = build_plan(cmd.target)
    positions = cmd.positions or tuple(range(1, plan.accuracy))
    _guard(cmd, config, len(set(positions)) + 1)
    rows = enumerate_error_vectors(
        plan, config.epsilon, positions=positions, include_skip=cmd.include_skip,
        tolerance=config.tolerance_for(plan.target), config=config,
    )
    scale = plan.target.denominator
    if cmd.fmt == "json":
        writer.write_json([{
            "vector": str(r.vector),
            "gray_position": r.gray_position,
            "produced_cf_x2n": float(r.produced_cf * scale),
            "cf_error_x2n": float(r.scaled_error),
            "abs_error_x2n": float(r.scaled_abs_error),
            "within_tolerance": r.within_tolerance,
        } for r in rows])
    else:
        writer.write_csv(
            ("vector", "gray_position", "produced_cf_x2n", "cf_error_x2n", "abs_error_x2n", "within_tolerance"),
            [[str(r.vector), "" if r.gray_position is None else r.gray_position, _x(r.produced_cf, scale),
              format_number(r.scaled_error), format_number(r.scaled_abs_error), _yes(r.within_tolerance)]
             for r in rows],
        )
    best = argmax_row(rows)
    print(get_summary(
        "enumerate", rows=len(rows), target=plan.target, epsilon=float(config.epsilon), scale=scale,
        max_error=float(best.scaled_abs_error), argmax=best.vector, within=within_tolerance_count(rows),
    ), file=diagnostics)


def _run_worst_case(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    config = cmd.analysis_config()
    plan = build_plan(cmd.target)
    _guard(cmd, config, plan.accuracy)
    value, vector = worst_case(plan, config.epsilon, include_skip=cmd.include_skip, config=config)
    position = gray_position(vector) if vector.is_full_sign and len(vector) else None
    row = {
        "numerator": plan.target.numerator,
        "accuracy": plan.target.accuracy,
        "epsilon": format_number(config.epsilon),
        "max_error_x2n": format_number(value),
        "argmax_vector": str(vector),
        "gray_position": "" if position is None else position,
    }
    if cmd.fmt == "json":
        writer.write_json(row)
    else:
        writer.write_csv(tuple(row), [tuple(row.values())])
    print(get_summary(
        "worst-case", target=plan.target, epsilon=float(config.epsilon),
        space=search_space_size(plan.accuracy, cmd.include_skip), scale=plan.target.denominator,
        max_error=float(value), argmax=vector, position=position,
    ), file=diagnostics)


def _run_classify(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    config = cmd.analysis_config()
    plan = build_plan(cmd.target)
    report = classify_critical_steps(
        plan, config.epsilon, tolerance=config.tolerance_for(plan.target), config=config,
    )
    scale = plan.target.denominator
    if cmd.fmt == "json":
        writer.write_json([{
            "step": s.step,
            "produced_larger_x2n": float(s.larger_produced_cf * scale),
            "produced_smaller_x2n": float(s.smaller_produced_cf * scale),
            "error_larger_x2n": float(s.larger_error * scale),
            "error_smaller_x2n": float(s.smaller_error * scale),
            "critical": s.critical,
        } for s in report.steps])
    else:
        writer.write_csv(
            ("step", "error_larger_x2n", "error_smaller_x2n", "critical"),
            [[s.step, _x(s.larger_error, scale), _x(s.smaller_error, scale), _yes(s.critical)]
             for s in report.steps],
        )
    print(get_summary(
        "classify", target=plan.target, epsilon=float(config.epsilon), critical=report.critical_steps,
        steps=len(report.steps), tolerance_scaled=float(report.tolerance * scale), scale=scale,
    ), file=diagnostics)


def _run_sweep(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    config = cmd.analysis_config()
    _guard(cmd, config, cmd.accuracy, targets=1 << (cmd.accuracy - 1))
    rows = sweep_targets(cmd.accuracy, config.epsilon, config=config)
    if cmd.fmt == "json":
        writer.write_json([{
            "numerator": r.target.numerator,
            "accuracy": r.target.accuracy,
            "max_error_x2n": float(r.max_scaled_error),
            "argmax_vector": str(r.argmax_vector),
        } for r in rows])
    else:
        writer.write_csv(
            ("numerator", "accuracy", "max_error_x2n", "argmax_vector"),
            [[r.target.numerator, r.target.accuracy, format_number(r.max_scaled_error), str(r.argmax_vector)]
             for r in rows],
        )
    peak, numerators = sweep_maxima(rows)
    print(get_summary(
        "sweep", rows=len(rows), accuracy=cmd.accuracy, epsilon=float(config.epsilon),
        scale=1 << cmd.accuracy, max_error=float(peak), numerators=" and ".join(map(str, numerators)),
    ), file=diagnostics)


def _run_closed_form(cmd: Command, writer: OutputWriter, diagnostics: TextIO) -> None:
    c_values = np.linspace(0.0, 1.0, cmd.points)
    epsilon = float(cmd.epsilon)
    if cmd.kind == "single":
        reagents = [cmd.reagent] if cmd.reagent else list(Reagent)
        signed = np.array([-epsilon, epsilon])
        rows: List[list] = []
        peak = 0.0
        for reagent in reagents:
            surface = single_error_surface(c_values, signed, reagent)
            peak = max(peak, float(np.max(np.abs(surface))))
            for i, c in enumerate(c_values):
                for j, e in enumerate(signed):
                    rows.append([format_number(c), format_number(e), reagent.value, format_number(surface[i, j])])
        writer.write_csv(("concentration", "epsilon", "reagent", "error"), rows)
        detail = ""
    else:
        family = triple_error_family(c_values, cmd.epsilon, cmd.reagents, backend=cmd.backend)
        writer.write_csv(
            ("concentration", "pattern", "error"),
            [[format_number(c), pattern, format_number(values[i])]
             for pattern, values in family.items() for i, c in enumerate(c_values)],
        )
        peak = max(abs(float(v)) for values in family.values() for v in values)
        dominant = dominant_triple_branches(family)
        detail = f"; dominant branches along c: {', '.join(dict.fromkeys(dominant))}"
    print(get_summary(
        "closed-form", curve=cmd.kind, points=cmd.points, epsilon=epsilon, max_error=peak, detail=detail,
    ), file=diagnostics)


_HANDLERS: Dict[str, Callable[[Command, OutputWriter, TextIO], None]] = {
    "plan": _run_plan,
    "simulate": _run_simulate,
    "enumerate": _run_enumerate,
    "worst-case": _run_worst_case,
    "classify": _run_classify,
    "sweep": _run_sweep,
    "closed-form": _run_closed_form,
}


def execute(cmd: Command, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run a command; returns the process exit status."""
    diagnostics = stderr if stderr is not None else sys.stderr
    writer = OutputWriter(cmd.output, stream=stdout if stdout is not None else sys.stdout)
    try:
        _HANDLERS[cmd.subcommand](cmd, writer, diagnostics)
    except OSError as exc:
        print(f"error: {exc}", file=diagnostics)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=diagnostics)
        return 1
    return 0


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s [%(levelname)s] [%(name)s] %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cmd = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _configure_logging(cmd.verbose)
    logger.debug("running %s", cmd.subcommand)
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
