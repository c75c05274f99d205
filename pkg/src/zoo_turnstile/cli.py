"""Command-line entry point.

Exit codes:
    0  success (check: admissible with nothing violated; explore: no failures)
    1  a requirement was violated / exploration found failures
    2  the trace is inadmissible (an indicative law was broken)
    3  parse or IO error
    4  exploration exceeded its node budget
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .checker import check_trace
from .contracts import standard_registry
from .controller import ControllerConfig, VisitorModel, simulate
from .explorer import DEFAULT_GRID, DEFAULT_NODE_BUDGET, BoundsTooLarge, ExplorationBounds, Mode, explore
from .report import render_human, render_machine, traceability
from .traceio import TraceFormatError, dump_trace, load_trace

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INADMISSIBLE = 2
EXIT_IO = 3
EXIT_BUDGET = 4


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dumps(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_grid(spec: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in spec.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers: {spec!r}")


def cmd_check(trace_path: str, out: str | None, fmt: str) -> int:
    try:
        trace = load_trace(trace_path)
    except TraceFormatError as exc:
        print(f"{trace_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"cannot read {trace_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    report = check_trace(trace)
    text = _dumps(report.to_dict()) if fmt == "machine" else report.render()
    try:
        _emit(text, out)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return report.exit_code()


def cmd_simulate(seed: int, steps: int, latency: int, out: str | None) -> int:
    trace = simulate(VisitorModel(seed=seed), ControllerConfig(latency), steps)
    try:
        _emit(dump_trace(trace), out)
    except OSError as exc:
        print(f"cannot write trace: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_explore(
    max_events: int,
    grid: Sequence[int],
    mode: str,
    out: str | None,
    fmt: str = "machine",
    latency: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    cex_dir: str | None = None,
) -> int:
    bounds = ExplorationBounds(max_events, tuple(grid), node_budget)
    try:
        report = explore(bounds, mode=Mode(mode), cfg=ControllerConfig(latency))
    except BoundsTooLarge as exc:
        print(f"{exc} (node budget {exc.budget})", file=sys.stderr)
        return EXIT_BUDGET
    if fmt == "machine":
        text = _dumps(report.to_dict())
    else:
        lines = [
            f"mode: {report.mode.value}",
            f"states visited: {report.states_visited}",
            f"invariant preservation failures: {len(report.invariant_preservation_failures)}",
            f"refinement failures: {len(report.refinement_failures)}"
            + (f" ({', '.join(sorted(report.failing_labels()))})" if report.refinement_failures else ""),
            "never-enabled guards: "
            + (", ".join(k.value for k in report.unsatisfiable_guards) or "none"),
            f"contradiction found: {'yes' if report.contradiction_found else 'no'}",
        ]
        lines.extend(f"  {c}" for c in report.contradictions)
        text = "\n".join(lines) + "\n"
    try:
        _emit(text, out)
        if cex_dir is not None:
            target = Path(cex_dir)
            target.mkdir(parents=True, exist_ok=True)
            for i, cex in enumerate(report.refinement_failures):
                (target / f"cex_{i:05d}.jsonl").write_text(dump_trace(cex.trace), encoding="utf-8")
    except OSError as exc:
        print(f"cannot write exploration output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if report.ok else EXIT_VIOLATED


def cmd_report(out: str | None, fmt: str, trace_path: str | None = None) -> int:
    registry = standard_registry()
    check = None
    if trace_path is not None:
        try:
            check = check_trace(load_trace(trace_path), registry)
        except (TraceFormatError, OSError) as exc:
            print(f"{trace_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    rows = traceability(registry, check)
    text = render_machine(rows) if fmt == "machine" else render_human(rows)
    try:
        _emit(text, out)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zoo-turnstile",
        description="Check zoo turnstile event traces against their requirements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = dict(choices=("machine", "human"), default="human")

    p = sub.add_parser("check", help="check a trace file")
    p.add_argument("--trace", required=True)
    p.add_argument("--out")
    p.add_argument("--format", **fmt)

    p = sub.add_parser("simulate", help="generate a trace with the reference controller")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--latency-ms", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("explore", help="exhaustively explore bounded traces")
    p.add_argument("--max-events", type=int, default=5)
    p.add_argument("--grid", type=_parse_grid, default=DEFAULT_GRID,
                   help="comma-separated timestamps (default: %(default)s)")
    p.add_argument("--mode", choices=("world", "coupled"), default="coupled")
    p.add_argument("--latency-ms", type=int, default=1)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--cex-dir", help="write each counterexample here as a trace file")
    p.add_argument("--out")
    p.add_argument("--format", choices=("machine", "human"), default="machine")

    p = sub.add_parser("report", help="emit the requirements traceability document")
    p.add_argument("--out")
    p.add_argument("--format", **fmt)
    p.add_argument("--trace", help="also show verdicts for this trace")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args.trace, args.out, args.format)
        if args.command == "simulate":
            return cmd_simulate(args.seed, args.steps, args.latency_ms, args.out)
        if args.command == "explore":
            return cmd_explore(
                args.max_events, args.grid, args.mode, args.out, args.format,
                args.latency_ms, args.node_budget, args.cex_dir,
            )
        return cmd_report(args.out, args.format, args.trace)
    except ValueError as exc:
        # invalid bounds, latency or steps
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
