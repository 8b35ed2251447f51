"""``tm`` command line: parse, validate, simulate, export and events.

Exit codes: 0 clean, 1 validation errors, 2 usage, IO or parse failure,
3 chronology violations.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .check import has_errors, render, validate
from .engine import (
    ScenarioError, check_chronology, detect_events, load_scenario, simulate,
)
from .export import export_chronology_dot, export_dot
from .text import ParseError, emit, parse

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CHRONOLOGY = 3


class _Fail(Exception):
    def __init__(self, code: int, lines: Sequence[str]):
        super().__init__(code)
        self.code = code
        self.lines = list(lines)


def _read_model(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Fail(EXIT_USAGE, [f"tm: cannot read {path}: {exc.strerror or exc}"])
    try:
        return parse(data)
    except ParseError as exc:
        raise _Fail(EXIT_USAGE, [f"{path}: {d.render()}" for d in exc.diagnostics])


def _read_scenario(path: str):
    try:
        return load_scenario(path)
    except OSError as exc:
        raise _Fail(EXIT_USAGE, [f"tm: cannot read {path}: {exc.strerror or exc}"])
    except (ScenarioError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_USAGE, [f"{path}: {exc}"])


def _require_valid(model) -> None:
    diags = validate(model)
    if has_errors(diags):
        raise _Fail(EXIT_INVALID, [render(d) for d in diags])


def _simulate(args):
    model = _read_model(args.model)
    scenario = _read_scenario(args.scenario)
    _require_valid(model)
    try:
        trace = simulate(model, scenario, args.max_ticks)
    except ScenarioError as exc:
        raise _Fail(EXIT_USAGE, [f"{args.scenario}: {exc}"])
    return model, trace


def _chronology_lines(model, occurrences) -> tuple[list[str], int]:
    violations = check_chronology(occurrences, model.chronology)
    return [v.to_text() for v in violations], EXIT_CHRONOLOGY if violations else EXIT_OK


def cmd_parse(args, out) -> int:
    model = _read_model(args.model)
    out.write(export_dot(model) if args.format == "dot" else emit(model))
    return EXIT_OK


def cmd_validate(args, out) -> int:
    model = _read_model(args.model)
    diags = validate(model)
    for d in diags:
        out.write(render(d) + "\n")
    return EXIT_INVALID if has_errors(diags) else EXIT_OK


def cmd_simulate(args, out) -> int:
    model, trace = _simulate(args)
    out.write(trace.to_text())
    if not (args.events or args.chronology):
        return EXIT_OK
    occurrences = detect_events(trace, model.events)
    for occ in occurrences:
        out.write(occ.to_text() + "\n")
    if not args.chronology:
        return EXIT_OK
    lines, code = _chronology_lines(model, occurrences)
    for line in lines:
        out.write(line + "\n")
    return code


def cmd_events(args, out) -> int:
    model, trace = _simulate(args)
    occurrences = detect_events(trace, model.events)
    for occ in occurrences:
        out.write(occ.to_text() + "\n")
    lines, code = _chronology_lines(model, occurrences)
    for line in lines:
        out.write(line + "\n")
    return code


def cmd_export(args, out) -> int:
    model = _read_model(args.model)
    if args.chronology:
        out.write(export_chronology_dot(model.chronology, model.name))
    elif args.format == "text":
        out.write(emit(model))
    else:
        out.write(export_dot(model))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tm", description="Thinging-machine model toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a model and print its canonical form")
    p.add_argument("model")
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", help="report well-formedness diagnostics")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    for name, func, help_text in (
            ("simulate", cmd_simulate, "run a scenario and print the trace"),
            ("events", cmd_events, "run a scenario and print detected events")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model")
        p.add_argument("scenario")
        p.add_argument("--max-ticks", type=int, default=100_000)
        if name == "simulate":
            p.add_argument("--events", action="store_true", help="append detected events")
            p.add_argument("--chronology", action="store_true",
                           help="append events and check them against the chronology")
        p.set_defaults(func=func)

    p = sub.add_parser("export", help="export a model or its chronology")
    p.add_argument("model")
    p.add_argument("--format", choices=("text", "dot"), default="dot")
    p.add_argument("--chronology", action="store_true", help="export the event chronology")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "max_ticks", 0) < 0:
        print("tm: --max-ticks must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, sys.stdout)
    except _Fail as fail:
        for line in fail.lines:
            print(line, file=sys.stderr)
        return fail.code


if __name__ == "__main__":
    sys.exit(main())
