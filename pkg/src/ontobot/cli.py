"""Command-line interface: load KGs, validate, run queries, emit CQ reports.

Exit codes: 0 success, 1 validation violations, 2 I/O or parse errors,
3 unsupported query feature, 4 unknown entity (activity/robot label).

When no ``-k`` files are given, graphs are loaded from the directory named
by the ``ONTOBOT_FIXTURES`` environment variable (every ``*.ttl`` in it,
sorted by name), falling back to the packaged fixture graphs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ontobot import fixtures
from ontobot.graph import Graph, GraphError, Term, merge_graphs
from ontobot.query import QueryParseError, UnsupportedFeatureError, evaluate, parse_query
from ontobot.reasoner import ChainError, KnowledgeBase, UnknownEntityError
from ontobot.schema import infer_types, validate
from ontobot.turtle import TurtleParseError, parse_turtle, prefixed_name

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_UNKNOWN_ENTITY = 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class ResultTable:
    id: str
    columns: list[str]
    rows: list[list[object]]  # cells: str, bool, or list[str]


def _cell_text(term: Term, prefixes: dict[str, str]) -> str:
    if term.is_iri:
        compact = prefixed_name(term.value, prefixes)
        return compact if compact is not None else f"<{term.value}>"
    if term.is_blank:
        return f"_:{term.value}"
    text = term.value
    if term.lang is not None:
        text += f"@{term.lang}"
    elif term.datatype is not None:
        dt = prefixed_name(term.datatype, prefixes) or f"<{term.datatype}>"
        text += f"^^{dt}"
    return text


def _plain_cell(cell: object, fmt: str) -> str:
    if isinstance(cell, bool):
        if fmt == "table":
            return "✓" if cell else "✗"
        return "true" if cell else "false"
    if isinstance(cell, (list, tuple)):
        return ", ".join(str(item) for item in cell)
    return str(cell)


def render(table: ResultTable, fmt: str) -> str:
    if fmt == "json":
        payload = {"id": table.id, "columns": table.columns, "rows": table.rows}
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_plain_cell(cell, "csv") for cell in row])
        return buffer.getvalue()
    cells = [[_plain_cell(cell, "table") for cell in row] for row in table.rows]
    widths = [len(name) for name in table.columns]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(name.ljust(widths[i]) for i, name in enumerate(table.columns)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(widths))).rstrip(),
    ]
    for row in cells:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _read_text(path: str | Path) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}")
    except UnicodeDecodeError as exc:
        raise _Fail(EXIT_INPUT, f"{path} is not valid UTF-8: {exc}")


def _parse_kg(path: str | Path) -> Graph:
    try:
        return parse_turtle(_read_text(path))
    except TurtleParseError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}")


def _kg_paths(args: argparse.Namespace) -> list[Path]:
    if args.kg:
        return [Path(p) for p in args.kg]
    env_dir = os.environ.get("ONTOBOT_FIXTURES")
    if env_dir:
        paths = sorted(Path(env_dir).glob("*.ttl"))
        if not paths:
            raise _Fail(EXIT_INPUT, f"no .ttl files found in ONTOBOT_FIXTURES directory {env_dir}")
        return paths
    return fixtures.default_kg_paths()


def _load_union(args: argparse.Namespace) -> Graph:
    return merge_graphs([_parse_kg(p) for p in _kg_paths(args)]).freeze()


def _load_kb(args: argparse.Namespace) -> KnowledgeBase:
    return KnowledgeBase.load(*[_parse_kg(p) for p in _kg_paths(args)])


def cmd_validate(args: argparse.Namespace) -> int:
    union = merge_graphs([_parse_kg(p) for p in args.files])
    inferred = infer_types(union)
    report = validate(inferred)
    prefixes = inferred.prefixes

    def describe(subject) -> str:
        if isinstance(subject, Term):
            return _cell_text(subject, prefixes)
        return " ".join(_cell_text(t, prefixes) for t in subject)

    for item in report.violations:
        print(f"{item.rule}  {describe(item.subject)}  {item.message}")
    for item in report.warnings:
        print(f"{item.rule}  {describe(item.subject)}  warning: {item.message}")
    if report.ok:
        print(f"OK: {len(inferred)} triples, 0 violations, {len(report.warnings)} warnings")
        return EXIT_OK
    print(f"FAIL: {len(report.violations)} violations, {len(report.warnings)} warnings")
    return EXIT_VIOLATIONS


def cmd_query(args: argparse.Namespace) -> int:
    union = _load_union(args)
    query = parse_query(_read_text(args.query_file))
    solutions = evaluate(query, union)
    prefixes = dict(union.prefixes)
    prefixes.update(query.prefixes)
    rows = [
        [_cell_text(solution[name], prefixes) for name in query.projection]
        for solution in solutions
    ]
    table = ResultTable(id="query", columns=list(query.projection), rows=rows)
    sys.stdout.write(render(table, args.output))
    return EXIT_OK


def _require(args: argparse.Namespace, name: str, cq: int) -> str:
    value = getattr(args, name)
    if value is None:
        raise _Fail(EXIT_INPUT, f"cq {cq} requires --{name}")
    return value


def _cq_table(kb: KnowledgeBase, args: argparse.Namespace) -> ResultTable:
    prefixes = kb.graph.prefixes
    text = lambda term: _cell_text(term, prefixes)
    cq = args.cq_id

    if cq == 1:
        pairs = kb.objects_and_affordances(_require(args, "activity", cq))
        rows = sorted([text(obj), text(aff)] for obj, aff in pairs)
        return ResultTable("cq1", ["object", "affordance"], rows)

    if cq == 2:
        plan = kb.task_plan(_require(args, "activity", cq))
        rows = [
            [text(plan.activity), procedure.label, step.label, action.label]
            for procedure in plan.procedures
            for step in procedure.steps
            for action in step.actions
        ]
        return ResultTable("cq2", ["activity", "procedure", "step", "action"], rows)

    if cq == 3:
        if args.activity is not None:
            activities = [kb.activity_by_label(args.activity)]
        else:
            activities = [activity for activity, _ in kb.activities()]
        rows = [
            [kb.label_of(activity), text(affordance)]
            for activity in activities
            for affordance in sorted(kb.required_affordances(activity))
        ]
        return ResultTable("cq3", ["activity", "affordance"], rows)

    if cq == 4:
        robots = kb.capable_robots(kb.activity_by_label(_require(args, "activity", cq)))
        rows = sorted([kb.label_of(robot)] for robot in robots)
        return ResultTable("cq4", ["robot"], rows)

    if cq == 5:
        robot = kb.agent_by_label(_require(args, "robot", cq))
        activities = kb.activities()
        ok = kb.can_execute_all(robot, [activity for activity, _ in activities])
        rows = [[kb.label_of(robot), [label for _, label in activities], ok]]
        return ResultTable("cq5", ["robot", "activities", "achievable"], rows)

    if args.matrix:
        matrix = kb.feasibility_matrix()
        columns = ["activity", "step"] + [label for _, label in matrix.robots]
        rows = []
        for activity, step, label in matrix.steps:
            row: list[object] = [kb.label_of(activity), label]
            row.extend(matrix.achievable(robot, step) for robot, _ in matrix.robots)
            rows.append(row)
        return ResultTable("cq6-matrix", columns, rows)

    report = kb.gap_report(_require(args, "robot", 6), kb.activity_by_label(_require(args, "activity", 6)))
    rows = [
        [
            step.label,
            sorted(text(a) for a in step.required),
            sorted(text(a) for a in step.missing),
            step.achievable,
        ]
        for step in report.steps
    ]
    return ResultTable("cq6", ["step", "required", "missing", "achievable"], rows)


def cmd_cq(args: argparse.Namespace) -> int:
    kb = _load_kb(args)
    table = _cq_table(kb, args)
    sys.stdout.write(render(table, args.output))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontobot",
        description="Load Turtle knowledge graphs, validate them, run queries, and answer competency questions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="structurally validate Turtle files")
    p_validate.add_argument("files", nargs="+", help="Turtle files to load and validate together")
    p_validate.set_defaults(func=cmd_validate)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-k", "--kg", action="append", default=[], metavar="FILE.ttl",
                       help="knowledge-graph file (repeatable); default: $ONTOBOT_FIXTURES or packaged fixtures")
        p.add_argument("-o", "--output", choices=("table", "csv", "json"), default="table")

    p_query = sub.add_parser("query", help="evaluate a SELECT query over the loaded graphs")
    add_common(p_query)
    p_query.add_argument("-f", "--query-file", required=True, metavar="QUERY.rq")
    p_query.set_defaults(func=cmd_query)

    p_cq = sub.add_parser("cq", help="answer one of the six competency questions")
    p_cq.add_argument("cq_id", type=int, choices=range(1, 7), metavar="1-6")
    add_common(p_cq)
    p_cq.add_argument("--activity", help="activity label (CQ1-CQ4, CQ6)")
    p_cq.add_argument("--robot", help="robot label (CQ5, CQ6)")
    p_cq.add_argument("--matrix", action="store_true", help="CQ6: print the full robots-by-steps matrix")
    p_cq.set_defaults(func=cmd_cq)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"ontobot: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedFeatureError as exc:
        print(f"ontobot: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except UnknownEntityError as exc:
        print(f"ontobot: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_ENTITY
    except (QueryParseError, TurtleParseError, GraphError, ChainError, OSError) as exc:
        print(f"ontobot: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
