"""``annolattice`` command line.

    annolattice <validate|lattice|assess|project> --taxonomy PATH --annotations PATH
        [--annotators IDS | --group ID] [--format json|dot|markdown]
        [--lenient-categories] [--oracle-check] [--out PATH]

Exit status: 0 success, 1 validation violations, 2 input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .assess import build_report
from .context import ActivityLog, Selector, build_context, log_violations, read_annotations
from .dot import render_dot
from .errors import InputError, ValidationError
from .formats import lattice_to_json, report_to_json, report_to_markdown
from .lattice import BRUTE_FORCE_LIMIT, brute_force_concepts, build_lattice, enumerate_concepts
from .ontology import read_taxonomy, validate_taxonomy

__all__ = ["RunConfig", "CliResult", "run_cli", "main"]

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT = 0, 1, 2

COMMANDS = ("validate", "lattice", "assess", "project")
FORMATS = {
    "validate": ("markdown",),
    "lattice": ("json", "dot"),
    "assess": ("markdown", "json", "dot"),
    "project": ("markdown", "json", "dot"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    taxonomy_path: str
    annotations_path: str
    selector: Selector = field(default_factory=Selector.all)
    output_format: str | None = None
    lenient_categories: bool = False
    oracle_check: bool = False
    out_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not self.taxonomy_path or not self.annotations_path:
            raise InputError("taxonomy and annotations paths are required")

    @property
    def format(self) -> str:
        return self.output_format or FORMATS[self.command][0]


@dataclass
class CliResult:
    status: int
    output: str = ""
    messages: list = field(default_factory=list)


def _validate(config: RunConfig) -> CliResult:
    taxonomy = read_taxonomy(config.taxonomy_path)
    annotations = read_annotations(config.annotations_path)
    problems = validate_taxonomy(taxonomy)
    seen, dupes = set(), []
    for a in annotations:
        if a.note_id in seen:
            dupes.append(a.note_id)
        seen.add(a.note_id)
    problems += log_violations(taxonomy, annotations, config.lenient_categories)
    lines = [f"{p.severity}: {p.code}: {p.message}" for p in problems]
    lines += [f"error: duplicate_note: note {n!r} appears more than once" for n in dupes]
    errors = sum(p.is_error for p in problems) + len(dupes)
    lines.append(
        f"{len(taxonomy)} concepts, {len(annotations)} notes: "
        f"{errors} error(s), {len(problems) - errors + len(dupes)} warning(s)"
    )
    return CliResult(EXIT_VIOLATIONS if errors else EXIT_OK, "\n".join(lines) + "\n")


def run_cli(config: RunConfig) -> CliResult:
    """Run one command; never raises for bad input, returns a status instead."""
    try:
        if config.format not in FORMATS[config.command]:
            raise InputError(f"{config.command} does not support --format {config.format}")
        if config.command == "validate":
            return _validate(config)
        if config.command == "project" and config.selector == Selector.all():
            raise InputError("project needs --annotators or --group")

        taxonomy = read_taxonomy(config.taxonomy_path)
        problems = [p for p in validate_taxonomy(taxonomy) if p.is_error]
        if problems:
            raise ValidationError("taxonomy is invalid", problems)
        log = ActivityLog(
            taxonomy, read_annotations(config.annotations_path), config.lenient_categories
        )
        ctx = build_context(log, config.selector)
        messages = []
        if ctx.empty_selection:
            messages.append("warning: selection matched no notes")
        concepts = enumerate_concepts(ctx)
        if config.oracle_check:
            if len(ctx.attributes) > BRUTE_FORCE_LIMIT:
                messages.append(
                    f"warning: oracle check skipped ({len(ctx.attributes)} attributes > "
                    f"{BRUTE_FORCE_LIMIT})"
                )
            elif set(brute_force_concepts(ctx)) != set(concepts):
                return CliResult(EXIT_VIOLATIONS, "", messages + ["error: oracle mismatch"])
            else:
                messages.append(f"oracle check passed ({len(concepts)} concepts)")
        lattice = build_lattice(ctx, concepts)

        if config.command == "lattice":
            if config.format == "dot":
                return CliResult(EXIT_OK, render_dot(lattice), messages)
            return CliResult(EXIT_OK, lattice_to_json(lattice), messages)

        report = build_report(lattice, ctx, taxonomy, log, config.selector)
        if config.format == "json":
            text = report_to_json(report)
        elif config.format == "dot":
            text = render_dot(lattice, report)
        else:
            text = report_to_markdown(report)
        return CliResult(EXIT_OK, text, messages)
    except ValidationError as exc:
        lines = [f"error: {exc}"] + [f"  {p.code}: {p.message}" for p in exc.violations]
        return CliResult(EXIT_VIOLATIONS, "", lines)
    except InputError as exc:
        return CliResult(EXIT_INPUT, "", [f"error: {exc}"])


def _split_ids(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annolattice",
        description="Assess annotation activities with formal concept analysis.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--taxonomy", required=True, metavar="PATH")
    parser.add_argument("--annotations", required=True, metavar="PATH")
    who = parser.add_mutually_exclusive_group()
    who.add_argument("--annotators", metavar="IDS", help="comma-separated annotator ids")
    who.add_argument("--group", metavar="ID", help="group id (comma-separated for several)")
    parser.add_argument("--format", choices=("json", "dot", "markdown"))
    parser.add_argument("--lenient-categories", action="store_true",
                        help="allow notes tagged directly with categories")
    parser.add_argument("--oracle-check", action="store_true",
                        help="cross-check enumeration against brute force")
    parser.add_argument("--out", metavar="PATH")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.annotators is not None:
            selector = Selector.annotators(_split_ids(args.annotators))
        elif args.group is not None:
            selector = Selector.group(_split_ids(args.group))
        else:
            selector = Selector.all()
        config = RunConfig(
            command=args.command,
            taxonomy_path=args.taxonomy,
            annotations_path=args.annotations,
            selector=selector,
            output_format=args.format,
            lenient_categories=args.lenient_categories,
            oracle_check=args.oracle_check,
            out_path=args.out,
        )
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    result = run_cli(config)
    for msg in result.messages:
        print(msg, file=sys.stderr)
    if result.output:
        if config.out_path:
            try:
                Path(config.out_path).write_text(result.output, encoding="utf-8")
            except OSError as exc:
                print(f"error: cannot write {config.out_path}: {exc.strerror}", file=sys.stderr)
                return EXIT_INPUT
        else:
            sys.stdout.write(result.output)
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
