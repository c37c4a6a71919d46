"""Command-line interface: lint, fix, stats, and the rule listing.

Exit codes are CI-friendly:

* lint: 0 no smells, 1 smells found, 2 unreadable or wholly unparseable file
* fix:  0 everything repaired, 1 residual smells remain, 2 I/O or parse failure
* stats: always 0 unless the root is unusable
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .rules import RULES, RuleId, parse_rule_name, rule_for
from .runner import (
    DEFAULT_GLOBS,
    PARSE_FAILED,
    CorpusStats,
    FileReport,
    collect_stats,
    discover,
    process_files,
)

RULES_ENV_VAR = "SLIMDOCK_RULES"


def _parse_rules_filter(value: str | None) -> list[RuleId] | None:
    if not value:
        return None
    names = [n.strip() for n in value.split(",") if n.strip()]
    if not names:
        return None
    return [parse_rule_name(n) for n in names]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--rules",
        default=os.environ.get(RULES_ENV_VAR),
        help="comma-separated rule ids to check (default: all; "
        f"env {RULES_ENV_VAR})",
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    parser.add_argument(
        "--glob",
        action="append",
        default=None,
        metavar="PATTERN",
        help="filename pattern for directory discovery "
        "(repeatable; default: Dockerfile, *.Dockerfile, Dockerfile.*)",
    )
    parser.add_argument(
        "--jobs", type=int, default=os.cpu_count() or 1, help="parallel workers"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="show warnings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slimdock",
        description="Detect and repair size-impacting Dockerfile smells.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="report smells without changing files")
    lint.add_argument("paths", nargs="+", help="Dockerfiles or directories")
    _add_common(lint)

    fix = sub.add_parser("fix", help="repair smells")
    fix.add_argument("paths", nargs="+", help="Dockerfiles or directories")
    output = fix.add_mutually_exclusive_group()
    output.add_argument("--in-place", action="store_true", help="rewrite files")
    output.add_argument(
        "--diff", action="store_true", help="print unified diffs to stdout (default)"
    )
    output.add_argument("--output-dir", metavar="DIR", help="write repaired copies here")
    _add_common(fix)

    stats = sub.add_parser("stats", help="per-rule smell counts over a corpus")
    stats.add_argument("root", help="corpus directory")
    _add_common(stats)

    sub.add_parser("rules", help="list supported rules")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "rules":
        return _cmd_rules()
    try:
        rules = _parse_rules_filter(args.rules)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    globs = tuple(args.glob) if args.glob else DEFAULT_GLOBS
    if args.command == "lint":
        return _cmd_lint(args, rules, globs)
    if args.command == "fix":
        return _cmd_fix(args, rules, globs)
    if args.command == "stats":
        return _cmd_stats(args, rules, globs)
    return 2  # pragma: no cover - argparse enforces the choices


def _cmd_rules() -> int:
    width = max(len(r.id.value) for r in RULES)
    for rule in RULES:
        print(f"{rule.id.value:<{width}}  {rule.description} [auto-fix]")
    return 0


def _diagnostic_json(d) -> dict:
    return {
        "rule": d.rule.value,
        "path": d.file,
        "line": d.line,
        "column": d.column,
        "message": d.message,
        "fixable": d.fixable,
    }


def _exit_code_lint(reports: list[FileReport]) -> int:
    if any(r.error or r.status == PARSE_FAILED for r in reports):
        return 2
    if any(r.diagnostics for r in reports):
        return 1
    return 0


def _cmd_lint(args, rules, globs) -> int:
    paths = discover(args.paths, globs)
    reports = process_files(paths, rules, fix=False, jobs=args.jobs)
    code = _exit_code_lint(reports)
    if args.format == "json":
        payload = {
            "files": [
                {
                    "path": r.path,
                    "parse_status": r.status,
                    "error": r.error,
                    "diagnostics": [_diagnostic_json(d) for d in r.diagnostics],
                    "warnings": r.warnings if args.verbose else [],
                }
                for r in reports
            ],
            "summary": {
                "files": len(reports),
                "diagnostics": sum(len(r.diagnostics) for r in reports),
                "exit_code": code,
            },
        }
        print(json.dumps(payload, indent=2))
        return code
    total = 0
    for report in reports:
        for d in report.diagnostics:
            total += 1
            fixable = " (fixable)" if d.fixable else ""
            print(f"{report.path}:{d.line}:{d.column}: {d.rule.value}: {d.message}{fixable}")
        if report.error:
            print(f"{report.path}: error: {report.error}", file=sys.stderr)
        if args.verbose:
            for w in report.warnings:
                print(f"warning: {w}", file=sys.stderr)
    print(f"{total} smell(s) in {len(reports)} file(s)")
    return code


def _cmd_fix(args, rules, globs) -> int:
    paths = discover(args.paths, globs)
    reports = process_files(paths, rules, fix=True, jobs=args.jobs)
    write_failures = []
    for report in reports:
        if report.fixed is None or not report.changed:
            continue
        if args.in_place:
            try:
                with open(report.path, "w", encoding="utf-8") as fh:
                    fh.write(report.fixed)
            except OSError as exc:
                write_failures.append(f"{report.path}: {exc}")
        elif args.output_dir:
            dest = os.path.join(args.output_dir, os.path.basename(report.path))
            os.makedirs(args.output_dir, exist_ok=True)
            try:
                with open(dest, "w", encoding="utf-8") as fh:
                    fh.write(report.fixed)
            except OSError as exc:
                write_failures.append(f"{dest}: {exc}")

    code = 0
    if any(r.error or r.status == PARSE_FAILED for r in reports) or write_failures:
        code = 2
    elif any(r.residual for r in reports):
        code = 1

    if args.format == "json":
        payload = {
            "files": [
                {
                    "path": r.path,
                    "parse_status": r.status,
                    "error": r.error,
                    "diagnostics": [_diagnostic_json(d) for d in r.diagnostics],
                    "repairs": [
                        {
                            "rule": o.diagnostic.rule.value,
                            "line": o.diagnostic.line,
                            "status": o.status,
                            "reason": o.reason,
                        }
                        for o in r.repairs
                    ],
                    "residual": [_diagnostic_json(d) for d in r.residual],
                    "changed": r.changed,
                }
                for r in reports
            ],
            "summary": {
                "files": len(reports),
                "applied": sum(
                    1 for r in reports for o in r.repairs if o.status == "applied"
                ),
                "rolled_back": sum(
                    1 for r in reports for o in r.repairs if o.status == "rolled-back"
                ),
                "not_fixable": sum(
                    1 for r in reports for o in r.repairs if o.status == "not-fixable"
                ),
                "residual": sum(len(r.residual) for r in reports),
                "exit_code": code,
            },
        }
        print(json.dumps(payload, indent=2))
        return code

    applied = rolled_back = not_fixable = 0
    for report in reports:
        for outcome in report.repairs:
            d = outcome.diagnostic
            if outcome.status == "applied":
                applied += 1
                print(f"{report.path}:{d.line}: fixed {d.rule.value}")
            elif outcome.status == "rolled-back":
                rolled_back += 1
                print(f"{report.path}:{d.line}: rolled back {d.rule.value} ({outcome.reason})")
            else:
                not_fixable += 1
                print(f"{report.path}:{d.line}: not fixable {d.rule.value} ({outcome.reason})")
        if (args.diff or not (args.in_place or args.output_dir)) and report.changed:
            sys.stdout.write(report.diff())
        if report.error:
            print(f"{report.path}: error: {report.error}", file=sys.stderr)
        if args.verbose:
            for w in report.warnings:
                print(f"warning: {w}", file=sys.stderr)
    for failure in write_failures:
        print(f"error: {failure}", file=sys.stderr)
    residual = sum(len(r.residual) for r in reports)
    print(
        f"applied {applied}, rolled back {rolled_back}, not fixable {not_fixable}, "
        f"residual {residual}"
    )
    return code


def _stats_table(stats: CorpusStats) -> str:
    name_width = max(len(r.id.value) for r in RULES)
    lines = []
    header = f"{'Docker Smell':<{name_width}}  {'# Docker Smell':>16}  {'# Dockerfile with Smell':>24}"
    lines.append(header)
    lines.append("-" * len(header))
    for rule in RULES:
        lines.append(
            f"{rule.id.value:<{name_width}}  {stats.occurrences[rule.id]:>16}  "
            f"{stats.files_with[rule.id]:>24}"
        )
    lines.append("-" * len(header))
    lines.append(
        f"{'Total':<{name_width}}  {stats.total_occurrences:>16}  "
        f"{stats.files_with_smell:>24}"
    )
    lines.append("")
    lines.append(
        f"Files scanned: {stats.files_scanned} "
        f"(unique: {stats.files_unique}, failed: {stats.files_failed})"
    )
    lines.append(f"Command enrichment coverage: {stats.coverage:.2%}")
    return "\n".join(lines)


def _cmd_stats(args, rules, globs) -> int:
    if not os.path.exists(args.root):
        print(f"error: no such path: {args.root}", file=sys.stderr)
        return 2
    paths = discover([args.root], globs)
    stats, reports = collect_stats(paths, rules, jobs=args.jobs)
    if args.format == "json":
        payload = {
            "rules": {
                rule.id.value: {
                    "occurrences": stats.occurrences[rule.id],
                    "files_with_smell": stats.files_with[rule.id],
                }
                for rule in RULES
            },
            "totals": {
                "occurrences": stats.total_occurrences,
                "files_with_smell": stats.files_with_smell,
            },
            "files_scanned": stats.files_scanned,
            "files_unique": stats.files_unique,
            "files_failed": stats.files_failed,
            "enrichment_coverage": stats.coverage,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(_stats_table(stats))
        if args.verbose:
            for report in reports:
                for w in report.warnings:
                    print(f"warning: {w}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
