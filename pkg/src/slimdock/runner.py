"""Per-file pipeline and corpus aggregation.

One FileReport per input file: parse status, warnings, diagnostics, and in
fix mode the repair outcomes plus the residual diagnostics re-detected on
the repaired output (reparsed from the printed text, never copied from the
pre-fix list).

Files are independent: the CLI fans them out to a thread pool and report
assembly stays order-stable (sorted by path). Parse failures never abort a
batch; a wholly unparseable file is reported as failed-soft and excluded
from smell statistics.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .dockerfile import parse_dockerfile
from .enrich import UnifiedAst, build_unified_ast, enrich
from .model import NodeKind
from .printer import print_minimal, unified_diff
from .rules import (
    RULES,
    RepairOutcome,
    RuleId,
    SmellDiagnostic,
    detect,
    repair,
    verify_or_rollback,
)

PARSE_OK = "ok"
PARSE_PARTIAL = "partial"
PARSE_FAILED = "failed-soft"


@dataclass
class FileReport:
    path: str
    status: str = PARSE_OK
    warnings: list[str] = field(default_factory=list)
    diagnostics: list[SmellDiagnostic] = field(default_factory=list)
    repairs: list[RepairOutcome] = field(default_factory=list)
    residual: list[SmellDiagnostic] = field(default_factory=list)
    original: str | None = None
    fixed: str | None = None
    error: str | None = None
    enriched_commands: int = 0
    total_commands: int = 0

    @property
    def changed(self) -> bool:
        return self.fixed is not None and self.fixed != self.original

    def diff(self) -> str:
        if self.fixed is None or self.original is None:
            return ""
        return unified_diff(self.original, self.fixed, self.path)


def _parse_status(ast: UnifiedAst) -> str:
    instructions = [
        n
        for n in ast.root.children
        if n.kind is not NodeKind.DOCKER_COMMENT
    ]
    if instructions and all(n.kind is NodeKind.DOCKER_UNKNOWN for n in instructions):
        return PARSE_FAILED
    if ast.warnings:
        return PARSE_PARTIAL
    return PARSE_OK


def analyze_text(
    text: str, path: str, rules: list[RuleId] | None = None
) -> tuple[UnifiedAst, FileReport]:
    """Parse + unify + enrich + detect; the lint pipeline for one file."""
    ast = enrich(build_unified_ast(parse_dockerfile(text, path)))
    report = FileReport(path=path, original=text)
    report.warnings = list(ast.warnings)
    report.status = _parse_status(ast)
    if report.status != PARSE_FAILED:
        report.diagnostics = detect(ast, rules)
    matched, total = ast.root.prop("enrich_stats", (0, 0))
    report.enriched_commands = matched
    report.total_commands = total
    return ast, report


def fix_text(
    text: str, path: str, rules: list[RuleId] | None = None
) -> FileReport:
    """Detect, repair in document order, verify each repair, and reprint.

    The residual list comes from re-analyzing the printed output, so it
    reflects exactly what a subsequent lint of the file would report.
    """
    ast, report = analyze_text(text, path, rules)
    if report.status == PARSE_FAILED:
        report.fixed = text
        return report
    for diagnostic in report.diagnostics:
        outcome = repair(ast, diagnostic)
        outcome = verify_or_rollback(ast, diagnostic, outcome)
        report.repairs.append(outcome)
    report.fixed = print_minimal(ast, text)
    _, recheck = analyze_text(report.fixed, path, rules)
    report.residual = recheck.diagnostics
    return report


def _read_file(path: str, report: FileReport) -> str | None:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        report.error = str(exc)
        report.status = PARSE_FAILED
        return None
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        report.warnings.append(f"{path}: invalid UTF-8 replaced")
        return raw.decode("utf-8", errors="replace")


def process_file(
    path: str, rules: list[RuleId] | None = None, fix: bool = False
) -> FileReport:
    report = FileReport(path=path)
    text = _read_file(path, report)
    if text is None:
        return report
    pre_warnings = list(report.warnings)
    if fix:
        result = fix_text(text, path, rules)
    else:
        _, result = analyze_text(text, path, rules)
    result.warnings = pre_warnings + result.warnings
    if pre_warnings and result.status == PARSE_OK:
        result.status = PARSE_PARTIAL
    return result


def process_files(
    paths: list[str],
    rules: list[RuleId] | None = None,
    fix: bool = False,
    jobs: int = 1,
) -> list[FileReport]:
    """Process independent files, optionally in parallel; sorted by path."""
    if jobs <= 1 or len(paths) <= 1:
        reports = [process_file(p, rules, fix) for p in paths]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda p: process_file(p, rules, fix), paths))
    return sorted(reports, key=lambda r: r.path)


# ---------------------------------------------------------------------------
# Discovery
# ---------------------------------------------------------------------------

DEFAULT_GLOBS = ("Dockerfile", "*.Dockerfile", "Dockerfile.*")


def discover(paths: list[str], globs: tuple[str, ...] = DEFAULT_GLOBS) -> list[str]:
    """Expand files and directories into the Dockerfiles to process."""
    from fnmatch import fnmatch

    found: list[str] = []
    for path in paths:
        if os.path.isdir(path):
            for root, _dirs, files in os.walk(path):
                for name in sorted(files):
                    if any(fnmatch(name, g) for g in globs):
                        found.append(os.path.join(root, name))
        else:
            found.append(path)
    return sorted(dict.fromkeys(found))


# ---------------------------------------------------------------------------
# Corpus statistics
# ---------------------------------------------------------------------------


@dataclass
class CorpusStats:
    occurrences: dict[RuleId, int] = field(default_factory=dict)
    files_with: dict[RuleId, int] = field(default_factory=dict)
    files_scanned: int = 0
    files_unique: int = 0
    files_failed: int = 0
    files_with_smell: int = 0
    enriched_commands: int = 0
    total_commands: int = 0

    @property
    def total_occurrences(self) -> int:
        return sum(self.occurrences.values())

    @property
    def coverage(self) -> float:
        if self.total_commands == 0:
            return 0.0
        return self.enriched_commands / self.total_commands


def collect_stats(
    paths: list[str], rules: list[RuleId] | None = None, jobs: int = 1
) -> tuple[CorpusStats, list[FileReport]]:
    """Aggregate per-rule counts over a corpus, deduplicating byte-identical
    files by content hash first."""
    stats = CorpusStats(
        occurrences={r.id: 0 for r in RULES},
        files_with={r.id: 0 for r in RULES},
    )
    stats.files_scanned = len(paths)
    seen: set[str] = set()
    unique_paths: list[str] = []
    for path in paths:
        try:
            with open(path, "rb") as fh:
                digest = hashlib.sha256(fh.read()).hexdigest()
        except OSError:
            unique_paths.append(path)  # let process_file report the error
            continue
        if digest in seen:
            continue
        seen.add(digest)
        unique_paths.append(path)
    stats.files_unique = len(unique_paths)
    reports = process_files(unique_paths, rules, fix=False, jobs=jobs)
    for report in reports:
        if report.status == PARSE_FAILED:
            stats.files_failed += 1
            continue
        stats.enriched_commands += report.enriched_commands
        stats.total_commands += report.total_commands
        rules_here = set()
        for diagnostic in report.diagnostics:
            stats.occurrences[diagnostic.rule] += 1
            rules_here.add(diagnostic.rule)
        for rule_id in rules_here:
            stats.files_with[rule_id] += 1
        if rules_here:
            stats.files_with_smell += 1
    return stats, reports
