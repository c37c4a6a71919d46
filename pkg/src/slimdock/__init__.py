"""slimdock: detect and auto-repair size-impacting Dockerfile smells.

The library pipeline is parse -> unify -> enrich -> detect -> repair ->
reprint, with a format-preserving printer that only rewrites what a repair
actually touched. See README.md for the CLI.
"""

from .dockerfile import DockerfileAst, parse_dockerfile
from .enrich import (
    UnifiedAst,
    build_unified_ast,
    enrich,
    parse_and_enrich,
    resolve_wrappers,
)
from .model import NodeKind, SourceSpan, UnifiedNode, span_text
from .printer import print_minimal, render_full, unified_diff
from .query import Consequent, Match, NodePattern, WordTest, find_all, holds
from .rules import (
    RULES,
    RepairOutcome,
    RuleId,
    SmellDiagnostic,
    detect,
    repair,
    verify_or_rollback,
)
from .runner import CorpusStats, FileReport, analyze_text, collect_stats, fix_text
from .shell import parse_shell

__version__ = "0.1.0"

__all__ = [
    "CorpusStats",
    "Consequent",
    "DockerfileAst",
    "FileReport",
    "Match",
    "NodeKind",
    "NodePattern",
    "RepairOutcome",
    "RuleId",
    "RULES",
    "SmellDiagnostic",
    "SourceSpan",
    "UnifiedAst",
    "UnifiedNode",
    "WordTest",
    "analyze_text",
    "build_unified_ast",
    "collect_stats",
    "detect",
    "enrich",
    "find_all",
    "fix_text",
    "holds",
    "parse_and_enrich",
    "parse_dockerfile",
    "parse_shell",
    "print_minimal",
    "render_full",
    "repair",
    "resolve_wrappers",
    "span_text",
    "unified_diff",
    "verify_or_rollback",
]
