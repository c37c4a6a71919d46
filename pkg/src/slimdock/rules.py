"""The registry of the 14 size-impacting smells.

Each rule pairs a detection query with a repair transformation and the
verify-or-rollback protocol. Detection scope for "later cleanup" checks is
the enclosing RUN instruction only: container layering means a cleanup in
a later RUN cannot shrink the earlier layer, so cross-RUN cleanup does not
remove the size smell.

Repairs are one of four shapes:

* flag addition - the canonical long flag inserted right after the
  subcommand word (`pip install --no-cache-dir ...`);
* trailing cleanup - a new final element of the RUN's AND-chain
  (`... && rm -rf /var/lib/apt/lists/*`);
* adjacent cleanup - inserted immediately after the consuming command and
  before any later `cd`, so relative paths still resolve (`tar -zxf x.tgz
  && rm x.tgz && cd ...`);
* config insertion - a statement inserted before the anchor
  (`echo 'gem: --no-document' >> /etc/gemrc && gem update --system`).

Element insertions are applied only when the RUN's top level is a single
command or a pure AND-chain; a top-level `;`, `||`, compound statement, or
unparsed region makes the repair not-fixable (appending after those would
change failure semantics). Flag additions are always safe and are applied
regardless of the chain shape.

After every repair the rule's detection runs again on the affected RUN;
if the same anchor still matches, the edits are reverted and the outcome
reports a rollback, leaving the reprinted file byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Callable

from . import shell
from .dockerfile import DockerfileAst
from .enrich import UnifiedAst, command_words, enrich_node, enrich_statement
from .model import (
    NodeKind,
    SourceSpan,
    UnifiedNode,
    recompute_dirty,
)
from .query import (
    Consequent,
    Match,
    NodePattern,
    WordTest,
    document_order,
    find_all,
    holds,
    path_covers,
    statement_of,
)


@unique
class RuleId(str, Enum):
    pipUseNoCacheDir = "pipUseNoCacheDir"
    npmCacheCleanUseForce = "npmCacheCleanUseForce"
    mkdirUsrSrcThenRemove = "mkdirUsrSrcThenRemove"
    rmRecursiveAfterMktempD = "rmRecursiveAfterMktempD"
    tarSomethingRmTheSomething = "tarSomethingRmTheSomething"
    apkAddUseNoCache = "apkAddUseNoCache"
    aptGetInstallUseNoRec = "aptGetInstallUseNoRec"
    aptGetInstallThenRemoveAptLists = "aptGetInstallThenRemoveAptLists"
    gpgVerifyAscRmAsc = "gpgVerifyAscRmAsc"
    npmCacheCleanAfterInstall = "npmCacheCleanAfterInstall"
    gemUpdateSystemRmRootGem = "gemUpdateSystemRmRootGem"
    gemUpdateNoDocument = "gemUpdateNoDocument"
    yumInstallRmVarCacheYum = "yumInstallRmVarCacheYum"
    yarnCacheCleanAfterInstall = "yarnCacheCleanAfterInstall"


#: Alternate spellings seen in the wild, accepted by rule filters.
RULE_ALIASES: dict[str, RuleId] = {
    "aptGetInstallRmAptLists": RuleId.aptGetInstallThenRemoveAptLists,
    "rmRecurisveAfterMktempD": RuleId.rmRecursiveAfterMktempD,
    "pipUseCacheDir": RuleId.pipUseNoCacheDir,
}


def parse_rule_name(name: str) -> RuleId:
    try:
        return RuleId(name)
    except ValueError:
        if name in RULE_ALIASES:
            return RULE_ALIASES[name]
        raise ValueError(f"unknown rule: {name}") from None


@dataclass
class SmellDiagnostic:
    rule: RuleId
    file: str
    span: SourceSpan
    anchor: Match
    message: str
    fixable: bool
    run: UnifiedNode | None = field(repr=False, default=None)  # enclosing DOCKER-RUN
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def line(self) -> int:
        return self.span.start_line

    @property
    def column(self) -> int:
        return self.span.start_col


@dataclass
class RepairOutcome:
    status: str  # applied | rolled-back | not-fixable
    diagnostic: SmellDiagnostic
    edits: list["Edit"] = field(default_factory=list)
    reason: str | None = None


# ---------------------------------------------------------------------------
# Edits (undoable tree operations)
# ---------------------------------------------------------------------------


class Edit:
    def apply(self) -> None:  # pragma: no cover - interface
        raise NotImplementedError

    def revert(self) -> None:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass
class InsertChild(Edit):
    parent: UnifiedNode
    index: int
    node: UnifiedNode

    def apply(self) -> None:
        self.parent.add_child(self.node, self.index)

    def revert(self) -> None:
        self.parent.remove_child(self.node)


@dataclass
class WrapInChain(Edit):
    """Replace a single top-level statement with a synthesized AND-chain
    containing it, so a cleanup element can be attached."""

    script: UnifiedNode
    statement: UnifiedNode
    chain: UnifiedNode = field(default=None)

    def apply(self) -> None:
        index = self.script.child_index(self.statement)
        self.chain = UnifiedNode.synthesized(NodeKind.SC_AND)
        self.script.remove_child(self.statement)
        self.chain.add_child(self.statement)
        self.script.add_child(self.chain, index)

    def revert(self) -> None:
        index = self.script.child_index(self.chain)
        self.script.remove_child(self.chain)
        self.chain.remove_child(self.statement)
        self.script.add_child(self.statement, index)


def revert_edits(ast: UnifiedAst, edits: list[Edit]) -> None:
    for edit in reversed(edits):
        edit.revert()
    recompute_dirty(ast.root)


# ---------------------------------------------------------------------------
# Synthesized node construction
# ---------------------------------------------------------------------------


def synthesize_statement(text: str) -> UnifiedNode:
    """Build a synthesized statement by parsing its canonical text.

    Parsing guarantees reparse stability (the node tree is exactly what
    parse_shell would produce) and gives every node a `synth_text` for the
    printer. Spans are stripped and the subtree is marked modified.
    """
    script = shell.parse_shell(text)
    if len(script.children) != 1:
        raise ValueError(f"not a single statement: {text!r}")
    stmt = script.children[0]
    script.remove_child(stmt)
    for node in stmt.walk():
        node.props["synth_text"] = text[node.span.start : node.span.end]
        node.span = None
        node.modified = True
        node._subtree_dirty = True
    enrich_node(stmt)
    return stmt


def synthesize_word(text: str) -> UnifiedNode:
    word = UnifiedNode.synthesized(NodeKind.SC_WORD, literal=text)
    word.props["text"] = text
    word.props["quoting"] = "bare"
    return word


# ---------------------------------------------------------------------------
# Chain shape analysis (decision: element insertion safety)
# ---------------------------------------------------------------------------

_INSERTABLE_ELEMENTS = (NodeKind.SC_SIMPLE_COMMAND, NodeKind.SC_PIPELINE)


def run_script(run: UnifiedNode) -> UnifiedNode | None:
    for child in run.children:
        if child.kind is NodeKind.SC_SCRIPT:
            return child
    return None


def _element_ok(node: UnifiedNode) -> bool:
    if node.kind is NodeKind.SC_SIMPLE_COMMAND:
        return True
    if node.kind is NodeKind.SC_PIPELINE:
        return all(c.kind is NodeKind.SC_SIMPLE_COMMAND for c in node.children)
    return False


def chain_shape(run: UnifiedNode) -> tuple[str, UnifiedNode | None, UnifiedNode | None]:
    """(shape, script, chain): shape is 'single', 'chain', or 'other'.

    'single' and 'chain' are the shapes safe for element insertion: one
    statement, or a pure AND-chain of simple commands/pipelines.
    """
    script = run_script(run)
    if script is None:
        return "other", None, None  # exec-array form has no editable chain
    if len(script.children) != 1:
        return "other", script, None  # empty, or a `;` sequence at top level
    top = script.children[0]
    if _element_ok(top):
        return "single", script, top
    if top.kind is NodeKind.SC_AND and all(_element_ok(c) for c in top.children):
        return "chain", script, top
    return "other", script, top


def chain_element_of(chain: UnifiedNode, statement: UnifiedNode) -> UnifiedNode:
    node = statement
    while node.parent is not None and node.parent is not chain:
        node = node.parent
    return node


def _not_fixable_reason(run: UnifiedNode) -> str:
    if run.prop("run_form") == "exec-array":
        return "exec-form array has no shell chain to extend"
    return "RUN top level is not a simple command or pure AND-chain"


# ---------------------------------------------------------------------------
# Rule definitions
# ---------------------------------------------------------------------------


def _p(target, *consequents: Consequent, word: WordTest | None = None) -> NodePattern:
    return NodePattern(target, word=word, consequent=tuple(consequents))


def _has(pattern: NodePattern) -> Consequent:
    return Consequent("inNode", pattern, must_exist=True)


def _lacks(pattern: NodePattern) -> Consequent:
    return Consequent("inNode", pattern, must_exist=False)


def _rm_pattern(target_path: str, recursive: bool) -> NodePattern:
    consequents = [_has(_p("SC-RM-PATH", word=WordTest("glob", target_path)))]
    if recursive:
        consequents.insert(0, _has(_p("SC-RM-F-RECURSIVE")))
    return _p("SC-RM", *consequents)


def _rm_variable_pattern(name: str) -> NodePattern:
    return _p(
        "SC-RM",
        _has(_p("SC-RM-F-RECURSIVE")),
        _has(_p("SC-RM-PATH", word=WordTest("variable", name))),
    )


def _later(run: UnifiedNode, pattern: NodePattern, anchor: Match) -> bool:
    return holds("after", pattern, anchor, run)


Finder = Callable[[UnifiedAst, UnifiedNode], list[tuple[Match, dict]]]


@dataclass(frozen=True)
class Rule:
    id: RuleId
    description: str
    kind: str  # flag | append | adjacent | before
    finder: Finder
    repair_text: Callable[[dict], str] | None = None  # element insertions
    flag_text: str | None = None  # flag additions


def _simple_anchor_finder(pattern: NodePattern) -> Finder:
    def finder(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
        return [(m, {}) for m in find_all(run, pattern)]

    return finder


# -- rule 1: pipUseNoCacheDir ------------------------------------------------

_PIP_ANCHOR = _p("SC-PIP-INSTALL", _lacks(_p("SC-PIP-F-NO-CACHE-DIR")))

# -- rule 2: npmCacheCleanUseForce --------------------------------------------

_NPM_CLEAN_ANCHOR = _p("SC-NPM-CACHE-CLEAN", _lacks(_p("SC-NPM-F-FORCE")))

# -- rule 3: mkdirUsrSrcThenRemove ---------------------------------------------


def _find_mkdir_usr_src(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-MKDIR-PATH")):
        path = shell.word_text(match.node)
        if shell.contains_variable(path):
            continue  # unresolvable path: suppressed (conservative)
        normalized = path.rstrip("/")
        if normalized != "/usr/src" and not normalized.startswith("/usr/src/"):
            continue
        if _later(run, _rm_pattern(path, recursive=True), match):
            continue
        out.append((match, {"path": normalized}))
    return out


# -- rule 4: rmRecursiveAfterMktempD -------------------------------------------


def _captured_variable(statement: UnifiedNode) -> str | None:
    """Variable name when the statement sits in `V=$(...)`, else None."""
    node = statement
    anc = node.parent
    # the substitution may hold a small statement list around the mktemp
    while anc is not None and anc.kind in (
        NodeKind.SC_SEQ,
        NodeKind.SC_AND,
        NodeKind.SC_OR,
        NodeKind.SC_PIPELINE,
    ):
        node = anc
        anc = anc.parent
    if anc is None or anc.kind is not NodeKind.SC_COMMAND_SUBSTITUTION:
        return None
    holder = anc.parent
    if holder is not None and holder.kind is NodeKind.SC_ASSIGNMENT:
        return holder.prop("name")
    return None


def _find_mktemp_d(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-MKTEMP", _has(_p("SC-MKTEMP-F-D")))):
        var = _captured_variable(match.statement)
        if var is None:
            continue  # result not captured: nothing nameable to remove
        if _later(run, _rm_variable_pattern(var), match):
            continue
        out.append((match, {"var": var}))
    return out


# -- rule 5: tarSomethingRmTheSomething ------------------------------------------


def _archive_of(statement: UnifiedNode) -> str | None:
    for node in statement.walk():
        if node.kind is NodeKind.SC_WORD and node.has_annotation("SC-TAR-ARCHIVE"):
            return shell.word_text(node)
    return None


def _find_tar(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-TAR-EXTRACT")):
        archive = _archive_of(match.statement)
        if archive is None or archive in ("-", "/dev/stdin"):
            continue
        if shell.contains_variable(archive):
            continue
        if _later(run, _rm_pattern(archive, recursive=False), match):
            continue
        out.append((match, {"archive": archive}))
    return out


# -- rules 6/7: flag rules -----------------------------------------------------

_APK_ANCHOR = _p("SC-APK-ADD", _lacks(_p("SC-APK-F-NO-CACHE")))
_APT_GET_NOREC = _p("SC-APT-GET-INSTALL", _lacks(_p("SC-APT-GET-F-NO-INSTALL-RECOMMENDS")))
_APT_NOREC = _p("SC-APT-INSTALL", _lacks(_p("SC-APT-F-NO-INSTALL-RECOMMENDS")))


def _find_apt_norec(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = [(m, {}) for m in find_all(run, _APT_GET_NOREC)]
    out.extend((m, {}) for m in find_all(run, _APT_NOREC))
    return out


# -- rule 8: aptGetInstallThenRemoveAptLists --------------------------------------

_APT_LISTS = "/var/lib/apt/lists/*"


def _find_apt_lists(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    anchors = find_all(run, _p("SC-APT-GET-INSTALL")) + find_all(run, _p("SC-APT-INSTALL"))
    for match in anchors:
        if _later(run, _rm_pattern(_APT_LISTS, recursive=True), match):
            continue
        out.append((match, {}))
    return out


# -- rule 9: gpgVerifyAscRmAsc ----------------------------------------------------


def _find_gpg_asc(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-GPG", _has(_p("SC-GPG-F-VERIFY")))):
        asc = None
        for node in match.statement.walk():
            if node.kind is NodeKind.SC_WORD and node.has_annotation("SC-GPG-FILE"):
                text = shell.word_text(node)
                if text.endswith(".asc") and not shell.contains_variable(text):
                    asc = text
                    break
        if asc is None:
            continue
        if _later(run, _rm_pattern(asc, recursive=False), match):
            continue
        out.append((match, {"asc": asc}))
    return out


# -- rule 10: npmCacheCleanAfterInstall ---------------------------------------------


def _find_npm_install(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-NPM-INSTALL")):
        # any later `npm cache clean` counts: if it lacks --force,
        # npmCacheCleanUseForce flags that command itself
        if _later(run, _p("SC-NPM-CACHE-CLEAN"), match):
            continue
        out.append((match, {}))
    return out


# -- rules 11/12: gem update --system ------------------------------------------------

_GEM_UPDATE_SYSTEM = _p("SC-GEM-UPDATE", _has(_p("SC-GEM-F-SYSTEM")))
_ROOT_GEM = "/root/.gem"


def _find_gem_rm_root(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _GEM_UPDATE_SYSTEM):
        if _later(run, _rm_pattern(_ROOT_GEM, recursive=True), match):
            continue
        out.append((match, {}))
    return out


def _writes_gemrc_no_document(ast: UnifiedAst) -> bool:
    for run in ast.root.find_kind(NodeKind.DOCKER_RUN):
        for node in run.walk():
            if node.kind is not NodeKind.SC_SIMPLE_COMMAND:
                continue
            if not _redirects_to_gemrc(node):
                continue
            joined = " ".join(shell.word_text(w) for w in command_words(node))
            if "gem:" in joined and "--no-document" in joined:
                return True
    return False


def _redirects_to_gemrc(cmd: UnifiedNode) -> bool:
    for child in cmd.children:
        if child.kind is not NodeKind.SC_REDIRECTION:
            continue
        if child.prop("op") not in (">", ">>"):
            continue
        if child.children and shell.word_text(child.children[0]).endswith("gemrc"):
            return True
    return False


def _find_gem_no_document(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _GEM_UPDATE_SYSTEM):
        if holds("inNode", _p("SC-GEM-F-NO-DOCUMENT"), match, run):
            continue
        if _writes_gemrc_no_document(ast):
            continue
        out.append((match, {}))
    return out


# -- rule 13: yumInstallRmVarCacheYum ---------------------------------------------


def _find_yum_install(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-YUM-INSTALL")):
        if _later(run, _rm_pattern("/var/cache/yum", recursive=True), match):
            continue
        if _later(run, _rm_pattern("/var/cache/dnf", recursive=True), match):
            continue  # dnf spelling of the same cache
        out.append((match, {}))
    return out


# -- rule 14: yarnCacheCleanAfterInstall ------------------------------------------


def _find_yarn_install(ast: UnifiedAst, run: UnifiedNode) -> list[tuple[Match, dict]]:
    out = []
    for match in find_all(run, _p("SC-YARN-INSTALL")):
        if _later(run, _p("SC-YARN-CACHE-CLEAN"), match):
            continue
        out.append((match, {}))
    return out


RULES: list[Rule] = [
    Rule(
        RuleId.pipUseNoCacheDir,
        "Clean cache after pip install.",
        "flag",
        _simple_anchor_finder(_PIP_ANCHOR),
        flag_text="--no-cache-dir",
    ),
    Rule(
        RuleId.npmCacheCleanUseForce,
        "Clean cache after npm install.",
        "flag",
        _simple_anchor_finder(_NPM_CLEAN_ANCHOR),
        flag_text="--force",
    ),
    Rule(
        RuleId.mkdirUsrSrcThenRemove,
        "Remove /usr/src/* after usage.",
        "append",
        _find_mkdir_usr_src,
        repair_text=lambda extras: f"rm -rf {extras['path']}",
    ),
    Rule(
        RuleId.rmRecursiveAfterMktempD,
        "Remove temporary folders.",
        "append",
        _find_mktemp_d,
        repair_text=lambda extras: 'rm -rf "$' + extras["var"] + '"',
    ),
    Rule(
        RuleId.tarSomethingRmTheSomething,
        "Remove tar files after decompression.",
        "adjacent",
        _find_tar,
        repair_text=lambda extras: f"rm {extras['archive']}",
    ),
    Rule(
        RuleId.apkAddUseNoCache,
        "Use --no-cache flag with apk add.",
        "flag",
        _simple_anchor_finder(_APK_ANCHOR),
        flag_text="--no-cache",
    ),
    Rule(
        RuleId.aptGetInstallUseNoRec,
        "Use --no-install-recommends flag in apt-get install.",
        "flag",
        _find_apt_norec,
        flag_text="--no-install-recommends",
    ),
    Rule(
        RuleId.aptGetInstallThenRemoveAptLists,
        "Remove /var/lib/apt/lists/* after apt-get install.",
        "append",
        _find_apt_lists,
        repair_text=lambda extras: f"rm -rf {_APT_LISTS}",
    ),
    Rule(
        RuleId.gpgVerifyAscRmAsc,
        "Remove .asc file after usage.",
        "adjacent",
        _find_gpg_asc,
        repair_text=lambda extras: f"rm {extras['asc']}",
    ),
    Rule(
        RuleId.npmCacheCleanAfterInstall,
        "Force to clean cache after npm install.",
        "append",
        _find_npm_install,
        repair_text=lambda extras: "npm cache clean --force",
    ),
    Rule(
        RuleId.gemUpdateSystemRmRootGem,
        "Clean cache after gem update --system.",
        "append",
        _find_gem_rm_root,
        repair_text=lambda extras: f"rm -rf {_ROOT_GEM}",
    ),
    Rule(
        RuleId.gemUpdateNoDocument,
        "Add --no-document flag to the .gemrc config file.",
        "before",
        _find_gem_no_document,
        repair_text=lambda extras: "echo 'gem: --no-document' >> /etc/gemrc",
    ),
    Rule(
        RuleId.yumInstallRmVarCacheYum,
        "Clean cache after yum install.",
        "append",
        _find_yum_install,
        repair_text=lambda extras: "rm -rf /var/cache/yum",
    ),
    Rule(
        RuleId.yarnCacheCleanAfterInstall,
        "Clean cache after yarn install.",
        "append",
        _find_yarn_install,
        repair_text=lambda extras: "yarn cache clean",
    ),
]

_RULE_BY_ID = {rule.id: rule for rule in RULES}
_RULE_INDEX = {rule.id: i for i, rule in enumerate(RULES)}


def rule_for(rule_id: RuleId) -> Rule:
    return _RULE_BY_ID[rule_id]


# ---------------------------------------------------------------------------
# Detection
# ---------------------------------------------------------------------------


def _diagnostic_span(match: Match, run: UnifiedNode) -> SourceSpan:
    if match.statement.span is not None:
        return match.statement.span
    if match.node.span is not None:
        return match.node.span
    return run.span


def _detect_in_run(
    ast: UnifiedAst, run: UnifiedNode, rules: list[Rule]
) -> list[SmellDiagnostic]:
    out: list[SmellDiagnostic] = []
    insertable = chain_shape(run)[0] in ("single", "chain")
    for rule in rules:
        for match, extras in rule.finder(ast, run):
            fixable = rule.kind == "flag" or insertable
            out.append(
                SmellDiagnostic(
                    rule=rule.id,
                    file=ast.path,
                    span=_diagnostic_span(match, run),
                    anchor=match,
                    message=rule.description,
                    fixable=fixable,
                    run=run,
                    extras=extras,
                )
            )
    return out


def detect(
    ast: UnifiedAst, rules: set[RuleId] | list[RuleId] | None = None
) -> list[SmellDiagnostic]:
    """All smell diagnostics for the file, in document order."""
    selected = [r for r in RULES if rules is None or r.id in set(rules)]
    diagnostics: list[SmellDiagnostic] = []
    for run in ast.root.find_kind(NodeKind.DOCKER_RUN):
        diagnostics.extend(_detect_in_run(ast, run, selected))
    order = document_order(ast.root)
    diagnostics.sort(
        key=lambda d: (
            order.get(id(d.anchor.statement), 0),
            order.get(id(d.anchor.node), 0),
            _RULE_INDEX[d.rule],
        )
    )
    return diagnostics


# ---------------------------------------------------------------------------
# Repair
# ---------------------------------------------------------------------------


def repair(ast: UnifiedAst, diagnostic: SmellDiagnostic) -> RepairOutcome:
    """Apply the rule's transformation; all inserted nodes are synthesized."""
    rule = rule_for(diagnostic.rule)
    run = diagnostic.run
    if rule.kind == "flag":
        word = synthesize_word(rule.flag_text)
        cmd = diagnostic.anchor.statement
        index = cmd.child_index(diagnostic.anchor.node) + 1
        edit = InsertChild(cmd, index, word)
        edit.apply()
        enrich_statement(cmd)
        return RepairOutcome("applied", diagnostic, [edit])

    shape, script, top = chain_shape(run)
    if shape == "other":
        return RepairOutcome(
            "not-fixable", diagnostic, reason=_not_fixable_reason(run)
        )
    statement = synthesize_statement(rule.repair_text(diagnostic.extras))
    edits: list[Edit] = []
    if shape == "single":
        wrap = WrapInChain(script, top)
        wrap.apply()
        edits.append(wrap)
        chain = wrap.chain
    else:
        chain = top
    if rule.kind == "append":
        index = len(chain.children)
    elif rule.kind == "adjacent":
        element = chain_element_of(chain, diagnostic.anchor.statement)
        index = chain.child_index(element) + 1
    elif rule.kind == "before":
        element = chain_element_of(chain, diagnostic.anchor.statement)
        index = chain.child_index(element)
    else:  # pragma: no cover - registry is closed
        raise ValueError(f"unknown repair kind {rule.kind!r}")
    insert = InsertChild(chain, index, statement)
    insert.apply()
    edits.append(insert)
    return RepairOutcome("applied", diagnostic, edits)


def verify_or_rollback(
    ast: UnifiedAst, diagnostic: SmellDiagnostic, outcome: RepairOutcome
) -> RepairOutcome:
    """Re-run the rule on the affected RUN; revert if the anchor persists."""
    if outcome.status != "applied":
        return outcome
    rule = rule_for(diagnostic.rule)
    still = _detect_in_run(ast, diagnostic.run, [rule])
    for new_diag in still:
        if new_diag.anchor.node is diagnostic.anchor.node:
            revert_edits(ast, outcome.edits)
            return RepairOutcome(
                "rolled-back", diagnostic, outcome.edits, reason="still-detected"
            )
    return outcome
