"""Declarative matching over the unified AST.

A NodePattern names a target (node kind or annotation label), optionally a
text test for word nodes, and structural post-conditions: other patterns
that must or must not hold inside, before, or after the match. Patterns
are built programmatically by the rules module; unknown annotation labels
are rejected at construction time so misconfigured rules fail at startup,
not per file.

``before``/``after`` are evaluated at the statement level: positions are
compared in depth-first document order of the enclosing command
statements, which also works for statements synthesized by repairs (they
have no spans). Nodes inside SC-UNPARSED subtrees are never matched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from typing import Iterator, Literal

from .model import (
    STATEMENT_KINDS,
    NodeKind,
    SlimdockError,
    UnifiedNode,
    is_registered_label,
)
from .shell import variable_reference, word_text


class PatternConfigError(SlimdockError):
    """A pattern references an unknown annotation label."""


def _normalize_path(p: str) -> str:
    if p.startswith("./"):
        p = p[2:]
    if len(p) > 1:
        p = p.rstrip("/") or p
    return p


def path_covers(operand: str, target: str) -> bool:
    """True when removing ``operand`` removes ``target``.

    String equality, the operand interpreted as a glob matching the target,
    and the directory/contents equivalences either way (``x`` vs ``x/*``).
    """
    o = _normalize_path(operand)
    t = _normalize_path(target)
    if o == t:
        return True
    if fnmatchcase(t, o):
        return True
    if o.endswith("/*") and o[:-2] == t:
        return True
    if t.endswith("/*") and t[:-2] == o:
        return True
    return False


@dataclass(frozen=True)
class WordTest:
    """Text predicate applied to a word node's logical text."""

    mode: Literal["exact", "prefix", "glob", "variable"]
    value: str

    def matches(self, text: str) -> bool:
        if self.mode == "exact":
            return text == self.value
        if self.mode == "prefix":
            return text.startswith(self.value)
        if self.mode == "glob":
            # the word is the glob; equal strings also count (D2)
            return path_covers(text, self.value)
        if self.mode == "variable":
            return variable_reference(text) == self.value
        raise PatternConfigError(f"unknown word test mode {self.mode!r}")


@dataclass(frozen=True)
class Consequent:
    relation: Literal["inNode", "before", "after"]
    pattern: "NodePattern"
    must_exist: bool = True


@dataclass(frozen=True)
class NodePattern:
    """Target kind/label plus optional word test and post-conditions."""

    target: NodeKind | str
    word: WordTest | None = None
    consequent: tuple[Consequent, ...] = ()
    bind: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.target, NodeKind) and not is_registered_label(self.target):
            raise PatternConfigError(f"pattern targets unknown label {self.target!r}")


@dataclass
class Match:
    node: UnifiedNode
    scope: UnifiedNode
    statement: UnifiedNode
    bindings: dict[str, UnifiedNode] = field(default_factory=dict)


def statement_of(node: UnifiedNode) -> UnifiedNode:
    """Nearest enclosing command statement (the node itself if it is one)."""
    cur: UnifiedNode | None = node
    while cur is not None:
        if cur.kind in STATEMENT_KINDS:
            return cur
        cur = cur.parent
    return node


def _walk_matchable(root: UnifiedNode) -> Iterator[UnifiedNode]:
    """Pre-order walk that refuses to descend into SC-UNPARSED regions."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if node.kind is NodeKind.SC_UNPARSED:
            continue
        stack.extend(reversed(node.children))


def _target_matches(node: UnifiedNode, pattern: NodePattern) -> bool:
    if isinstance(pattern.target, NodeKind):
        if node.kind is not pattern.target:
            return False
    elif not node.has_annotation(pattern.target):
        return False
    if pattern.word is not None:
        text = node.prop("text")
        if text is None:
            return False
        if not pattern.word.matches(text):
            return False
    return True


def document_order(scope: UnifiedNode) -> dict[int, int]:
    """DFS pre-order index per node id; spans-free, so synthesized nodes
    order correctly too."""
    return {id(node): i for i, node in enumerate(scope.walk())}


def find_all(root: UnifiedNode, pattern: NodePattern) -> list[Match]:
    """All matches of ``pattern`` under ``root``, in document order."""
    matches: list[Match] = []
    order = None
    for node in _walk_matchable(root):
        if not _target_matches(node, pattern):
            continue
        match = Match(node=node, scope=root, statement=statement_of(node))
        if pattern.bind:
            match.bindings[pattern.bind] = node
        ok = True
        for consequent in pattern.consequent:
            if order is None:
                order = document_order(root)
            found = _evaluate(consequent.relation, consequent.pattern, match, root, order)
            if bool(found) != consequent.must_exist:
                ok = False
                break
            if found is not None and consequent.pattern.bind:
                match.bindings[consequent.pattern.bind] = found
        if ok:
            matches.append(match)
    return matches


def _evaluate(
    relation: str,
    pattern: NodePattern,
    anchor: Match,
    scope: UnifiedNode,
    order: dict[int, int],
) -> UnifiedNode | None:
    """First node satisfying the relation, or None.

    Relations anchor at the match's enclosing command statement: ``inNode``
    searches that statement's subtree, ``before``/``after`` compare the
    document order of other matches' statements against it.
    """
    if relation == "inNode":
        for node in _walk_matchable(anchor.statement):
            if _target_matches(node, pattern):
                return node
        return None
    if relation in ("before", "after"):
        anchor_pos = order.get(id(anchor.statement))
        if anchor_pos is None:
            return None
        for other in find_all(scope, NodePattern(pattern.target, pattern.word)):
            if other.statement is anchor.statement:
                continue
            pos = order.get(id(other.statement))
            if pos is None:
                continue
            if relation == "after" and pos > anchor_pos and _nested_ok(other, pattern):
                return other.node
            if relation == "before" and pos < anchor_pos and _nested_ok(other, pattern):
                return other.node
        return None
    raise PatternConfigError(f"unknown relation {relation!r}")


def _nested_ok(match: Match, pattern: NodePattern) -> bool:
    """Post-conditions of a relation's inner pattern (e.g. an rm that must
    carry certain flags) are checked against the candidate's statement."""
    for consequent in pattern.consequent:
        if consequent.relation != "inNode":
            raise PatternConfigError("nested relation patterns support inNode only")
        found = None
        for node in _walk_matchable(match.statement):
            if _target_matches(node, consequent.pattern):
                found = node
                break
        if bool(found) != consequent.must_exist:
            return False
    return True


def holds(
    relation: Literal["inNode", "before", "after"],
    pattern: NodePattern,
    anchor: Match,
    scope: UnifiedNode,
) -> bool:
    """Whether ``pattern`` stands in ``relation`` to the anchor within scope."""
    order = document_order(scope)
    return _evaluate(relation, pattern, anchor, scope, order) is not None
