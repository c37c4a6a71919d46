"""Core source model shared by every other module.

Defines source spans, the unified node type that mixes Dockerfile-level and
shell-level constructs in one tree, the annotation label registry, and the
modification tracking that the minimal-diff printer relies on.

Offsets are indices into the decoded source text (the text is decoded from
UTF-8 once, at ingestion); slicing ``text[start:end]`` is always exact and
never normalized.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Any, Iterator


class SlimdockError(Exception):
    """Base class for all library errors."""


class SpanError(SlimdockError):
    """An out-of-bounds or inverted span. Signals a parser bug."""


class AnnotationError(SlimdockError):
    """An annotation label that is not in the registry."""


class RenderError(SlimdockError):
    """A modified node that the printer does not know how to render."""


@unique
class NodeKind(str, Enum):
    """Flat kind enum over both namespaces.

    DOCKER-* kinds come from the Dockerfile grammar, SC-* kinds from the
    embedded shell grammar. A single namespace-prefixed enum lets queries
    traverse both levels of the tree transparently.
    """

    # Dockerfile level
    DOCKER_FILE = "DOCKER-FILE"
    DOCKER_FROM = "DOCKER-FROM"
    DOCKER_RUN = "DOCKER-RUN"
    DOCKER_COPY = "DOCKER-COPY"
    DOCKER_ADD = "DOCKER-ADD"
    DOCKER_ENV = "DOCKER-ENV"
    DOCKER_ARG = "DOCKER-ARG"
    DOCKER_WORKDIR = "DOCKER-WORKDIR"
    DOCKER_EXPOSE = "DOCKER-EXPOSE"
    DOCKER_ENTRYPOINT = "DOCKER-ENTRYPOINT"
    DOCKER_CMD = "DOCKER-CMD"
    DOCKER_LABEL = "DOCKER-LABEL"
    DOCKER_USER = "DOCKER-USER"
    DOCKER_VOLUME = "DOCKER-VOLUME"
    DOCKER_SHELL = "DOCKER-SHELL"
    DOCKER_HEALTHCHECK = "DOCKER-HEALTHCHECK"
    DOCKER_ONBUILD = "DOCKER-ONBUILD"
    DOCKER_STOPSIGNAL = "DOCKER-STOPSIGNAL"
    DOCKER_MAINTAINER = "DOCKER-MAINTAINER"
    DOCKER_COMMENT = "DOCKER-COMMENT"
    DOCKER_UNKNOWN = "DOCKER-UNKNOWN"

    # Shell level
    SC_SCRIPT = "SC-SCRIPT"
    SC_SIMPLE_COMMAND = "SC-SIMPLE-COMMAND"
    SC_PIPELINE = "SC-PIPELINE"
    SC_AND = "SC-AND"
    SC_OR = "SC-OR"
    SC_SEQ = "SC-SEQ"
    SC_SUBSHELL = "SC-SUBSHELL"
    SC_COMMAND_SUBSTITUTION = "SC-COMMAND-SUBSTITUTION"
    SC_COMPOUND = "SC-COMPOUND"
    SC_WORD = "SC-WORD"
    SC_VARIABLE = "SC-VARIABLE"
    SC_ASSIGNMENT = "SC-ASSIGNMENT"
    SC_REDIRECTION = "SC-REDIRECTION"
    SC_UNPARSED = "SC-UNPARSED"


#: Node kinds that act as statements for textual before/after ordering.
STATEMENT_KINDS = frozenset(
    {
        NodeKind.SC_SIMPLE_COMMAND,
        NodeKind.SC_COMPOUND,
        NodeKind.SC_SUBSHELL,
        NodeKind.SC_UNPARSED,
    }
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open [start, end) region of the source text.

    ``start``/``end`` are offsets into the decoded file text and are the
    authoritative coordinates; line/column positions (1-based) are derived
    from them and carried for reporting.
    """

    start: int
    end: int
    start_line: int = 1
    start_col: int = 1
    end_line: int = 1
    end_col: int = 1

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise SpanError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


class SourceMap:
    """Derives line/column positions for offsets of one source text."""

    def __init__(self, text: str):
        self.text = text
        self._line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(i + 1)

    def position(self, offset: int) -> tuple[int, int]:
        """1-based (line, column) of ``offset``; offset may equal len(text)."""
        if offset < 0 or offset > len(self.text):
            raise SpanError(f"offset {offset} out of range 0..{len(self.text)}")
        line_idx = bisect.bisect_right(self._line_starts, offset) - 1
        return line_idx + 1, offset - self._line_starts[line_idx] + 1

    def span(self, start: int, end: int) -> SourceSpan:
        sl, sc = self.position(start)
        el, ec = self.position(end)
        return SourceSpan(start, end, sl, sc, el, ec)

    def line_start(self, offset: int) -> int:
        """Offset of the first character of the line containing ``offset``."""
        line_idx = bisect.bisect_right(self._line_starts, offset) - 1
        return self._line_starts[line_idx]


def span_text(source: str, span: SourceSpan) -> str:
    """Exact slice of ``source`` covered by ``span``; no normalization.

    Raises SpanError when the span does not lie within the source; that
    always indicates a parser bug, never bad user input.
    """
    if span.end > len(source):
        raise SpanError(
            f"span [{span.start}, {span.end}) exceeds source length {len(source)}"
        )
    return source[span.start : span.end]


# ---------------------------------------------------------------------------
# Annotation label registry
# ---------------------------------------------------------------------------

_ANNOTATION_REGISTRY: set[str] = set()


def register_annotation_labels(labels: Iterator[str] | list[str] | set[str]) -> None:
    """Add labels to the controlled vocabulary (startup-time only)."""
    for label in labels:
        _ANNOTATION_REGISTRY.add(label)


def known_annotation_labels() -> frozenset[str]:
    return frozenset(_ANNOTATION_REGISTRY)


def is_registered_label(label: str) -> bool:
    return label in _ANNOTATION_REGISTRY


class UnifiedNode:
    """One AST node spanning both the Dockerfile and shell grammars.

    A node either originates from the source (it has a span) or was
    synthesized by a repair (span is None and ``modified`` is True).
    ``literal`` carries the verbatim token text for leaves, which is what
    the printer emits for synthesized leaves. Semantic extras (a word's
    unquoted text, a RUN's form, ...) live in ``props``.
    """

    __slots__ = (
        "kind",
        "children",
        "parent",
        "span",
        "annotations",
        "modified",
        "literal",
        "props",
        "_subtree_dirty",
    )

    def __init__(
        self,
        kind: NodeKind,
        span: SourceSpan | None = None,
        literal: str | None = None,
        modified: bool = False,
    ):
        self.kind = kind
        self.children: list[UnifiedNode] = []
        self.parent: UnifiedNode | None = None
        self.span = span
        self.annotations: set[str] = set()
        self.modified = modified
        self.literal = literal
        self.props: dict[str, Any] = {}
        self._subtree_dirty = modified

    # -- construction -------------------------------------------------

    @classmethod
    def synthesized(cls, kind: NodeKind, literal: str | None = None) -> "UnifiedNode":
        return cls(kind, span=None, literal=literal, modified=True)

    # -- tree surgery ---------------------------------------------------

    def add_child(self, child: "UnifiedNode", index: int | None = None) -> "UnifiedNode":
        """Attach ``child``, removing it from any previous parent first."""
        if child.parent is not None:
            child.parent.children.remove(child)
        child.parent = self
        if index is None:
            self.children.append(child)
        else:
            self.children.insert(index, child)
        if child._subtree_dirty or child.modified:
            self._propagate_dirty()
        return child

    def remove_child(self, child: "UnifiedNode") -> "UnifiedNode":
        self.children.remove(child)
        child.parent = None
        return child

    def child_index(self, child: "UnifiedNode") -> int:
        for i, c in enumerate(self.children):
            if c is child:
                return i
        raise ValueError("node is not a child of this parent")

    # -- modification tracking -----------------------------------------

    def mark_modified(self) -> None:
        """Flag this node as changed and dirty every ancestor's subtree state."""
        self.modified = True
        self._subtree_dirty = True
        self._propagate_dirty()

    def _propagate_dirty(self) -> None:
        node = self.parent
        while node is not None:
            if node._subtree_dirty:
                break
            node._subtree_dirty = True
            node = node.parent
        self._subtree_dirty = True

    @property
    def subtree_dirty(self) -> bool:
        """True when this node or anything below it was modified."""
        return self._subtree_dirty or self.modified

    # -- annotations -----------------------------------------------------

    def annotate(self, label: str) -> None:
        if not is_registered_label(label):
            raise AnnotationError(f"unknown annotation label: {label!r}")
        self.annotations.add(label)

    def has_annotation(self, label: str) -> bool:
        return label in self.annotations

    # -- traversal -------------------------------------------------------

    def walk(self) -> Iterator["UnifiedNode"]:
        """Depth-first pre-order over this subtree, including self."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def ancestors(self) -> Iterator["UnifiedNode"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def find_kind(self, kind: NodeKind) -> Iterator["UnifiedNode"]:
        for node in self.walk():
            if node.kind is kind:
                yield node

    def prop(self, key: str, default: Any = None) -> Any:
        return self.props.get(key, default)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        where = f"{self.span.start}:{self.span.end}" if self.span else "synth"
        lit = f" {self.literal!r}" if self.literal is not None else ""
        return f"<{self.kind.value} {where}{lit}>"


def recompute_dirty(root: UnifiedNode) -> bool:
    """Recompute the whole tree's dirty state from its ``modified`` flags.

    Needed after a rollback removed modified nodes: the incremental flags
    only ever turn on, so reverting edits requires a fresh bottom-up pass.
    Returns the root's resulting dirty state.
    """
    dirty = root.modified
    for child in root.children:
        if recompute_dirty(child):
            dirty = True
    root._subtree_dirty = dirty
    return dirty


def validate_tree(root: UnifiedNode) -> None:
    """Assert structural invariants; used by tests, not production paths.

    Checks parent links, span containment, and the synthesized-node rule
    (no span implies modified).
    """
    for node in root.walk():
        for child in node.children:
            if child.parent is not node:
                raise SlimdockError(f"broken parent link at {child!r}")
            if (
                child.span is not None
                and node.span is not None
                and not node.span.contains(child.span)
            ):
                raise SpanError(f"child span {child!r} escapes parent {node!r}")
        if node.span is None and not node.modified:
            raise SlimdockError(f"synthesized node without modified flag: {node!r}")
