"""Parser for the POSIX-shell subset that appears in RUN payloads.

The supported subset is exactly what the smell rules need: simple commands,
AND/OR lists, sequences, pipelines, subshells, command substitution,
assignments, redirections, quoting, and variables. Compound statements
(if/for/while/until/case/brace groups) parse into a generic SC-COMPOUND
block whose inner statements are parsed normally. Anything outside the
subset degrades to SC-UNPARSED instead of failing: the smallest enclosing
statement for local constructs (heredocs, process substitution, arrays),
the whole script for pathological input (unterminated quotes).

AND/OR/SEQ lists are flattened (n-ary), so "a && b && c" is one SC-AND
with three children; inserting a cleanup step is a single child insertion
and before/after queries are index comparisons.

Round-trip guarantee: every parsed node carries a span into the payload
text and sibling spans tile it, so re-rendering an unmodified tree from
spans plus the inter-token gaps reproduces the payload byte-for-byte,
including backslash-newline continuations (they are whitespace to the
lexer and live in the gaps).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .model import NodeKind, SourceMap, SourceSpan, UnifiedNode

SpanBuilder = Callable[[int, int], SourceSpan]


class ShellUnterminated(Exception):
    """Unterminated quote/substitution/heredoc; degrades the whole script."""

    def __init__(self, what: str, pos: int):
        super().__init__(f"unterminated {what} at offset {pos}")
        self.what = what
        self.pos = pos


_WS = " \t\r"
_METACHARS = "&|;()<>"
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SPECIAL_PARAMS = "@*#?$!-0123456789"
_ASSIGN_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*\+?=")

_RESERVED_OPENERS = {"if", "while", "until", "for", "case", "{"}
_STRUCT_WORDS = {
    "if": ({"then", "elif", "else"}, "fi"),
    "while": ({"do"}, "done"),
    "until": ({"do"}, "done"),
    "{": (set(), "}"),
}


@dataclass
class Seg:
    """One piece of a word: literal text, a quoted run, a variable, etc."""

    kind: str  # bare | single | double | var | subst | arith
    start: int
    end: int
    logical: str
    name: str | None = None  # var segments
    inner: tuple[int, int] | None = None  # subst segments: interior range
    delim: str | None = None  # subst segments: "$(" or "`"


@dataclass
class Tok:
    kind: str  # word | op | redir | eof
    start: int
    end: int
    value: str  # op text / redirection operator / word logical text
    segments: list[Seg] = field(default_factory=list)
    fd: str | None = None  # redirections only


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------


class _Lexer:
    def __init__(self, text: str, start: int, end: int):
        self.text = text
        self.i = start
        self.end = end

    def tokens(self) -> list[Tok]:
        toks: list[Tok] = []
        while True:
            tok = self._next()
            toks.append(tok)
            if tok.kind == "eof":
                return toks

    # -- helpers --------------------------------------------------------

    def _peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.text[j] if j < self.end else ""

    def _skip_trivia(self) -> None:
        while self.i < self.end:
            ch = self.text[self.i]
            if ch in _WS:
                self.i += 1
            elif ch == "\\" and self._peek(1) == "\n":
                self.i += 2  # line continuation
            elif ch == "#":
                while self.i < self.end and self.text[self.i] != "\n":
                    self.i += 1
            else:
                return

    def _next(self) -> Tok:
        self._skip_trivia()
        if self.i >= self.end:
            return Tok("eof", self.i, self.i, "")
        start = self.i
        ch = self.text[self.i]

        if ch == "\n":
            self.i += 1
            return Tok("op", start, self.i, "\n")

        redir = self._try_redirection()
        if redir is not None:
            return redir

        for op in ("&&", "||", ";;", "|&"):
            if self.text.startswith(op, self.i):
                self.i += 2
                return Tok("op", start, self.i, op)
        if ch in "&|;()":
            self.i += 1
            return Tok("op", start, self.i, ch)

        return self._word()

    def _try_redirection(self) -> Tok | None:
        start = self.i
        m = re.match(r"\d+", self.text[self.i : self.end])
        fd = m.group(0) if m else None
        j = self.i + (len(fd) if fd else 0)
        rest = self.text[j : self.end]
        ops = (">>", ">&", ">|", ">", "<<<", "<<-", "<<", "<&", "<")
        if fd is None and (rest.startswith("&>") or rest.startswith("&>>")):
            op = "&>>" if rest.startswith("&>>") else "&>"
            self.i = j + len(op)
            return Tok("redir", start, self.i, op)
        for op in ops:
            if rest.startswith(op):
                self.i = j + len(op)
                # "2>&1" style: a directly attached digit target closes the token
                if op in (">&", "<&"):
                    m2 = re.match(r"\d+|-", self.text[self.i : self.end])
                    if m2:
                        self.i += len(m2.group(0))
                        return Tok("redir", start, self.i, op + m2.group(0), fd=fd)
                return Tok("redir", start, self.i, op, fd=fd)
        if fd is not None:
            return None  # plain digits: an ordinary word
        return None

    # -- word scanning ----------------------------------------------------

    def _word(self) -> Tok:
        start = self.i
        segs: list[Seg] = []
        bare_start = self.i
        bare_logical: list[str] = []

        def flush_bare() -> None:
            nonlocal bare_start
            if self.i > bare_start or bare_logical:
                segs.append(
                    Seg("bare", bare_start, self.i, "".join(bare_logical))
                )
                bare_logical.clear()
            bare_start = self.i

        while self.i < self.end:
            ch = self.text[self.i]
            if ch in _WS or ch == "\n" or ch in _METACHARS:
                break
            if ch == "'":
                flush_bare()
                segs.append(self._single_quoted())
                bare_start = self.i
            elif ch == '"':
                flush_bare()
                segs.extend(self._double_quoted())
                bare_start = self.i
            elif ch == "$":
                flush_bare()
                segs.append(self._dollar())
                bare_start = self.i
            elif ch == "`":
                flush_bare()
                segs.append(self._backtick())
                bare_start = self.i
            elif ch == "\\":
                nxt = self._peek(1)
                if nxt == "\n":
                    self.i += 2  # continuation inside a word
                elif nxt == "":
                    bare_logical.append("\\")
                    self.i += 1
                else:
                    bare_logical.append(nxt)
                    self.i += 2
            else:
                bare_logical.append(ch)
                self.i += 1
        flush_bare()
        logical = "".join(s.logical for s in segs)
        return Tok("word", start, self.i, logical, segments=segs)

    def _single_quoted(self) -> Seg:
        start = self.i
        self.i += 1
        j = self.text.find("'", self.i, self.end)
        if j < 0:
            raise ShellUnterminated("single quote", start)
        inner = self.text[self.i : j]
        self.i = j + 1
        return Seg("single", start, self.i, inner)

    def _double_quoted(self) -> list[Seg]:
        start = self.i
        self.i += 1
        segs: list[Seg] = []
        chunk_start = self.i
        logical: list[str] = []

        def flush() -> None:
            nonlocal chunk_start
            if self.i > chunk_start or logical:
                segs.append(Seg("double", chunk_start, self.i, "".join(logical)))
                logical.clear()
            chunk_start = self.i

        while True:
            if self.i >= self.end:
                raise ShellUnterminated("double quote", start)
            ch = self.text[self.i]
            if ch == '"':
                flush()
                self.i += 1
                if not segs:  # empty string: keep one segment for quoting info
                    segs.append(Seg("double", start + 1, start + 1, ""))
                return segs
            if ch == "\\":
                nxt = self._peek(1)
                if nxt == "\n":
                    self.i += 2
                elif nxt in '"\\$`':
                    logical.append(nxt)
                    self.i += 2
                else:
                    logical.append(ch)
                    self.i += 1
            elif ch == "$":
                flush()
                segs.append(self._dollar())
                chunk_start = self.i
            elif ch == "`":
                flush()
                segs.append(self._backtick())
                chunk_start = self.i
            else:
                logical.append(ch)
                self.i += 1

    def _dollar(self) -> Seg:
        start = self.i
        self.i += 1
        if self._peek() == "(" and self._peek(1) == "(":
            end = self._match_arith(start)
            return Seg("arith", start, end, self.text[start:end])
        if self._peek() == "(":
            inner_start = self.i + 1
            end = self._scan_matching(self.i, "(", ")")
            self.i = end
            return Seg(
                "subst",
                start,
                end,
                self.text[start:end],
                inner=(inner_start, end - 1),
                delim="$(",
            )
        if self._peek() == "{":
            end = self._scan_matching(self.i, "{", "}")
            self.i = end
            text = self.text[start:end]
            m = _NAME_RE.match(self.text, start + 2)
            name = m.group(0) if m else None
            return Seg("var", start, end, text, name=name)
        m = _NAME_RE.match(self.text, self.i)
        if m:
            self.i = m.end()
            return Seg("var", start, self.i, self.text[start : self.i], name=m.group(0))
        if self._peek() in _SPECIAL_PARAMS:
            name = self._peek()
            self.i += 1
            return Seg("var", start, self.i, self.text[start : self.i], name=name)
        return Seg("bare", start, self.i, "$")

    def _match_arith(self, start: int) -> int:
        # $(( ... )): scan to the matching )), counting parens
        depth = 0
        j = self.i
        while j < self.end:
            ch = self.text[j]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    self.i = j + 1
                    return j + 1
            j += 1
        raise ShellUnterminated("arithmetic expansion", start)

    def _scan_matching(self, open_pos: int, open_ch: str, close_ch: str) -> int:
        """Find the offset just past the delimiter matching text[open_pos].

        Quote-aware (a closer inside quotes does not count) and handles
        nesting of the same delimiter pair and of $(...) inside ${...}.
        """
        depth = 0
        j = open_pos
        while j < self.end:
            ch = self.text[j]
            if ch == "\\":
                j += 2
                continue
            if ch == "'":
                k = self.text.find("'", j + 1, self.end)
                if k < 0:
                    raise ShellUnterminated("single quote", j)
                j = k + 1
                continue
            if ch == '"':
                j += 1
                while j < self.end and self.text[j] != '"':
                    if self.text[j] == "\\":
                        j += 1
                    j += 1
                if j >= self.end:
                    raise ShellUnterminated("double quote", j)
                j += 1
                continue
            if ch == open_ch:
                depth += 1
            elif ch == close_ch:
                depth -= 1
                if depth == 0:
                    return j + 1
            j += 1
        raise ShellUnterminated(f"'{open_ch}'", open_pos)

    def _backtick(self) -> Seg:
        start = self.i
        self.i += 1
        j = self.i
        while j < self.end:
            if self.text[j] == "\\":
                j += 2
                continue
            if self.text[j] == "`":
                inner = (start + 1, j)
                self.i = j + 1
                return Seg(
                    "subst",
                    start,
                    self.i,
                    self.text[start : self.i],
                    inner=inner,
                    delim="`",
                )
            j += 1
        raise ShellUnterminated("backquote", start)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _merge_spans(first: SourceSpan, last: SourceSpan) -> SourceSpan:
    return SourceSpan(
        first.start,
        last.end,
        first.start_line,
        first.start_col,
        last.end_line,
        last.end_col,
    )


class _Parser:
    def __init__(
        self,
        text: str,
        start: int,
        end: int,
        spans: SpanBuilder,
        warnings: list[str],
    ):
        self.text = text
        self.start = start
        self.end = end
        self.spans = spans
        self.warnings = warnings
        self.toks = _Lexer(text, start, end).tokens()
        self.i = 0

    # -- token plumbing ---------------------------------------------------

    def _peek(self) -> Tok:
        return self.toks[self.i]

    def _take(self) -> Tok:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def _at_stop(self, stop_ops: frozenset[str], stop_words: frozenset[str]) -> bool:
        tok = self._peek()
        if tok.kind == "eof":
            return True
        if tok.kind == "op" and tok.value in stop_ops:
            return True
        if tok.kind == "word" and tok.value in stop_words and _is_bare(tok):
            return True
        return False

    # -- statement sequences ----------------------------------------------

    def parse_program(self) -> list[UnifiedNode]:
        stmts = self.parse_statements(frozenset(), frozenset())
        tok = self._peek()
        if tok.kind != "eof":
            # stray closer at top level: skip it into the gap and continue
            self.warnings.append(f"unexpected {tok.value!r} in shell payload")
            self._take()
            stmts.extend(self.parse_program())
        return stmts

    def parse_statements(
        self, stop_ops: frozenset[str], stop_words: frozenset[str]
    ) -> list[UnifiedNode]:
        stmts: list[UnifiedNode] = []
        while True:
            while self._peek().kind == "op" and self._peek().value in (";", "&", "\n", ";;"):
                self._take()
            if self._at_stop(stop_ops, stop_words):
                return stmts
            stmts.append(self.parse_and_or(stop_ops, stop_words))

    def parse_and_or(
        self, stop_ops: frozenset[str], stop_words: frozenset[str]
    ) -> UnifiedNode:
        left = self.parse_pipeline(stop_ops, stop_words)
        while self._peek().kind == "op" and self._peek().value in ("&&", "||"):
            op = self._take()
            while self._peek().kind == "op" and self._peek().value == "\n":
                self._take()
            if self._at_stop(stop_ops, stop_words):
                self.warnings.append(f"dangling {op.value!r} in shell payload")
                return left
            right = self.parse_pipeline(stop_ops, stop_words)
            kind = NodeKind.SC_AND if op.value == "&&" else NodeKind.SC_OR
            if left.kind is kind:
                left.add_child(right)
                left.span = _merge_spans(left.span, right.span)
            else:
                node = UnifiedNode(kind, _merge_spans(left.span, right.span))
                node.add_child(left)
                node.add_child(right)
                left = node
        return left

    def parse_pipeline(
        self, stop_ops: frozenset[str], stop_words: frozenset[str]
    ) -> UnifiedNode:
        first = self.parse_command(stop_ops, stop_words)
        if not (self._peek().kind == "op" and self._peek().value in ("|", "|&")):
            return first
        node = UnifiedNode(NodeKind.SC_PIPELINE, first.span)
        node.add_child(first)
        while self._peek().kind == "op" and self._peek().value in ("|", "|&"):
            self._take()
            while self._peek().kind == "op" and self._peek().value == "\n":
                self._take()
            if self._at_stop(stop_ops, stop_words):
                self.warnings.append("dangling '|' in shell payload")
                break
            node.add_child(self.parse_command(stop_ops, stop_words))
        node.span = _merge_spans(node.children[0].span, node.children[-1].span)
        return node

    # -- commands -----------------------------------------------------------

    def parse_command(
        self, stop_ops: frozenset[str], stop_words: frozenset[str]
    ) -> UnifiedNode:
        tok = self._peek()
        if tok.kind == "op" and tok.value == "(":
            return self._parse_subshell()
        if tok.kind == "word" and tok.value in _RESERVED_OPENERS and _is_bare(tok):
            if tok.value == "case":
                return self._parse_case()
            if tok.value == "for":
                return self._parse_for()
            return self._parse_block(tok.value)
        if self._looks_like_function():
            return self._degrade_function()
        return self._parse_simple(stop_ops, stop_words)

    def _parse_subshell(self) -> UnifiedNode:
        open_tok = self._take()
        stmts = self.parse_statements(frozenset({")"}), frozenset())
        close = self._peek()
        if close.kind == "op" and close.value == ")":
            self._take()
            end = close.end
        else:
            self.warnings.append("unterminated subshell")
            end = self.toks[self.i].start if self.i < len(self.toks) else self.end
        node = UnifiedNode(NodeKind.SC_SUBSHELL, self.spans(open_tok.start, end))
        _attach_sequence(node, stmts, self.spans)
        return node

    def _parse_block(self, opener: str) -> UnifiedNode:
        middles, closer = _STRUCT_WORDS[opener]
        open_tok = self._take()
        children: list[UnifiedNode] = []
        end = open_tok.end
        stop_words = frozenset(middles | {closer, "do", "then"})
        while True:
            while self._peek().kind == "op" and self._peek().value in (";", "&", "\n", ";;"):
                self._take()
            tok = self._peek()
            if tok.kind == "eof":
                self.warnings.append(f"unterminated {opener!r} block")
                end = max(end, self.toks[self.i - 1].end if self.i else end)
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value == closer:
                self._take()
                end = tok.end
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value in middles:
                self._take()
                end = tok.end
                continue
            stmts = self.parse_statements(frozenset(), stop_words)
            if not stmts:
                # no progress: unexpected token, skip it defensively
                skipped = self._take()
                if skipped.kind == "eof":
                    break
                self.warnings.append(f"skipping {skipped.value!r} in {opener!r} block")
                continue
            children.extend(stmts)
            if children:
                end = max(end, children[-1].span.end)
        node = UnifiedNode(NodeKind.SC_COMPOUND, self.spans(open_tok.start, end))
        for child in children:
            node.add_child(child)
        return node

    def _parse_for(self) -> UnifiedNode:
        open_tok = self._take()
        header: list[Tok] = []
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                self.warnings.append("unterminated 'for' header")
                break
            if tok.kind == "op" and tok.value in (";", "\n"):
                self._take()
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value == "do":
                break
            header.append(self._take())
        children: list[UnifiedNode] = []
        if header:
            span = self.spans(header[0].start, header[-1].end)
            children.append(UnifiedNode(NodeKind.SC_UNPARSED, span))
        # body: reuse the generic block machinery for do..done
        end = open_tok.end
        stop_words = frozenset({"do", "done"})
        while True:
            while self._peek().kind == "op" and self._peek().value in (";", "&", "\n", ";;"):
                self._take()
            tok = self._peek()
            if tok.kind == "eof":
                self.warnings.append("unterminated 'for' block")
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value == "done":
                self._take()
                end = tok.end
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value == "do":
                self._take()
                end = tok.end
                continue
            stmts = self.parse_statements(frozenset(), stop_words)
            if not stmts:
                skipped = self._take()
                if skipped.kind == "eof":
                    break
                continue
            children.extend(stmts)
            end = max(end, children[-1].span.end)
        node = UnifiedNode(NodeKind.SC_COMPOUND, self.spans(open_tok.start, end))
        for child in children:
            node.add_child(child)
        return node

    def _parse_case(self) -> UnifiedNode:
        open_tok = self._take()
        depth = 1
        inner_start: int | None = None
        inner_end = open_tok.end
        end = open_tok.end
        while True:
            tok = self._take()
            if tok.kind == "eof":
                raise ShellUnterminated("case statement", open_tok.start)
            if tok.kind == "word" and _is_bare(tok):
                if tok.value == "case":
                    depth += 1
                elif tok.value == "esac":
                    depth -= 1
                    if depth == 0:
                        end = tok.end
                        break
            if inner_start is None:
                inner_start = tok.start
            inner_end = tok.end
        node = UnifiedNode(NodeKind.SC_COMPOUND, self.spans(open_tok.start, end))
        if inner_start is not None and inner_end > inner_start:
            node.add_child(UnifiedNode(NodeKind.SC_UNPARSED, self.spans(inner_start, inner_end)))
        return node

    def _looks_like_function(self) -> bool:
        tok = self._peek()
        if tok.kind != "word":
            return False
        nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
        nxt2 = self.toks[self.i + 2] if self.i + 2 < len(self.toks) else None
        return (
            nxt is not None
            and nxt.kind == "op"
            and nxt.value == "("
            and nxt2 is not None
            and nxt2.kind == "op"
            and nxt2.value == ")"
        )

    def _degrade_function(self) -> UnifiedNode:
        """Whole function definitions are out of the subset: one SC-UNPARSED."""
        start_tok = self._take()  # name
        self._take()  # (
        self._take()  # )
        end = self.toks[self.i - 1].end
        depth = 0
        seen_brace = False
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                if seen_brace:
                    self.warnings.append("unterminated function body")
                break
            if tok.kind == "word" and _is_bare(tok) and tok.value == "{":
                depth += 1
                seen_brace = True
            elif tok.kind == "word" and _is_bare(tok) and tok.value == "}":
                depth -= 1
                if depth <= 0:
                    end = self._take().end
                    break
            elif not seen_brace and tok.kind == "op" and tok.value in (";", "\n"):
                break
            end = self._take().end
        return UnifiedNode(NodeKind.SC_UNPARSED, self.spans(start_tok.start, end))

    # -- simple commands ----------------------------------------------------

    def _parse_simple(
        self, stop_ops: frozenset[str], stop_words: frozenset[str]
    ) -> UnifiedNode:
        first_index = self.i
        children: list[UnifiedNode] = []
        seen_word = False
        while True:
            tok = self._peek()
            if tok.kind in ("eof",):
                break
            if tok.kind == "op":
                if tok.value == "(" and children:
                    # array assignment or stray group: outside the subset
                    return self._degrade_statement(first_index)
                break
            if tok.kind == "word":
                if tok.value in stop_words and _is_bare(tok) and not children:
                    break
                self._take()
                if not seen_word and _ASSIGN_RE.match(tok.value) and tok.segments and tok.segments[0].kind == "bare":
                    children.append(self._assignment_node(tok))
                else:
                    seen_word = True
                    children.append(self._word_node(tok))
            elif tok.kind == "redir":
                if tok.value in ("<<", "<<-"):
                    return self._degrade_heredoc(first_index)
                after = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
                if after is not None and after.kind == "op" and after.value == "(":
                    # process substitution: outside the subset
                    return self._degrade_statement(first_index)
                self._take()
                children.append(self._redirection_node(tok))
            else:  # pragma: no cover - defensive
                break
        if not children:
            # no progress possible: consume one token as unparsed
            tok = self._take()
            self.warnings.append(f"unparsed token {tok.value!r}")
            return UnifiedNode(NodeKind.SC_UNPARSED, self.spans(tok.start, tok.end))
        node = UnifiedNode(
            NodeKind.SC_SIMPLE_COMMAND,
            _merge_spans(children[0].span, children[-1].span),
        )
        for child in children:
            node.add_child(child)
        return node

    def _assignment_node(self, tok: Tok) -> UnifiedNode:
        node = UnifiedNode(
            NodeKind.SC_ASSIGNMENT,
            self.spans(tok.start, tok.end),
            literal=self.text[tok.start : tok.end],
        )
        name = tok.value.split("=", 1)[0].rstrip("+")
        node.props["name"] = name
        node.props["text"] = tok.value
        self._attach_word_parts(node, tok)
        return node

    def _word_node(self, tok: Tok) -> UnifiedNode:
        node = UnifiedNode(
            NodeKind.SC_WORD,
            self.spans(tok.start, tok.end),
            literal=self.text[tok.start : tok.end],
        )
        node.props["text"] = tok.value
        node.props["quoting"] = _classify_quoting(tok)
        self._attach_word_parts(node, tok)
        return node

    def _attach_word_parts(self, node: UnifiedNode, tok: Tok) -> None:
        for seg in tok.segments:
            if seg.kind == "var":
                var = UnifiedNode(
                    NodeKind.SC_VARIABLE,
                    self.spans(seg.start, seg.end),
                    literal=self.text[seg.start : seg.end],
                )
                var.props["name"] = seg.name
                node.add_child(var)
            elif seg.kind == "subst":
                node.add_child(self._substitution_node(seg))

    def _substitution_node(self, seg: Seg) -> UnifiedNode:
        node = UnifiedNode(NodeKind.SC_COMMAND_SUBSTITUTION, self.spans(seg.start, seg.end))
        node.props["delim"] = seg.delim
        inner_start, inner_end = seg.inner
        sub = _Parser(self.text, inner_start, inner_end, self.spans, self.warnings)
        try:
            stmts = sub.parse_program()
        except ShellUnterminated as exc:
            self.warnings.append(f"substitution parse degraded: {exc}")
            stmts = [UnifiedNode(NodeKind.SC_UNPARSED, self.spans(inner_start, inner_end))]
        _attach_sequence(node, stmts, self.spans)
        return node

    def _redirection_node(self, tok: Tok) -> UnifiedNode:
        node = UnifiedNode(
            NodeKind.SC_REDIRECTION,
            self.spans(tok.start, tok.end),
            literal=self.text[tok.start : tok.end],
        )
        node.props["op"] = tok.value
        node.props["fd"] = tok.fd
        needs_target = not re.search(r"[&](\d+|-)$", tok.value)
        if needs_target:
            nxt = self._peek()
            if nxt.kind == "word":
                self._take()
                node.add_child(self._word_node(nxt))
                node.span = _merge_spans(node.span, node.children[-1].span)
            else:
                self.warnings.append(f"redirection {tok.value!r} without target")
        return node

    # -- degradation ---------------------------------------------------------

    def _statement_end_index(self, from_index: int) -> int:
        """Token index just past the current statement, paren-aware."""
        depth = 0
        j = from_index
        while j < len(self.toks):
            tok = self.toks[j]
            if tok.kind == "eof":
                return j
            if tok.kind == "op":
                if tok.value == "(":
                    depth += 1
                elif tok.value == ")":
                    if depth == 0:
                        return j
                    depth -= 1
                elif depth == 0 and tok.value in ("&&", "||", ";", ";;", "&", "|", "|&", "\n"):
                    return j
            j += 1
        return j

    def _degrade_statement(self, first_index: int) -> UnifiedNode:
        end_index = self._statement_end_index(first_index)
        start = self.toks[first_index].start
        end = self.toks[end_index - 1].end if end_index > first_index else start
        self.i = end_index
        self.warnings.append("statement outside supported shell subset")
        return UnifiedNode(NodeKind.SC_UNPARSED, self.spans(start, end))

    def _degrade_heredoc(self, first_index: int) -> UnifiedNode:
        """Swallow a heredoc statement (operator line plus body) as SC-UNPARSED."""
        redir = self._take()
        delim_tok = self._peek()
        if delim_tok.kind != "word":
            raise ShellUnterminated("heredoc", redir.start)
        self._take()
        delim = delim_tok.value
        strip_tabs = redir.value == "<<-"
        nl = self.text.find("\n", delim_tok.end, self.end)
        if nl < 0:
            raise ShellUnterminated("heredoc", redir.start)
        pos = nl + 1
        body_end = -1
        while pos <= self.end:
            line_end = self.text.find("\n", pos, self.end)
            if line_end < 0:
                line_end = self.end
            line = self.text[pos:line_end]
            if strip_tabs:
                line = line.lstrip("\t")
            if line.rstrip("\r ") == delim:
                body_end = line_end
                break
            if line_end >= self.end:
                break
            pos = line_end + 1
        if body_end < 0:
            raise ShellUnterminated("heredoc", redir.start)
        start = self.toks[first_index].start
        while self.i < len(self.toks) and self.toks[self.i].kind != "eof" and self.toks[self.i].start < body_end:
            self.i += 1
        self.warnings.append("heredoc statement left unparsed")
        return UnifiedNode(NodeKind.SC_UNPARSED, self.spans(start, body_end))


def _is_bare(tok: Tok) -> bool:
    return len(tok.segments) == 1 and tok.segments[0].kind == "bare"


def _classify_quoting(tok: Tok) -> str:
    kinds = {seg.kind for seg in tok.segments}
    if "double" in kinds:
        return "double"
    if "single" in kinds:
        return "single"
    return "bare"


def _attach_sequence(
    parent: UnifiedNode, stmts: list[UnifiedNode], spans: SpanBuilder
) -> None:
    """Attach a statement list: one child directly, several under SC-SEQ."""
    if len(stmts) == 1:
        parent.add_child(stmts[0])
    elif len(stmts) > 1:
        seq = UnifiedNode(NodeKind.SC_SEQ, _merge_spans(stmts[0].span, stmts[-1].span))
        for stmt in stmts:
            seq.add_child(stmt)
        parent.add_child(seq)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def parse_shell(
    text: str,
    span_builder: SpanBuilder | None = None,
    warnings: list[str] | None = None,
    region: tuple[int, int] | None = None,
) -> UnifiedNode:
    """Parse a shell payload into an SC-SCRIPT tree.

    Never raises on bad input: constructs outside the subset become
    SC-UNPARSED statements, and pathological input (unterminated quote or
    substitution) turns the whole script into a single SC-UNPARSED node
    with a warning appended to ``warnings``.

    ``span_builder`` converts payload offsets to SourceSpans; the default
    builds spans in the payload's own coordinates. ``region`` restricts
    parsing to a slice of ``text`` (offsets still refer to ``text``).
    """
    if warnings is None:
        warnings = []
    if span_builder is None:
        span_builder = SourceMap(text).span
    start, end = region if region is not None else (0, len(text))
    root_span = span_builder(start, end)
    root = UnifiedNode(NodeKind.SC_SCRIPT, root_span)
    root.props["warnings"] = warnings
    if not text[start:end].strip():
        return root
    try:
        parser = _Parser(text, start, end, span_builder, warnings)
        stmts = parser.parse_program()
    except ShellUnterminated as exc:
        warnings.append(f"shell parse degraded to opaque text: {exc}")
        root.add_child(UnifiedNode(NodeKind.SC_UNPARSED, span_builder(start, end)))
        return root
    _attach_sequence(root, stmts, span_builder)
    return root


def word_text(node: UnifiedNode) -> str:
    """Logical (unquoted, unescaped) text of a word-like node."""
    return node.prop("text", node.literal or "")


_VAR_REF_RE = re.compile(r"^\$(?:\{([A-Za-z_][A-Za-z0-9_]*)[^}]*\}|([A-Za-z_][A-Za-z0-9_]*))")


def variable_reference(text: str) -> str | None:
    """Name of the variable when ``text`` is a pure variable reference.

    Accepts ``$V``, ``${V}``, and the same followed only by a ``/``-rooted
    suffix (e.g. ``$V/build`` or ``$V/*``), which is how cleanup commands
    usually address a captured directory.
    """
    m = _VAR_REF_RE.match(text)
    if not m:
        return None
    rest = text[m.end() :]
    if rest and not rest.startswith("/"):
        return None
    return m.group(1) or m.group(2)


def contains_variable(text: str) -> bool:
    """True when the word text still contains an unresolved expansion."""
    return "$" in text or "`" in text
