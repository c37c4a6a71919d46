"""Shell parser: structure, degradation policy, and byte-exact spans."""

import pytest

from slimdock.model import NodeKind, span_text
from slimdock.shell import (
    contains_variable,
    parse_shell,
    variable_reference,
    word_text,
)


def parse(text):
    warnings = []
    root = parse_shell(text, warnings=warnings)
    return root, warnings


def kinds(node):
    return [c.kind for c in node.children]


def reprint(root, src):
    # for an unmodified tree, spans alone must reconstruct the source
    return span_text(src, root.span)


class TestBasicShapes:
    def test_single_command_three_words(self):
        root, _ = parse("npm cache clean")
        (cmd,) = root.children
        assert cmd.kind is NodeKind.SC_SIMPLE_COMMAND
        words = [c for c in cmd.children if c.kind is NodeKind.SC_WORD]
        assert [word_text(w) for w in words] == ["npm", "cache", "clean"]

    def test_and_list(self):
        root, _ = parse("apt-get update && apt-get install -y wget")
        (node,) = root.children
        assert node.kind is NodeKind.SC_AND
        assert kinds(node) == [NodeKind.SC_SIMPLE_COMMAND] * 2

    def test_assignment_with_substitution(self):
        root, _ = parse("ACTUAL_URL=$(curl -Ls -o /dev/null $URL)")
        (cmd,) = root.children
        (assign,) = cmd.children
        assert assign.kind is NodeKind.SC_ASSIGNMENT
        assert assign.prop("name") == "ACTUAL_URL"
        assert assign.children[0].kind is NodeKind.SC_COMMAND_SUBSTITUTION

    def test_compound_contains_nested_statements(self):
        root, _ = parse("if [ -f x ]; then rm x; fi")
        (compound,) = root.children
        assert compound.kind is NodeKind.SC_COMPOUND
        inner = [c.kind for c in compound.children]
        assert inner == [NodeKind.SC_SIMPLE_COMMAND, NodeKind.SC_SIMPLE_COMMAND]

    def test_and_list_is_flat_and_ordered(self):
        root, _ = parse("a && b && c")
        (node,) = root.children
        assert node.kind is NodeKind.SC_AND
        names = [word_text(c.children[0]) for c in node.children]
        assert names == ["a", "b", "c"]

    def test_mixed_and_or_nests_left(self):
        root, _ = parse("a && b || c")
        (node,) = root.children
        assert node.kind is NodeKind.SC_OR
        assert node.children[0].kind is NodeKind.SC_AND

    def test_pipeline(self):
        root, _ = parse("cat /etc/passwd | grep root | wc -l")
        (pipe,) = root.children
        assert pipe.kind is NodeKind.SC_PIPELINE
        assert len(pipe.children) == 3

    def test_sequence_order_matches_text(self):
        root, _ = parse("one; two\nthree & four")
        (seq,) = root.children
        assert seq.kind is NodeKind.SC_SEQ
        names = [word_text(c.children[0]) for c in seq.children]
        assert names == ["one", "two", "three", "four"]

    def test_subshell(self):
        root, _ = parse("(cd /tmp && make) && echo ok")
        (node,) = root.children
        assert node.children[0].kind is NodeKind.SC_SUBSHELL

    def test_redirection_with_target(self):
        root, _ = parse("echo 'gem: --no-document' >> /etc/gemrc")
        (cmd,) = root.children
        redir = cmd.children[-1]
        assert redir.kind is NodeKind.SC_REDIRECTION
        assert redir.prop("op") == ">>"
        assert word_text(redir.children[0]) == "/etc/gemrc"

    def test_fd_redirection_has_no_target_word(self):
        root, _ = parse("make install > /dev/null 2>&1")
        (cmd,) = root.children
        redirs = [c for c in cmd.children if c.kind is NodeKind.SC_REDIRECTION]
        assert len(redirs) == 2
        assert redirs[1].children == []


class TestWords:
    def test_quoting_styles_recorded(self):
        root, _ = parse("echo bare 'single' \"double\"")
        words = root.children[0].children
        assert [w.prop("quoting") for w in words] == ["bare", "bare", "single", "double"]

    def test_logical_text_strips_quotes(self):
        root, _ = parse("rm 'a file' \"b$X\" c\\ d")
        words = root.children[0].children
        assert word_text(words[1]) == "a file"
        assert word_text(words[2]) == "b$X"
        assert word_text(words[3]) == "c d"

    def test_variable_children(self):
        root, _ = parse("cp $SRC ${DST}/x")
        words = root.children[0].children
        assert words[1].children[0].kind is NodeKind.SC_VARIABLE
        assert words[1].children[0].prop("name") == "SRC"
        assert words[2].children[0].prop("name") == "DST"

    def test_backtick_normalized_to_substitution(self):
        root, _ = parse("V=`mktemp -d`")
        assign = root.children[0].children[0]
        sub = assign.children[0]
        assert sub.kind is NodeKind.SC_COMMAND_SUBSTITUTION
        assert sub.prop("delim") == "`"
        assert sub.children[0].kind is NodeKind.SC_SIMPLE_COMMAND

    def test_arithmetic_stays_opaque(self):
        root, _ = parse("echo $((1 + 2))")
        words = root.children[0].children
        assert words[1].children == []  # no substitution child


class TestDegradation:
    def test_unterminated_quote_makes_whole_script_unparsed(self):
        src = "echo ok && echo 'oops"
        root, warnings = parse(src)
        assert kinds(root) == [NodeKind.SC_UNPARSED]
        assert warnings
        assert span_text(src, root.children[0].span) == src

    def test_heredoc_statement_unparsed_parsing_continues(self):
        src = "cat <<EOF > /x\nbody line\nEOF\necho after"
        root, warnings = parse(src)
        (seq,) = root.children
        assert seq.children[0].kind is NodeKind.SC_UNPARSED
        assert seq.children[1].kind is NodeKind.SC_SIMPLE_COMMAND
        assert word_text(seq.children[1].children[0]) == "echo"

    def test_process_substitution_degrades_statement(self):
        root, warnings = parse("diff <(sort a) <(sort b) && echo same")
        (node,) = root.children
        assert node.kind is NodeKind.SC_AND
        assert node.children[0].kind is NodeKind.SC_UNPARSED
        assert node.children[1].kind is NodeKind.SC_SIMPLE_COMMAND

    def test_array_assignment_degrades_statement(self):
        root, _ = parse("ARR=(a b c) && echo fine")
        (node,) = root.children
        assert node.children[0].kind is NodeKind.SC_UNPARSED

    def test_function_definition_degrades(self):
        root, _ = parse("greet() { echo hi; } && greet")
        (node,) = root.children
        assert node.children[0].kind is NodeKind.SC_UNPARSED

    def test_case_body_is_opaque(self):
        root, _ = parse("case $1 in a) echo a;; esac")
        (compound,) = root.children
        assert compound.kind is NodeKind.SC_COMPOUND
        assert [c.kind for c in compound.children] == [NodeKind.SC_UNPARSED]

    def test_for_header_is_opaque_body_parsed(self):
        root, _ = parse("for f in *.tgz; do tar xf $f; done")
        (compound,) = root.children
        assert compound.children[0].kind is NodeKind.SC_UNPARSED
        assert compound.children[1].kind is NodeKind.SC_SIMPLE_COMMAND

    def test_empty_script(self):
        root, warnings = parse("   ")
        assert root.children == []
        assert not warnings


class TestRoundTrip:
    @pytest.mark.parametrize(
        "src",
        [
            "npm cache clean",
            "a && b || c; d | e",
            "echo \"x $V y\" 'lit' >> /log 2>&1",
            "apt-get update \\\n && apt-get install -y wget",
            "if true; then echo a; else echo b; fi",
            "for i in 1 2; do echo $i; done",
            "case $x in a) true;; esac",
            "V=`date` && echo $V",
            "diff <(a) <(b)",
            "cat <<EOF\nbody\nEOF\necho done",
            "cmd --opt='a b' #trailing comment",
        ],
    )
    def test_script_span_covers_source(self, src):
        root, _ = parse(src)
        assert reprint(root, src) == src

    def test_statement_spans_tile_in_order(self):
        src = "one && two ; three"
        root, _ = parse(src)
        spans = [n.span for n in root.walk() if n.kind is NodeKind.SC_SIMPLE_COMMAND]
        starts = [s.start for s in spans]
        assert starts == sorted(starts)
        texts = [span_text(src, s) for s in spans]
        assert texts == ["one", "two", "three"]


class TestHelpers:
    def test_variable_reference_forms(self):
        assert variable_reference("$TMP") == "TMP"
        assert variable_reference("${TMP}") == "TMP"
        assert variable_reference("${TMP:-x}") == "TMP"
        assert variable_reference("$TMP/build") == "TMP"
        assert variable_reference("$TMP/*") == "TMP"
        assert variable_reference("pre$TMP") is None
        assert variable_reference("plain") is None

    def test_contains_variable(self):
        assert contains_variable("$X")
        assert contains_variable("a${X}b")
        assert contains_variable("`date`")
        assert not contains_variable("plain/path")
