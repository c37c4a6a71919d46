"""Minimal-diff reprinting: identity, locality, and canonical rendering."""

from slimdock.enrich import parse_and_enrich
from slimdock.model import NodeKind
from slimdock.printer import print_minimal, render_full, unified_diff
from slimdock.rules import synthesize_statement
from slimdock.runner import fix_text
from slimdock.shell import parse_shell, word_text


class TestIdentity:
    def test_zero_modifications_byte_identical(self):
        src = "# hi\nFROM a\n\nRUN echo 'kept  spacing'   \nCMD [\"x\"]\n"
        ast = parse_and_enrich(src)
        assert print_minimal(ast, src) == src

    def test_identity_with_unparsed_regions(self):
        src = "FROM a\nRUN echo 'never closed\n"
        ast = parse_and_enrich(src)
        assert print_minimal(ast, src) == src


class TestDiffShape:
    def _forty_line_file(self):
        lines = ["FROM node:18"]
        for i in range(19):
            lines.append(f"ENV VAR{i}=value{i}")
        lines.append("RUN npm cache clean")  # line 21
        for i in range(18):
            lines.append(f"LABEL key{i}=v{i}")
        lines.append('CMD ["node"]')
        return "\n".join(lines) + "\n"

    def test_npm_force_touches_exactly_one_line(self):
        src = self._forty_line_file()
        report = fix_text(src, "Dockerfile")
        diff = report.diff()
        minus = [l for l in diff.splitlines() if l.startswith("-") and not l.startswith("---")]
        plus = [l for l in diff.splitlines() if l.startswith("+") and not l.startswith("+++")]
        assert minus == ["-RUN npm cache clean"]
        assert plus == ["+RUN npm cache clean --force"]
        assert "@@ -21" in diff and "+21" in diff

    def test_no_change_empty_diff(self):
        assert unified_diff("same\n", "same\n", "f") == ""


class TestContinuationStyle:
    def test_append_follows_continued_style(self):
        src = (
            "FROM debian\n"
            "RUN apt-get update \\\n"
            "    && apt-get install -y --no-install-recommends x \\\n"
            "    && apt-get install -y --no-install-recommends y \\\n"
            "    && echo done\n"
        )
        out = fix_text(src, "f").fixed
        assert "\\\n    && rm -rf /var/lib/apt/lists/*" in out
        # untouched prefix preserved byte-for-byte
        assert out.startswith("FROM debian\nRUN apt-get update \\\n")

    def test_inline_chain_stays_inline(self):
        src = "RUN apt-get install -y --no-install-recommends x && echo ok\n"
        out = fix_text(src, "f").fixed
        assert out == (
            "RUN apt-get install -y --no-install-recommends x && echo ok"
            " && rm -rf /var/lib/apt/lists/*\n"
        )

    def test_trailing_operator_style(self):
        src = (
            "RUN apt-get update && \\\n"
            "    apt-get install -y --no-install-recommends x\n"
        )
        out = fix_text(src, "f").fixed
        assert out == (
            "RUN apt-get update && \\\n"
            "    apt-get install -y --no-install-recommends x && \\\n"
            "    rm -rf /var/lib/apt/lists/*\n"
        )

    def test_backtick_escape_style(self):
        src = (
            "# escape=`\n"
            "FROM x\n"
            "RUN apt-get update `\n"
            "    && apt-get install -y --no-install-recommends a `\n"
            "    && apt-get install -y --no-install-recommends b `\n"
            "    && echo fin\n"
        )
        out = fix_text(src, "f").fixed
        assert "`\n    && rm -rf /var/lib/apt/lists/*" in out


class TestDiffLocality:
    def test_touched_lines_within_run_block(self):
        src = (
            "FROM debian\n"
            "ENV A=1\n"
            "RUN apt-get update \\\n"
            "    && apt-get install -y x\n"
            "ENV B=2\n"
            'CMD ["bash"]\n'
        )
        report = fix_text(src, "f")
        diff = report.diff()
        changed = [
            l[1:]
            for l in diff.splitlines()
            if (l.startswith("-") or l.startswith("+"))
            and not l.startswith(("---", "+++"))
        ]
        for line in changed:
            assert "FROM" not in line and "ENV" not in line and "CMD" not in line


class TestRenderFull:
    def test_simple_command(self):
        stmt = synthesize_statement("rm -rf /var/cache/yum")
        assert render_full(stmt) == "rm -rf /var/cache/yum"

    def test_gemrc_echo_statement(self):
        stmt = synthesize_statement("echo 'gem: --no-document' >> /etc/gemrc")
        assert render_full(stmt) == "echo 'gem: --no-document' >> /etc/gemrc"

    def test_and_chain(self):
        script = parse_shell("a && b")
        (chain,) = script.children
        for node in chain.walk():
            node.props.pop("synth_text", None)
            node.span = None
            node.modified = True
        assert render_full(chain) == "a && b"

    def test_reparse_stability(self):
        text = "echo 'gem: --no-document' >> /etc/gemrc"
        stmt = synthesize_statement(text)
        reparsed = parse_shell(render_full(stmt)).children[0]

        def shape(node):
            return (
                node.kind,
                word_text(node) if node.kind is NodeKind.SC_WORD else node.prop("op"),
                [shape(c) for c in node.children],
            )

        assert shape(stmt) == shape(reparsed)

    def test_unrenderable_modified_node_is_internal_error(self):
        import pytest

        from slimdock.model import RenderError, UnifiedNode

        bogus = UnifiedNode.synthesized(NodeKind.SC_VARIABLE)  # no literal
        with pytest.raises(RenderError):
            render_full(bogus)
