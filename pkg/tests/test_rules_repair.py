"""Repair transformations, placement decisions, and verify-or-rollback."""

import dataclasses

import pytest

import slimdock.rules as rules_mod
from slimdock.enrich import parse_and_enrich
from slimdock.printer import print_minimal
from slimdock.rules import (
    RuleId,
    detect,
    repair,
    rule_for,
    verify_or_rollback,
)
from slimdock.runner import fix_text


def fix(text, rules=None):
    return fix_text(text, "<test>", rules).fixed


class TestFlagRepairs:
    def test_npm_force(self):
        assert fix("RUN npm cache clean\n") == "RUN npm cache clean --force\n"

    def test_pip_flag_goes_right_after_subcommand(self):
        assert (
            fix("RUN pip install -r reqs.txt flask\n")
            == "RUN pip install --no-cache-dir -r reqs.txt flask\n"
        )

    def test_apk_no_cache(self):
        assert fix("RUN apk add curl git\n") == "RUN apk add --no-cache curl git\n"

    def test_apt_flag_and_cleanup_compose(self):
        assert fix("RUN apt-get install -y wget\n") == (
            "RUN apt-get install --no-install-recommends -y wget"
            " && rm -rf /var/lib/apt/lists/*\n"
        )

    def test_flag_repair_inside_semicolon_sequence(self):
        # flag additions do not touch the chain, so the sequence shape is fine
        out = fix("RUN pip install a; pip install b\n")
        assert out == "RUN pip install --no-cache-dir a; pip install --no-cache-dir b\n"


class TestAppendRepairs:
    def test_single_command_gets_wrapped(self):
        assert fix("RUN yarn install\n") == "RUN yarn install && yarn cache clean\n"

    def test_append_at_end_of_chain(self):
        assert fix("RUN yum install -y x && yum clean all\n") == (
            "RUN yum install -y x && yum clean all && rm -rf /var/cache/yum\n"
        )

    def test_mktemp_append_quotes_variable(self):
        assert fix("RUN T=$(mktemp -d) && make -C $T\n") == (
            'RUN T=$(mktemp -d) && make -C $T && rm -rf "$T"\n'
        )

    def test_npm_install_cleanup(self):
        assert fix("RUN npm install --production\n") == (
            "RUN npm install --production && npm cache clean --force\n"
        )


class TestAdjacentRepairs:
    def test_rm_lands_before_cd(self):
        text = (
            "RUN wget -O gsl.tgz ftp://ftp.gnu.org/gsl-1.16.tar"
            " && tar -zxf gsl.tgz && mkdir gsl"
            " && cd gsl-1.16 && ./configure && make && make install\n"
        )
        out = fix(text)
        assert "tar -zxf gsl.tgz && rm gsl.tgz && mkdir gsl" in out
        assert out.index("rm gsl.tgz") < out.index("cd gsl-1.16")

    def test_dry_run_ordering_oracle(self):
        """Simulate the repaired chain: the archive must still exist and the
        working directory must be unchanged when the rm runs."""
        text = (
            "RUN wget -O gsl.tgz ftp://example/gsl.tar"
            " && tar -zxf gsl.tgz && mkdir gsl && cd gsl-1.16 && make\n"
        )
        out = fix(text)
        payload = out[len("RUN ") : -1]
        files: set[str] = set()
        cwd_changed = False
        for element in payload.split(" && "):
            words = element.split()
            if words[0] == "wget":
                files.add(words[words.index("-O") + 1])
            elif words[0] == "tar":
                archive = words[words.index("-zxf") + 1]
                assert archive in files, "tar reads a file that does not exist"
            elif words[0] == "rm":
                target = words[-1]
                assert not cwd_changed, "rm runs after cd: path no longer valid"
                assert target in files, "rm removes a file that does not exist"
                files.discard(target)
            elif words[0] == "cd":
                cwd_changed = True

    def test_gpg_asc_removed_right_after_verify(self):
        out = fix("RUN gpg --verify app.tar.asc && tar -xf app.tar && rm app.tar\n")
        assert (
            out
            == "RUN gpg --verify app.tar.asc && rm app.tar.asc && tar -xf app.tar && rm app.tar\n"
        )


class TestBeforeRepairs:
    def test_gemrc_statement_inserted_before_update(self):
        # the gemrc write goes before the update; the cache rm is a trailing
        # cleanup and lands at the end of the chain
        out = fix("RUN gem update --system && gem install rails\n")
        assert out == (
            "RUN echo 'gem: --no-document' >> /etc/gemrc"
            " && gem update --system && gem install rails && rm -rf /root/.gem\n"
        )
        assert out.index("echo 'gem: --no-document'") < out.index("gem update")


class TestNotFixable:
    def test_semicolon_chain_blocks_append(self):
        text = "RUN apt-get update; apt-get install -y curl\n"
        report = fix_text(text, "<t>")
        statuses = {o.diagnostic.rule: o.status for o in report.repairs}
        assert statuses[RuleId.aptGetInstallUseNoRec] == "applied"
        assert statuses[RuleId.aptGetInstallThenRemoveAptLists] == "not-fixable"
        assert [d.rule for d in report.residual] == [
            RuleId.aptGetInstallThenRemoveAptLists
        ]

    def test_or_chain_blocks_append_and_preserves_file(self):
        text = "RUN yum install -y x || echo failed\n"
        report = fix_text(text, "<t>")
        assert report.repairs[0].status == "not-fixable"
        assert report.fixed == text

    def test_exec_array_not_fixable(self):
        text = 'RUN ["yarn", "install"]\n'
        report = fix_text(text, "<t>")
        assert report.repairs[0].status == "not-fixable"
        assert report.fixed == text

    def test_exec_shell_form_is_fixable(self):
        out = fix('RUN ["sh", "-c", "yarn install"]\n')
        assert out == 'RUN ["sh", "-c", "yarn install && yarn cache clean"]\n'

    def test_exec_array_flag_insert_keeps_json_form(self):
        out = fix('RUN ["pip", "install", "flask"]\n')
        assert out == 'RUN ["pip", "install", "--no-cache-dir", "flask"]\n'
        import json

        assert json.loads(out[4:]) == ["pip", "install", "--no-cache-dir", "flask"]


class TestVerifyOrRollback:
    def test_successful_verify_stands(self):
        ast = parse_and_enrich("RUN npm cache clean\n")
        (diag,) = detect(ast)
        outcome = verify_or_rollback(ast, diag, repair(ast, diag))
        assert outcome.status == "applied"
        assert print_minimal(ast, "RUN npm cache clean\n") == (
            "RUN npm cache clean --force\n"
        )

    def test_broken_repair_rolls_back_byte_identical(self, monkeypatch):
        src = "RUN npm cache clean\n"
        ast = parse_and_enrich(src)
        before = print_minimal(ast, src)
        (diag,) = detect(ast)
        broken = dataclasses.replace(
            rule_for(RuleId.npmCacheCleanUseForce), flag_text="--loglevel"
        )
        monkeypatch.setitem(rules_mod._RULE_BY_ID, RuleId.npmCacheCleanUseForce, broken)
        outcome = verify_or_rollback(ast, diag, repair(ast, diag))
        assert outcome.status == "rolled-back"
        assert outcome.reason == "still-detected"
        assert print_minimal(ast, src) == before == src

    def test_two_diagnostics_one_run_sequential(self):
        src = "RUN apt-get update && apt-get install -y wget\n"
        ast = parse_and_enrich(src)
        diags = detect(ast)
        assert len(diags) == 2
        for diag in diags:
            outcome = verify_or_rollback(ast, diag, repair(ast, diag))
            assert outcome.status == "applied"
        assert detect(ast) == []


class TestInvariants:
    @pytest.mark.parametrize(
        "text",
        [
            "RUN pip install flask\n",
            "RUN apt-get update && apt-get install -y wget\n",
            "RUN gem update --system\n",
            "RUN T=$(mktemp -d) && make -C $T\n",
            "RUN tar -xzf a.tgz && cd x && make\n",
        ],
    )
    def test_fix_eliminates_smell_and_is_idempotent(self, text):
        once = fix_text(text, "<t>")
        assert once.residual == []
        twice = fix_text(once.fixed, "<t>")
        assert twice.fixed == once.fixed
        assert all(not o.edits or o.status != "applied" for o in twice.repairs) or (
            twice.repairs == []
        )

    def test_non_interference_total_count_non_increasing(self):
        text = "RUN apt-get install -y x && pip install y && yarn install\n"
        report = fix_text(text, "<t>")
        assert len(report.residual) <= len(report.diagnostics)
        assert report.residual == []

    def test_repair_on_clean_tree_yields_nothing(self):
        text = "RUN apk add --no-cache curl\n"
        report = fix_text(text, "<t>")
        assert report.repairs == []
        assert report.fixed == text
