"""Rule semantics: each smell's firing conditions and scope decisions."""

import pytest

from slimdock.enrich import parse_and_enrich
from slimdock.rules import RuleId, detect, parse_rule_name


def rules_found(text, only=None):
    ast = parse_and_enrich(text)
    return [d.rule for d in detect(ast, only)]


class TestPip:
    def test_missing_flag_fires(self):
        assert rules_found("RUN pip install flask") == [RuleId.pipUseNoCacheDir]

    def test_flag_present_clean(self):
        assert rules_found("RUN pip install --no-cache-dir flask") == []

    def test_pip_without_install_clean(self):
        assert rules_found("RUN pip freeze") == []


class TestNpmForce:
    def test_clean_without_force(self):
        assert RuleId.npmCacheCleanUseForce in rules_found("RUN npm cache clean")

    def test_short_flag_counts(self):
        assert rules_found("RUN npm cache clean -f") == []


class TestMkdirUsrSrc:
    def test_unremoved_fires(self):
        found = rules_found("RUN mkdir -p /usr/src/app && make -C /usr/src/app")
        assert found == [RuleId.mkdirUsrSrcThenRemove]

    def test_later_recursive_rm_cleans(self):
        assert (
            rules_found("RUN mkdir /usr/src/app && make && rm -rf /usr/src/app") == []
        )

    def test_non_recursive_rm_does_not_count(self):
        found = rules_found("RUN mkdir /usr/src/app && rm -f /usr/src/app")
        assert found == [RuleId.mkdirUsrSrcThenRemove]

    def test_outside_usr_src_ignored(self):
        assert rules_found("RUN mkdir -p /opt/app && make") == []

    def test_variable_path_suppressed(self):
        assert rules_found("RUN mkdir -p /usr/src/$APP && make") == []


class TestMktemp:
    def test_captured_dir_never_removed(self):
        found = rules_found("RUN T=$(mktemp -d) && make -C $T")
        assert found == [RuleId.rmRecursiveAfterMktempD]

    def test_quoted_variable_rm_cleans(self):
        assert rules_found('RUN T=$(mktemp -d) && cd $T && rm -rf "$T"') == []

    def test_braced_variable_rm_cleans(self):
        assert rules_found("RUN T=$(mktemp -d) && rm -rf ${T}") == []

    def test_uncaptured_result_skipped(self):
        assert rules_found("RUN mktemp -d") == []

    def test_plain_mktemp_not_a_dir(self):
        assert rules_found("RUN F=$(mktemp) && echo $F") == []


class TestTar:
    def test_extracted_archive_kept(self):
        found = rules_found("RUN tar -xzf app.tgz -C /opt")
        assert found == [RuleId.tarSomethingRmTheSomething]

    def test_exact_rm_cleans(self):
        assert rules_found("RUN tar -xzf app.tgz && rm app.tgz") == []

    def test_glob_rm_covers(self):
        # the false-positive shape: rm -rf /tmp/firefox.* removes the archive
        text = (
            "RUN tar -xvjf /tmp/firefox.tar.bz2 -C /opt && rm -rf /tmp/firefox.*"
        )
        assert rules_found(text) == []

    def test_creation_mode_ignored(self):
        assert rules_found("RUN tar -czf backup.tgz /etc") == []

    def test_stdin_archive_ignored(self):
        assert rules_found("RUN curl -L https://x | tar -xz -C /opt") == []
        assert rules_found("RUN tar -xzf - -C /opt") == []

    def test_variable_archive_suppressed(self):
        assert rules_found("RUN tar -xzf $ARCHIVE") == []

    def test_rm_before_extraction_does_not_count(self):
        found = rules_found("RUN rm -f app.tgz && tar -xzf app.tgz")
        assert found == [RuleId.tarSomethingRmTheSomething]


class TestApkAptFlags:
    def test_apk_add_without_no_cache(self):
        assert rules_found("RUN apk add curl") == [RuleId.apkAddUseNoCache]

    def test_apk_add_with_no_cache(self):
        assert rules_found("RUN apk add --no-cache curl") == []

    def test_apt_get_install_fires_both(self):
        found = rules_found("RUN apt-get update && apt-get install -y wget")
        assert found == [
            RuleId.aptGetInstallUseNoRec,
            RuleId.aptGetInstallThenRemoveAptLists,
        ]

    def test_apt_variant_counts(self):
        found = rules_found("RUN apt install -y jq")
        assert set(found) == {
            RuleId.aptGetInstallUseNoRec,
            RuleId.aptGetInstallThenRemoveAptLists,
        }

    def test_update_alone_clean(self):
        assert rules_found("RUN apt-get update") == []


class TestAptListsScope:
    def test_same_run_cleanup_ok(self):
        text = (
            "RUN apt-get install -y --no-install-recommends x "
            "&& rm -rf /var/lib/apt/lists/*"
        )
        assert rules_found(text) == []

    def test_cleanup_in_later_run_does_not_help(self):
        text = (
            "FROM d\n"
            "RUN apt-get install -y --no-install-recommends x\n"
            "RUN rm -rf /var/lib/apt/lists/*\n"
        )
        assert rules_found(text) == [RuleId.aptGetInstallThenRemoveAptLists]

    def test_covering_parent_rm(self):
        text = (
            "RUN apt-get install -y --no-install-recommends x && rm -rf /var/lib/apt/lists"
        )
        assert rules_found(text) == []


class TestGpg:
    def test_verify_without_rm(self):
        found = rules_found("RUN gpg --verify app.tar.asc && tar -xf app.tar && rm app.tar")
        assert found == [RuleId.gpgVerifyAscRmAsc]

    def test_verify_then_rm_clean(self):
        assert (
            rules_found("RUN gpg --verify app.tar.asc && rm app.tar.asc") == []
        )

    def test_no_asc_positional_skipped(self):
        assert rules_found("RUN gpg --verify release.sig artifact.bin") == []


class TestNpmInstall:
    def test_missing_cleanup(self):
        assert rules_found("RUN npm install") == [RuleId.npmCacheCleanAfterInstall]

    def test_alias_i(self):
        assert rules_found("RUN npm i") == [RuleId.npmCacheCleanAfterInstall]

    def test_later_clean_with_force_ok(self):
        assert rules_found("RUN npm install && npm cache clean --force") == []

    def test_later_clean_without_force_counts_as_cleanup(self):
        # the forceless clean is flagged itself, not the install
        found = rules_found("RUN npm install && npm cache clean")
        assert found == [RuleId.npmCacheCleanUseForce]

    def test_ci_not_covered(self):
        assert rules_found("RUN npm ci") == []


class TestGem:
    def test_bare_update_fires_both(self):
        found = rules_found("RUN gem update --system")
        assert set(found) == {
            RuleId.gemUpdateSystemRmRootGem,
            RuleId.gemUpdateNoDocument,
        }

    def test_gemrc_write_elsewhere_in_file_clears_nodoc(self):
        text = (
            "FROM r\n"
            "RUN echo 'gem: --no-document' >> /etc/gemrc\n"
            "RUN gem update --system && rm -rf /root/.gem\n"
        )
        assert rules_found(text) == []

    def test_update_without_system_clean(self):
        assert rules_found("RUN gem update rails") == []


class TestYumYarn:
    def test_yum_install(self):
        assert rules_found("RUN yum install -y httpd") == [
            RuleId.yumInstallRmVarCacheYum
        ]

    def test_dnf_alias_and_dnf_cache_path(self):
        assert rules_found("RUN dnf install -y gcc && rm -rf /var/cache/dnf") == []

    def test_yum_rm_cleanup(self):
        assert rules_found("RUN yum install -y x && rm -rf /var/cache/yum") == []

    def test_yarn_install(self):
        assert rules_found("RUN yarn install") == [RuleId.yarnCacheCleanAfterInstall]

    def test_bare_yarn(self):
        assert rules_found("RUN yarn") == [RuleId.yarnCacheCleanAfterInstall]

    def test_yarn_cache_clean_after(self):
        assert rules_found("RUN yarn install && yarn cache clean") == []


class TestConservatism:
    def test_no_rule_fires_in_unparsed(self):
        assert rules_found("RUN pip install flask 'unterminated") == []

    def test_variable_command_skipped(self):
        assert rules_found("RUN $PKG install -y wget") == []

    def test_document_order_output(self):
        text = (
            "FROM d\n"
            "RUN yarn install\n"
            "RUN pip install x\n"
        )
        found = rules_found(text)
        assert found == [RuleId.yarnCacheCleanAfterInstall, RuleId.pipUseNoCacheDir]


class TestDiagnosticShape:
    def test_span_points_inside_a_run_instruction(self):
        from slimdock.enrich import parse_and_enrich as parse

        text = (
            "FROM d\n"
            "RUN apt-get install -y x\n"
            "RUN pip install y && tar -xzf a.tgz\n"
        )
        ast = parse(text)
        for d in detect(ast):
            assert d.run.kind.value == "DOCKER-RUN"
            assert d.run.span.contains(d.span)

    def test_message_and_fixable_populated(self):
        from slimdock.enrich import parse_and_enrich as parse

        ast = parse("RUN pip install flask")
        (d,) = detect(ast)
        assert d.message == "Clean cache after pip install."
        assert d.fixable is True


class TestRuleNames:
    def test_canonical_names_parse(self):
        assert parse_rule_name("pipUseNoCacheDir") is RuleId.pipUseNoCacheDir

    def test_aliases_accepted(self):
        assert (
            parse_rule_name("aptGetInstallRmAptLists")
            is RuleId.aptGetInstallThenRemoveAptLists
        )
        assert (
            parse_rule_name("rmRecurisveAfterMktempD")
            is RuleId.rmRecursiveAfterMktempD
        )

    def test_unknown_rejected(self):
        with pytest.raises(ValueError):
            parse_rule_name("noSuchRule")

    def test_rules_filter(self):
        text = "RUN apk add curl && pip install x"
        assert rules_found(text, [RuleId.apkAddUseNoCache]) == [RuleId.apkAddUseNoCache]
