"""CLI surface: exit codes, JSON schema, discovery, and output modes."""

import json
import os

import pytest

from slimdock.cli import main


def write(tmp_path, name, content):
    path = tmp_path / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    return str(path)


SMELLY = "FROM python:3.11\nRUN pip install flask\n"
CLEAN = "FROM python:3.11\nRUN pip install --no-cache-dir flask\n"


class TestLint:
    def test_smell_found_exit_1(self, tmp_path, capsys):
        path = write(tmp_path, "Dockerfile", SMELLY)
        assert main(["lint", path]) == 1
        out = capsys.readouterr().out
        assert "pipUseNoCacheDir" in out
        assert f"{path}:2:" in out

    def test_clean_exit_0(self, tmp_path):
        path = write(tmp_path, "Dockerfile", CLEAN)
        assert main(["lint", path]) == 0

    def test_rules_filter_skips_other_smells(self, tmp_path):
        path = write(tmp_path, "Dockerfile", SMELLY)
        assert main(["lint", "--rules", "apkAddUseNoCache", path]) == 0

    def test_rule_alias_in_filter(self, tmp_path):
        path = write(tmp_path, "Dockerfile", SMELLY)
        assert main(["lint", "--rules", "pipUseCacheDir", path]) == 1

    def test_unknown_rule_is_config_error(self, tmp_path):
        path = write(tmp_path, "Dockerfile", CLEAN)
        assert main(["lint", "--rules", "bogusRule", path]) == 2

    def test_unreadable_path_exit_2(self, tmp_path, capsys):
        assert main(["lint", str(tmp_path / "missing" / "Dockerfile")]) == 2
        assert "error" in capsys.readouterr().err

    def test_wholly_unparseable_exit_2(self, tmp_path):
        path = write(tmp_path, "Dockerfile", "\x01garbage binary-ish\nmore junk\n")
        assert main(["lint", path]) == 2

    def test_json_schema_stable(self, tmp_path, capsys):
        path = write(tmp_path, "Dockerfile", SMELLY)
        code = main(["lint", "--format", "json", path])
        payload = json.loads(capsys.readouterr().out)
        assert code == 1
        (entry,) = payload["files"]
        assert entry["parse_status"] == "ok"
        (diag,) = entry["diagnostics"]
        assert set(diag) >= {"rule", "path", "line", "column", "message", "fixable"}
        assert diag["rule"] == "pipUseNoCacheDir"
        assert diag["line"] == 2
        assert payload["summary"]["exit_code"] == 1

    def test_directory_discovery_globs(self, tmp_path):
        write(tmp_path, "app/Dockerfile", SMELLY)
        write(tmp_path, "svc/api.Dockerfile", SMELLY)
        write(tmp_path, "svc/Dockerfile.dev", SMELLY)
        write(tmp_path, "README.md", "# not a dockerfile\n")
        rc = main(["lint", str(tmp_path)])
        assert rc == 1

    def test_env_var_rule_filter(self, tmp_path, monkeypatch):
        path = write(tmp_path, "Dockerfile", SMELLY)
        monkeypatch.setenv("SLIMDOCK_RULES", "apkAddUseNoCache")
        assert main(["lint", path]) == 0

    def test_exit_code_soundness(self, tmp_path):
        path = write(tmp_path, "Dockerfile", CLEAN)
        first = main(["lint", path])
        second = main(["lint", path])
        assert first == second == 0


class TestFix:
    def test_diff_mode_leaves_file_untouched(self, tmp_path, capsys):
        path = write(tmp_path, "Dockerfile", "FROM node\nRUN npm cache clean\n")
        code = main(["fix", "--diff", path])
        out = capsys.readouterr().out
        assert code == 0
        assert "-RUN npm cache clean" in out
        assert "+RUN npm cache clean --force" in out
        assert open(path).read() == "FROM node\nRUN npm cache clean\n"

    def test_in_place_rewrites(self, tmp_path):
        path = write(tmp_path, "Dockerfile", SMELLY)
        code = main(["fix", "--in-place", path])
        assert code == 0
        assert "--no-cache-dir" in open(path).read()

    def test_output_dir(self, tmp_path):
        path = write(tmp_path, "Dockerfile", SMELLY)
        out_dir = tmp_path / "fixed"
        assert main(["fix", "--output-dir", str(out_dir), path]) == 0
        assert "--no-cache-dir" in (out_dir / "Dockerfile").read_text()

    def test_already_clean_no_changes_exit_0(self, tmp_path, capsys):
        path = write(tmp_path, "Dockerfile", CLEAN)
        code = main(["fix", "--in-place", path])
        assert code == 0
        assert open(path).read() == CLEAN

    def test_not_fixable_semicolon_exit_1(self, tmp_path, capsys):
        src = "FROM d\nRUN apt-get update; apt-get install -y curl\n"
        path = write(tmp_path, "Dockerfile", src)
        code = main(["fix", "--diff", path])
        out = capsys.readouterr().out
        assert code == 1
        assert "not fixable" in out
        assert open(path).read() == src

    def test_cli_level_idempotence(self, tmp_path):
        path = write(tmp_path, "Dockerfile", SMELLY)
        assert main(["fix", "--in-place", path]) == 0
        once = open(path).read()
        assert main(["fix", "--in-place", path]) == 0
        assert open(path).read() == once

    def test_fix_json_summary(self, tmp_path, capsys):
        path = write(tmp_path, "Dockerfile", SMELLY)
        code = main(["fix", "--format", "json", "--in-place", path])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["summary"]["applied"] == 1
        assert payload["summary"]["residual"] == 0
        (entry,) = payload["files"]
        assert entry["repairs"][0]["status"] == "applied"


class TestStats:
    def _corpus(self, tmp_path):
        write(tmp_path, "a/Dockerfile", "FROM p\nRUN pip install x && pip install y\n")
        write(tmp_path, "b/Dockerfile", "FROM p\nRUN pip install z\nRUN apk add git\n")
        # byte-identical duplicate of a/: must be deduplicated
        write(tmp_path, "c/Dockerfile", "FROM p\nRUN pip install x && pip install y\n")
        write(tmp_path, "d/Dockerfile", CLEAN)
        return str(tmp_path)

    def test_counts_and_dedup(self, tmp_path, capsys):
        root = self._corpus(tmp_path)
        code = main(["stats", "--format", "json", root])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        assert payload["files_scanned"] == 4
        assert payload["files_unique"] == 3
        pip = payload["rules"]["pipUseNoCacheDir"]
        assert pip["occurrences"] == 3
        assert pip["files_with_smell"] == 2
        apk = payload["rules"]["apkAddUseNoCache"]
        assert (apk["occurrences"], apk["files_with_smell"]) == (1, 1)
        assert payload["totals"]["occurrences"] == 4
        assert payload["totals"]["files_with_smell"] == 2

    def test_table_layout(self, tmp_path, capsys):
        root = self._corpus(tmp_path)
        assert main(["stats", root]) == 0
        out = capsys.readouterr().out
        assert "# Docker Smell" in out
        assert "# Dockerfile with Smell" in out
        assert "Total" in out
        assert "pipUseNoCacheDir" in out

    def test_empty_directory_all_zeros(self, tmp_path, capsys):
        os.makedirs(tmp_path / "empty")
        assert main(["stats", "--format", "json", str(tmp_path / "empty")]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["totals"]["occurrences"] == 0
        assert payload["files_scanned"] == 0

    def test_missing_root_exit_2(self, tmp_path):
        assert main(["stats", str(tmp_path / "nope")]) == 2


class TestRulesListing:
    def test_lists_all_fourteen(self, capsys):
        assert main(["rules"]) == 0
        out = capsys.readouterr().out
        assert len(out.strip().splitlines()) == 14
        assert "aptGetInstallThenRemoveAptLists" in out


class TestRobustness:
    def test_parallel_jobs_stable_order(self, tmp_path, capsys):
        for i in range(6):
            write(tmp_path, f"svc{i}/Dockerfile", SMELLY)
        assert main(["lint", "--jobs", "4", "--format", "json", str(tmp_path)]) == 1
        payload = json.loads(capsys.readouterr().out)
        paths = [f["path"] for f in payload["files"]]
        assert paths == sorted(paths)
        assert payload["summary"]["diagnostics"] == 6

    def test_invalid_utf8_replaced_with_warning(self, tmp_path, capsys):
        path = tmp_path / "Dockerfile"
        path.write_bytes(b"FROM x\nRUN echo \xff\xfe\n")
        code = main(["lint", "--format", "json", "-v", str(path)])
        payload = json.loads(capsys.readouterr().out)
        assert code == 0
        (entry,) = payload["files"]
        assert entry["parse_status"] == "partial"
        assert any("invalid UTF-8" in w for w in entry["warnings"])
