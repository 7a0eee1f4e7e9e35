"""
Unit Tests for the verify CLI

Exit codes, the suite list and environment fallbacks.
"""

import json

import pytest

from src.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, EXIT_UNKNOWN_SUITE, run
from src.services.verification_service import SUITES


class TestCliExitCodes:
    """Test the documented exit codes"""

    def test_list(self, capsys):
        """Test that --list prints every suite and exits 0"""
        assert run(["--list"]) == EXIT_PASS
        out = capsys.readouterr().out
        for name in SUITES:
            assert f"{name}:" in out

    def test_unknown_suite(self, capsys):
        """Test exit code 2 for an unregistered suite"""
        assert run(["nope"]) == EXIT_UNKNOWN_SUITE
        captured = capsys.readouterr()
        assert "unknown suite 'nope'" in captured.err
        assert captured.out == ""

    def test_missing_suite(self, capsys):
        """Test that a suite name is required"""
        assert run([]) == EXIT_CONFIG
        assert "suite name is required" in capsys.readouterr().err

    @pytest.mark.parametrize("argv", [
        ["appendixB", "--trials", "0"],
        ["appendixB", "--seed", "-1"],
        ["appendixB", "--report", "yaml"],
        ["appendixB", "--term-ceiling", "0"],
    ])
    def test_invalid_options(self, argv):
        """Test exit code 4 for invalid configuration"""
        assert run(argv) == EXIT_CONFIG

    def test_env_fallback_is_validated(self, monkeypatch):
        """Test that VERIFY_TRIALS goes through the same validation"""
        monkeypatch.setenv("VERIFY_TRIALS", "0")
        assert run(["appendixB"]) == EXIT_CONFIG


@pytest.mark.slow
@pytest.mark.integration
class TestCliSuiteRun:
    """Test a full suite run through the CLI"""

    def test_json_report_is_deterministic(self, capsys):
        """Test byte-identical output for equal seed and trials"""
        argv = ["decompositions", "--seed", "3", "--trials", "1", "--report", "json"]
        first_code = run(argv)
        first = capsys.readouterr().out
        second_code = run(argv)
        second = capsys.readouterr().out
        assert first_code == second_code
        assert first_code in (EXIT_PASS, EXIT_FAIL)
        assert first == second
        data = json.loads(first)
        assert data['metadata']['seed'] == 3
        assert data['metadata']['trials'] == 1

    def test_seed_from_environment(self, capsys, monkeypatch):
        """Test that VERIFY_SEED is recorded in the report"""
        monkeypatch.setenv("VERIFY_SEED", "11")
        run(["decompositions", "--trials", "1", "--report", "json"])
        assert json.loads(capsys.readouterr().out)['metadata']['seed'] == 11
