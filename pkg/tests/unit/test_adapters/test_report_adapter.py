"""
Unit Tests for the Report Adapter

Tests JSON and text emission and schema validation.
"""

import json

import pytest

from src.adapters.report_adapter import emit_report, emit_suite_list, validate_report
from src.services import ValidationError, VerificationReport
from src.services.verification_service import SUITES

pytestmark = pytest.mark.adapter


@pytest.fixture
def report():
    report = VerificationReport(suite="demo", elapsed_ms=3.5)
    report.add("flip-1", "App. B, flip:1", True, trials=2)
    report.add("flip-2", "App. B, flip:2", False, witness="θ1θ2 ≠ 0", trials=2)
    report.metadata.update({'trials': 2, 'seed': 7})
    return report


class TestJsonReport:
    """Test the JSON wire format"""

    def test_json_matches_schema(self, report):
        """Test that emitted JSON validates"""
        data = json.loads(emit_report(report, "json"))
        validate_report(data)
        assert data['status'] == "fail"
        assert data['summary'] == {'total': 2, 'passed': 1, 'failed': 1}

    def test_json_is_stable(self, report):
        """Test key order and the absence of timing"""
        data = json.loads(emit_report(report, "json"))
        assert list(data) == ['suite', 'status', 'metadata', 'summary', 'items']
        assert list(data['metadata']) == ['seed', 'trials']
        assert "elapsed_ms" not in emit_report(report, "json").decode("utf-8")

    def test_json_keeps_unicode(self, report):
        """Test that witnesses are written as UTF-8, not escapes"""
        assert "θ1θ2".encode("utf-8") in emit_report(report, "json")

    def test_extra_key_rejected(self, report):
        """Test that the schema is closed"""
        data = report.to_dict()
        data['elapsed_ms'] = 1.0
        with pytest.raises(ValidationError, match="does not match the schema"):
            validate_report(data)

    def test_bad_status_rejected(self, report):
        """Test that status is pass or fail"""
        data = report.to_dict()
        data['status'] = "maybe"
        with pytest.raises(ValidationError, match="does not match the schema"):
            validate_report(data)


class TestTextReport:
    """Test the human-readable format"""

    def test_header_and_lines(self, report):
        """Test one header plus one line per item"""
        lines = emit_report(report, "text").decode("utf-8").splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("demo: FAIL (1/2 passed")
        assert lines[0].endswith("3.5 ms)")
        assert lines[1].startswith("PASS flip-1  [App. B, flip:1]")

    def test_witness_only_on_failure(self, report):
        """Test that the failing line carries its witness"""
        lines = emit_report(report, "text").decode("utf-8").splitlines()
        assert "witness" not in lines[1]
        assert lines[2].endswith("witness: θ1θ2 ≠ 0")

    def test_unknown_format(self, report):
        """Test format validation"""
        with pytest.raises(ValidationError, match="unknown report format"):
            emit_report(report, "yaml")


class TestSuiteList:
    """Test the --list output"""

    def test_every_suite_listed(self):
        """Test one header line per suite"""
        text = emit_suite_list(SUITES.values()).decode("utf-8")
        headers = [line for line in text.splitlines() if not line.startswith(" ")]
        assert [h.split(":")[0] for h in headers] == list(SUITES)
