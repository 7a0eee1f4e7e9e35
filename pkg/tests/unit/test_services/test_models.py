"""
Unit Tests for Service DTOs
"""

import pytest

from src.services import ConfigurationError, Parity, Status, SuiteConfig, VerificationReport


class TestVerificationReport:
    """Test report aggregation"""

    def test_empty_report_fails(self):
        """Test that a report without items is not a pass"""
        assert VerificationReport(suite="empty").status is Status.FAIL

    def test_witness_kept_only_on_failure(self):
        """Test that passing items drop their witness"""
        report = VerificationReport(suite="s")
        ok = report.add("a", "anchor a", True, witness="unused")
        bad = report.add("b", "anchor b", False, witness="θ1 ≠ 0")
        assert ok.witness is None
        assert bad.witness == "θ1 ≠ 0"
        assert report.failures() == [bad]
        assert not report.passed

    def test_to_dict_is_stable(self):
        """Test key order, sorted metadata and the absence of timing"""
        report = VerificationReport(suite="s", elapsed_ms=12.5)
        report.add("a", "anchor", True, trials=3, cases=2)
        report.metadata.update({'trials': 3, 'seed': 1})
        data = report.to_dict()
        assert list(data) == ['suite', 'status', 'metadata', 'summary', 'items']
        assert list(data['metadata']) == ['seed', 'trials']
        assert list(data['items'][0]['details']) == ['cases', 'trials']
        assert data['summary'] == {'total': 1, 'passed': 1, 'failed': 0}
        assert 'elapsed_ms' not in data

    def test_extend(self):
        """Test merging sub-reports"""
        report = VerificationReport(suite="outer")
        inner = VerificationReport(suite="inner")
        inner.add("x", "anchor", True)
        report.extend(inner)
        assert report.passed
        assert report.items[0].check_id == "x"


class TestSuiteConfig:
    """Test configuration validation"""

    def test_defaults_are_valid(self):
        """Test the default configuration"""
        SuiteConfig(suite="appendixB").validate()

    @pytest.mark.parametrize("kwargs, message", [
        ({'suite': ''}, "suite name"),
        ({'suite': 's', 'trials': 0}, "trials"),
        ({'suite': 's', 'seed': -1}, "seed"),
        ({'suite': 's', 'seed': 2 ** 64}, "seed"),
        ({'suite': 's', 'term_ceiling': 0}, "term ceiling"),
        ({'suite': 's', 'num_generators': 0}, "generator"),
        ({'suite': 's', 'epsilon_sign': 0}, "epsilon sign"),
    ])
    def test_invalid_values(self, kwargs, message):
        """Test that each bad field is reported"""
        with pytest.raises(ConfigurationError, match=message):
            SuiteConfig(**kwargs).validate()


class TestParity:
    """Test the parity enum"""

    def test_bits(self):
        """Test bit round trip and the mixed guard"""
        assert Parity.from_bit(3) is Parity.ODD
        assert Parity.EVEN.bit == 0
        with pytest.raises(ValueError):
            Parity.MIXED.bit
