"""
Unit Tests for VerificationService

Suite registry and the runner contract.
"""

import pytest

from src.services import ConfigurationError, SuiteConfig, UnknownSuiteError, ValidationError, VerificationService
from src.services.models import ReportFormat, VerificationReport
from src.services.verification_service import SUITES


@pytest.fixture
def runner():
    return VerificationService()


class TestSuiteRegistry:
    """Test suite lookup"""

    def test_registered_suites(self, runner):
        """Test that every suite has a runner and a description"""
        assert [entry.name for entry in runner.suites()] == list(SUITES)
        assert len(SUITES) == 9
        assert all(entry.checks for entry in runner.suites())

    def test_lookup(self, runner):
        """Test lookup by name"""
        assert runner.lookup("cme-pc").name == "cme-pc"

    def test_unknown_suite(self, runner):
        """Test that the error lists the known suites"""
        with pytest.raises(UnknownSuiteError, match="known: appendixB"):
            runner.lookup("appendixC")

    def test_to_dict(self):
        """Test the serialized suite entry"""
        data = SUITES["diagrams"].to_dict()
        assert list(data) == ['name', 'description', 'checks']


class TestRunSuite:
    """Test run_suite"""

    def test_unknown_suite_before_validation(self, runner):
        """Test that an unknown name wins over a bad configuration"""
        with pytest.raises(UnknownSuiteError):
            runner.run_suite(SuiteConfig(suite="nope", trials=0))

    def test_invalid_configuration(self, runner):
        """Test that the configuration is validated"""
        with pytest.raises(ConfigurationError, match="trials"):
            runner.run_suite(SuiteConfig(suite="diagrams", trials=0))

    @pytest.mark.slow
    def test_metadata_recorded(self, runner):
        """Test that the options land in the report metadata"""
        report = runner.run_suite(SuiteConfig(suite="decompositions", seed=5, trials=1))
        assert report.suite == "decompositions"
        assert report.metadata['seed'] == 5
        assert report.metadata['trials'] == 1
        assert report.metadata['epsilon_sign'] == 1
        assert report.elapsed_ms is not None
        assert report.items

    @pytest.mark.slow
    def test_same_seed_same_report(self, runner):
        """Test determinism of the report body"""
        cfg = SuiteConfig(suite="decompositions", seed=9, trials=1)
        assert runner.run_suite(cfg).to_dict() == runner.run_suite(cfg).to_dict()


class TestConfigFromMapping:
    """Test building a SuiteConfig from loose options"""

    def test_suite_is_required(self, runner):
        """Test that a missing suite name is rejected"""
        with pytest.raises(ValidationError, match="Missing required fields: suite"):
            runner.config_from_mapping({'seed': 3})

    def test_none_keeps_defaults(self, runner):
        """Test that unset options fall back to the dataclass defaults"""
        cfg = runner.config_from_mapping({'suite': "diagrams", 'trials': None, 'report_format': "json",
                                          'epsilon_sign': "-1"})
        assert cfg.trials == 100
        assert cfg.report_format is ReportFormat.JSON
        assert cfg.epsilon_sign == -1

    def test_unknown_option(self, runner):
        """Test that a misspelled option is rejected"""
        with pytest.raises(ValidationError, match="unknown options: trails"):
            runner.config_from_mapping({'suite': "diagrams", 'trails': 3})


class TestServiceStats:
    """Test run counters"""

    def test_counts_passed_and_failed_runs(self, runner):
        """Test that each run is counted by outcome"""
        def fixed(ok):
            def run(cfg):
                report = VerificationReport(suite=cfg.suite)
                report.add("fixed-outcome", "control", ok, witness="x")
                return report
            return run

        runner._runners["diagrams"] = fixed(True)
        runner._runners["decompositions"] = fixed(False)
        runner.run_suite(SuiteConfig(suite="diagrams", trials=1))
        runner.run_suite(SuiteConfig(suite="decompositions", trials=1))
        stats = runner.get_stats()
        assert stats['service_name'] == "VerificationService"
        assert stats['operations_processed'] == 2
        assert (stats['suites_passed'], stats['suites_failed']) == (1, 1)
