#!/usr/bin/env python3
"""
Verification CLI

    verify <suite> [--seed N] [--trials N] [--report json|text] [--term-ceiling N]
    verify --list

Flags fall back to VERIFY_SEED, VERIFY_TRIALS, VERIFY_TERM_CEILING and
VERIFY_LOG_LEVEL (a .env file is honoured). The report goes to stdout,
logs and diagnostics to stderr.

Exit codes: 0 pass, 1 fail, 2 unknown suite, 3 term ceiling exceeded,
4 invalid configuration.
"""

import logging
import sys
from typing import Optional, Sequence

import click
from dotenv import load_dotenv

from src.adapters.report_adapter import emit_report, emit_suite_list
from src.services.base_service import (
    ConfigurationError,
    ServiceError,
    TermCeilingError,
    UnknownSuiteError,
    ValidationError,
)
from src.services.verification_service import VerificationService

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNKNOWN_SUITE = 2
EXIT_TERM_CEILING = 3
EXIT_CONFIG = 4

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _write(data: bytes) -> None:
    click.echo(data.decode("utf-8"), nl=False)


@click.command()
@click.argument('suite', required=False)
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=1, envvar='VERIFY_SEED',
              show_default=True, help='Seed of every randomized check')
@click.option('--trials', type=click.IntRange(min=1), default=100, envvar='VERIFY_TRIALS',
              show_default=True, help='Random samples per randomized check')
@click.option('--report', 'report_format', type=click.Choice(['text', 'json']), default='text',
              show_default=True, help='Report format on stdout')
@click.option('--term-ceiling', type=click.IntRange(min=1), default=10 ** 6, envvar='VERIFY_TERM_CEILING',
              show_default=True, help='Largest expression size before aborting')
@click.option('--epsilon-sign', type=click.Choice(['+1', '1', '-1']), default='+1',
              show_default=True, help='Orientation ε^{0123}')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              default='WARNING', envvar='VERIFY_LOG_LEVEL', show_default=True)
@click.option('--list', 'list_suites', is_flag=True, help='List registered suites and exit')
def verify(suite: Optional[str], seed: int, trials: int, report_format: str, term_ceiling: int,
           epsilon_sign: str, log_level: str, list_suites: bool) -> int:
    """Run one verification suite and print its report."""
    configure_logging(log_level)
    service = VerificationService()
    if list_suites:
        _write(emit_suite_list(service.suites()))
        return EXIT_PASS
    if not suite:
        raise click.UsageError("a suite name is required (see --list)")

    try:
        cfg = service.config_from_mapping({
            'suite': suite,
            'seed': seed,
            'trials': trials,
            'report_format': report_format,
            'term_ceiling': term_ceiling,
            'epsilon_sign': epsilon_sign,
        })
        report = service.run_suite(cfg)
    except UnknownSuiteError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_UNKNOWN_SUITE
    except TermCeilingError as e:
        click.echo(f"error: {e}", err=True)
        click.echo(f"  suite {suite}, seed {seed}; raise --term-ceiling to continue", err=True)
        return EXIT_TERM_CEILING
    except (ConfigurationError, ValidationError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_CONFIG
    except ServiceError as e:
        logger.error(f"suite {suite} aborted: {e}")
        click.echo(f"error: {e}", err=True)
        return EXIT_FAIL

    logger.info("run finished", extra=service.get_stats())
    _write(emit_report(report, cfg.report_format))
    return EXIT_PASS if report.passed else EXIT_FAIL


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run, and return the exit code; usage errors map to 4"""
    load_dotenv()
    try:
        code = verify.main(args=list(argv) if argv is not None else None, prog_name='verify',
                           standalone_mode=False)
    except click.UsageError as e:
        click.echo(f"error: {e.format_message()}", err=True)
        return EXIT_CONFIG
    return code if isinstance(code, int) else EXIT_PASS


if __name__ == '__main__':
    sys.exit(run())
