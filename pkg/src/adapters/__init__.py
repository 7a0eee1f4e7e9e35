"""
Adapters Package

Wire formats at the edge of the service layer. All serialization of
verification reports is isolated here.

Available adapters:
- report_adapter: JSON and text reports, suite listings, schema check

Usage:
    from src.adapters.report_adapter import emit_report

    sys.stdout.buffer.write(emit_report(report, "json"))
"""

from src.adapters.report_adapter import REPORT_SCHEMA, emit_report, emit_suite_list, validate_report

__all__ = [
    'REPORT_SCHEMA',
    'emit_report',
    'emit_suite_list',
    'validate_report',
]

__version__ = '1.0.0'
