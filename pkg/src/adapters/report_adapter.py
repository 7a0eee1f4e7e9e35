"""
Report Adapter

Serializes VerificationReports for the outside world. This is the ONLY
module that knows the wire formats; services hand over DTOs.

JSON reports follow REPORT_SCHEMA with a fixed key order and no timing,
so equal (suite, seed, trials) give byte-identical output. Text reports
carry one line per check item.
"""

import json
from typing import Iterable, Union

import jsonschema

from src.services.base_service import ValidationError
from src.services.models import ReportFormat, VerificationReport

# ============================================================================
# SCHEMA
# ============================================================================

_ITEM_SCHEMA = {
    "type": "object",
    "required": ["check_id", "anchor", "status"],
    "properties": {
        "check_id": {"type": "string", "minLength": 1},
        "anchor": {"type": "string", "minLength": 1},
        "status": {"enum": ["pass", "fail"]},
        "witness": {"type": "string"},
        "details": {"type": "object"},
    },
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "VerificationReport",
    "type": "object",
    "required": ["suite", "status", "metadata", "summary", "items"],
    "properties": {
        "suite": {"type": "string"},
        "status": {"enum": ["pass", "fail"]},
        "metadata": {
            "type": "object",
            "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "trials": {"type": "integer", "minimum": 1},
                "epsilon_sign": {"enum": [1, -1]},
                "term_ceiling": {"type": "integer", "minimum": 1},
            },
        },
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {
                "total": {"type": "integer", "minimum": 0},
                "passed": {"type": "integer", "minimum": 0},
                "failed": {"type": "integer", "minimum": 0},
            },
        },
        "items": {"type": "array", "items": _ITEM_SCHEMA},
    },
    "additionalProperties": False,
}


def validate_report(data: dict) -> None:
    """
    Raises:
        ValidationError: if data does not conform to REPORT_SCHEMA
    """
    try:
        jsonschema.validate(instance=data, schema=REPORT_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ValidationError(f"report does not match the schema: {e.message}") from e


# ============================================================================
# EMITTERS
# ============================================================================

def _format(value: Union[ReportFormat, str]) -> ReportFormat:
    try:
        return ReportFormat(value)
    except ValueError:
        raise ValidationError(f"unknown report format '{value}'")


def _text_line(item) -> str:
    line = f"{item.status.value.upper():4} {item.check_id}  [{item.anchor}]"
    if item.witness:
        line += f"  witness: {item.witness}"
    return line


def emit_report(report: VerificationReport, report_format: Union[ReportFormat, str] = ReportFormat.TEXT) -> bytes:
    """
    Raises:
        ValidationError: for an unknown format
    """
    if _format(report_format) is ReportFormat.JSON:
        return (json.dumps(report.to_dict(), ensure_ascii=False, indent=2, default=str) + "\n").encode("utf-8")
    data = report.to_dict()
    summary = data['summary']
    header = f"{report.suite}: {report.status.value.upper()} ({summary['passed']}/{summary['total']} passed"
    if report.metadata:
        header += ", " + ", ".join(f"{k} {v}" for k, v in data['metadata'].items())
    if report.elapsed_ms is not None:
        header += f", {report.elapsed_ms} ms"
    lines = [header + ")"] + [_text_line(item) for item in report.items]
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_suite_list(entries: Iterable) -> bytes:
    """One block per registered suite: name, description and its checks"""
    lines = []
    for entry in entries:
        lines.append(f"{entry.name}: {entry.description}")
        lines.extend(f"    {check}" for check in entry.checks)
    return ("\n".join(lines) + "\n").encode("utf-8")
