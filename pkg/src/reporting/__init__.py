"""Artifact emission, figure presets and verification suites."""

from .emit import format_value, render_table, write_json, write_table
from .figures import figure_table
from .verify import CheckResult, VerificationRunner, format_results

__all__ = [
    "format_value",
    "render_table",
    "write_json",
    "write_table",
    "figure_table",
    "CheckResult",
    "VerificationRunner",
    "format_results",
]
