"""
Command-line front door: request parsing, dispatch and reports
"""

from src.cli_report.models import SCHEMA_VERSION, AnalysisRequest, Command, Report
from src.cli_report.report_all import CheckRow, report_all
from src.cli_report.runner import run

__all__ = [
    "SCHEMA_VERSION",
    "AnalysisRequest",
    "CheckRow",
    "Command",
    "Report",
    "report_all",
    "run",
]
