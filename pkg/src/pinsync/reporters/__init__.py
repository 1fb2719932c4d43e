"""Output reporters for simulation traces and analysis reports.

This module provides CSV reporters for the machine-readable run artifacts
and a Markdown reporter for the pinning selection table.
"""

from pinsync.reporters.base import BaseReporter
from pinsync.reporters.csv import (
    BoundsReporter,
    ConditionReporter,
    CsvReporter,
    EventsReporter,
    KeyValueReporter,
    SelectionReporter,
    TraceReporter,
    assumption_summary,
    bound_summary,
    format_value,
    run_summary,
)
from pinsync.reporters.markdown import MarkdownReporter

__all__ = [
    "BaseReporter",
    "BoundsReporter",
    "ConditionReporter",
    "CsvReporter",
    "EventsReporter",
    "KeyValueReporter",
    "MarkdownReporter",
    "SelectionReporter",
    "TraceReporter",
    "assumption_summary",
    "bound_summary",
    "format_value",
    "run_summary",
]
