"""
Utility helpers for report rendering.
"""

from .template import REPORT_TEMPLATE, render_report

__all__ = [
    "REPORT_TEMPLATE",
    "render_report",
]
