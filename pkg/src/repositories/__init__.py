"""Output persistence for scenario reports."""

from .report import CDF_METRICS, FixedDigitsEncoder, ReportRepository

__all__ = ["CDF_METRICS", "FixedDigitsEncoder", "ReportRepository"]
