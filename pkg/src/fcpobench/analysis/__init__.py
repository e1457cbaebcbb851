"""
Statistical analysis of benchmark results.
"""

from .nonparametric import (
    SampleGroup,
    TestReport,
    cliffs_delta,
    cliffs_delta_magnitude,
    describe,
    dunn_holm,
    friedman,
    holm_adjust,
    kruskal_wallis,
    rank_table,
)
from .report import StatsReport, stats_report

__all__ = [
    "SampleGroup",
    "TestReport",
    "cliffs_delta",
    "cliffs_delta_magnitude",
    "describe",
    "dunn_holm",
    "friedman",
    "holm_adjust",
    "kruskal_wallis",
    "rank_table",
    "StatsReport",
    "stats_report",
]
