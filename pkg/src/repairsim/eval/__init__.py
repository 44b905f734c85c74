from .report import EvalReport, WilcoxonEntry, build_report, write_report
from .stats import DensityTable, RankStats, distribution_export, lower_median, normalized_histogram, rank_stats
from .wilcoxon import ALPHA, DegenerateSample, WilcoxonResult, exact_p, normal_p, wilcoxon_signed_rank

__all__ = [
    "ALPHA",
    "DegenerateSample",
    "DensityTable",
    "EvalReport",
    "RankStats",
    "WilcoxonEntry",
    "WilcoxonResult",
    "build_report",
    "distribution_export",
    "exact_p",
    "lower_median",
    "normal_p",
    "normalized_histogram",
    "rank_stats",
    "wilcoxon_signed_rank",
    "write_report",
]
