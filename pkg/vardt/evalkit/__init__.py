"""
Evaluation kit: ground truth, the seeded corpus, metrics and the corpus runner.
"""

from .corpus import CorpusBug, find_bug, seed_corpus, validate_bug
from .groundtruth import GroundTruth, TruthVariable, load_ground_truth, parse_ground_truth
from .metrics import TOP_N, BugMetrics, MetricsReport, build_report, mar, mfr, topn_recall
from .runner import CorpusEvaluator, ablation_direction, comparison_lines, localize_bug, patch_table_lines

__all__ = [
    "TOP_N",
    "BugMetrics",
    "CorpusBug",
    "CorpusEvaluator",
    "GroundTruth",
    "MetricsReport",
    "TruthVariable",
    "ablation_direction",
    "build_report",
    "comparison_lines",
    "find_bug",
    "load_ground_truth",
    "localize_bug",
    "mar",
    "mfr",
    "parse_ground_truth",
    "patch_table_lines",
    "seed_corpus",
    "topn_recall",
    "validate_bug",
]
