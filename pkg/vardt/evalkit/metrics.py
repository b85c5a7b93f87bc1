#!/usr/bin/env python3
"""
Localization metrics: Top-N recall, mean first rank and mean average rank.

A bug whose ranked list holds no fault-relevant variable is excluded from
MFR and MAR but still counts as a miss for Top-N recall.
"""

import json
import logging
from dataclasses import dataclass, field
from statistics import mean
from typing import Dict, List, Mapping, Optional, Sequence

from ..ranker import RankedVariable
from .groundtruth import GroundTruth

logger = logging.getLogger(__name__)

TOP_N = (1, 3, 5, 10)


def truth_ranks(ranking: Sequence[RankedVariable], truth: GroundTruth) -> List[float]:
    """Best rank of each truth variable found in the list."""
    ranks = []
    for variable in truth.fault_relevant:
        hits = [r.rank for r in ranking if variable.matches(r.variable, r.lines)]
        if hits:
            ranks.append(min(hits))
    return ranks


def first_rank(ranking: Sequence[RankedVariable], truth: GroundTruth) -> Optional[float]:
    ranks = truth_ranks(ranking, truth)
    return min(ranks) if ranks else None


def average_rank(ranking: Sequence[RankedVariable], truth: GroundTruth) -> Optional[float]:
    ranks = truth_ranks(ranking, truth)
    return mean(ranks) if ranks else None


def topn_recall(rankings: Mapping[str, Sequence[RankedVariable]], truths: Mapping[str, GroundTruth],
                n: int) -> float:
    if not truths:
        return 0.0
    hits = 0
    for bug_id, truth in truths.items():
        best = first_rank(rankings.get(bug_id, []), truth)
        if best is not None and best <= n:
            hits += 1
    return hits / len(truths)


def mfr(rankings: Mapping[str, Sequence[RankedVariable]], truths: Mapping[str, GroundTruth]) -> Optional[float]:
    firsts = [first_rank(rankings.get(b, []), t) for b, t in truths.items()]
    firsts = [f for f in firsts if f is not None]
    return mean(firsts) if firsts else None


def mar(rankings: Mapping[str, Sequence[RankedVariable]], truths: Mapping[str, GroundTruth]) -> Optional[float]:
    averages = [average_rank(rankings.get(b, []), t) for b, t in truths.items()]
    averages = [a for a in averages if a is not None]
    return mean(averages) if averages else None


@dataclass
class BugMetrics:
    bug_id: str
    category: str = ""
    first_rank: Optional[float] = None
    average_rank: Optional[float] = None
    success: bool = True
    error: Optional[str] = None
    reduction_ratio: Optional[float] = None
    tree_build_seconds: float = 0.0


@dataclass
class MetricsReport:
    name: str = "VarDT"
    bugs: List[BugMetrics] = field(default_factory=list)
    top_n: Dict[int, float] = field(default_factory=dict)
    top_n_counts: Dict[int, int] = field(default_factory=dict)
    mfr: Optional[float] = None
    mar: Optional[float] = None
    excluded: List[str] = field(default_factory=list)
    per_category: Dict[str, Dict[int, int]] = field(default_factory=dict)
    mean_reduction_ratio: Optional[float] = None
    mean_tree_build_seconds: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "top_n": {str(n): v for n, v in self.top_n.items()},
            "top_n_counts": {str(n): v for n, v in self.top_n_counts.items()},
            "mfr": self.mfr,
            "mar": self.mar,
            "excluded": list(self.excluded),
            "per_category": {c: {str(n): v for n, v in counts.items()} for c, counts in self.per_category.items()},
            "mean_reduction_ratio": self.mean_reduction_ratio,
            "mean_tree_build_seconds": self.mean_tree_build_seconds,
            "bugs": [vars(b) for b in self.bugs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_lines(self) -> List[str]:
        def fmt(value: Optional[float]) -> str:
            return "undefined" if value is None else f"{value:.2f}"

        total = len(self.bugs)
        lines = [f"== {self.name} ({total} bug(s)) =="]
        for n in sorted(self.top_n):
            lines.append(f"Top-{n}: {self.top_n_counts[n]}/{total} ({self.top_n[n] * 100:.1f}%)")
        lines.append(f"MFR: {fmt(self.mfr)}")
        lines.append(f"MAR: {fmt(self.mar)}")
        lines.append(f"Slicing reduction: {fmt(None if self.mean_reduction_ratio is None else self.mean_reduction_ratio * 100)}%")
        lines.append(f"Mean tree-build time: {fmt(None if self.mean_tree_build_seconds is None else self.mean_tree_build_seconds * 1000)} ms")
        if self.excluded:
            lines.append(f"Excluded from MFR/MAR: {', '.join(self.excluded)}")
        for category in sorted(self.per_category):
            counts = self.per_category[category]
            lines.append(f"  {category}: " + " ".join(f"Top-{n}={counts[n]}" for n in sorted(counts)))
        for bug in self.bugs:
            status = "" if bug.success else f" FAILED ({bug.error})"
            lines.append(f"  {bug.bug_id}: first={fmt(bug.first_rank)} avg={fmt(bug.average_rank)}{status}")
        return lines


def build_report(rankings: Mapping[str, Sequence[RankedVariable]], truths: Mapping[str, GroundTruth],
                 bugs: Sequence[BugMetrics], name: str = "VarDT") -> MetricsReport:
    """Fill first/average ranks into ``bugs`` and aggregate the corpus numbers."""
    report = MetricsReport(name=name, bugs=list(bugs))
    for bug in report.bugs:
        ranking = rankings.get(bug.bug_id, [])
        truth = truths[bug.bug_id]
        bug.first_rank = first_rank(ranking, truth)
        bug.average_rank = average_rank(ranking, truth)
        if bug.first_rank is None:
            report.excluded.append(bug.bug_id)

    for n in TOP_N:
        report.top_n[n] = topn_recall(rankings, truths, n)
        report.top_n_counts[n] = sum(1 for b in report.bugs if b.first_rank is not None and b.first_rank <= n)
        for bug in report.bugs:
            counts = report.per_category.setdefault(bug.category or "uncategorized", {m: 0 for m in TOP_N})
            if bug.first_rank is not None and bug.first_rank <= n:
                counts[n] += 1

    report.mfr = mfr(rankings, truths)
    report.mar = mar(rankings, truths)
    ratios = [b.reduction_ratio for b in report.bugs if b.reduction_ratio is not None]
    report.mean_reduction_ratio = mean(ratios) if ratios else None
    times = [b.tree_build_seconds for b in report.bugs if b.success]
    report.mean_tree_build_seconds = mean(times) if times else None
    logger.info(f"{name}: Top-1 {report.top_n_counts[1]}/{len(report.bugs)}, MFR {report.mfr}, MAR {report.mar}")
    return report
