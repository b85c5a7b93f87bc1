#!/usr/bin/env python3
"""
Corpus evaluation: localize every seeded bug and aggregate the metrics.

Bugs run concurrently up to ``jobs`` at a time.  A bug that fails is
recorded as such and the evaluation carries on.  Results are collected in
corpus order, so reports do not depend on scheduling.
"""

import asyncio
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from ..config import PipelineConfig, ablation_configs
from ..errors import VarDTError
from ..patch_filter import FilterReport, filter_table
from ..pipeline import LocalizationPipeline, LocalizationResult
from ..ranker import RankedVariable
from .corpus import CorpusBug, seed_corpus
from .metrics import TOP_N, BugMetrics, MetricsReport, build_report

logger = logging.getLogger(__name__)

SWEEP_FACTORS = tuple(round(0.1 * step, 1) for step in range(1, 11))
ABLATIONS_CHECKED = ("VarDT_slice", "VarDT_tree", "VarDT_dep", "VarDT_ms")

ConfigFor = Callable[[CorpusBug], PipelineConfig]
BugOutcome = Tuple[BugMetrics, List[RankedVariable], Optional[LocalizationResult]]


def localize_bug(bug: CorpusBug, config: PipelineConfig) -> BugOutcome:
    """Run the pipeline on one bug; failures come back as a failed ``BugMetrics``."""
    metrics = BugMetrics(bug_id=bug.bug_id, category=bug.category)
    try:
        result = LocalizationPipeline(config).run(bug.buggy, bug.suite)
    except VarDTError as error:
        logger.warning(f"{bug.bug_id}: localization failed: {error}")
        metrics.success = False
        metrics.error = str(error)
        return metrics, [], None
    metrics.reduction_ratio = result.reduction_ratio
    metrics.tree_build_seconds = result.tree_build_seconds
    return metrics, result.ranking, result


class CorpusEvaluator:
    """Evaluates configurations of the pipeline over the seeded corpus."""

    def __init__(self, config: Optional[PipelineConfig] = None, bugs: Optional[Sequence[CorpusBug]] = None,
                 show_progress: bool = True):
        self.config = config or PipelineConfig()
        self.bugs = list(bugs) if bugs is not None else seed_corpus()
        self.show_progress = show_progress
        self.logger = logging.getLogger(__name__)

    async def _run_all(self, config_for: ConfigFor, label: str) -> List[BugOutcome]:
        semaphore = asyncio.Semaphore(self.config.jobs)
        progress = tqdm(total=len(self.bugs), desc=label, unit="bug", disable=not self.show_progress, leave=False)

        async def one(bug: CorpusBug) -> BugOutcome:
            async with semaphore:
                outcome = await asyncio.to_thread(localize_bug, bug, config_for(bug))
                progress.update(1)
                return outcome

        try:
            return await asyncio.gather(*(one(bug) for bug in self.bugs))
        finally:
            progress.close()

    def run_outcomes(self, config_for: ConfigFor, label: str = "VarDT") -> List[BugOutcome]:
        return asyncio.run(self._run_all(config_for, label))

    def evaluate(self, config: Optional[PipelineConfig] = None, name: Optional[str] = None) -> MetricsReport:
        config = config or self.config
        name = name or config.ablation_name()
        return self._report(self.run_outcomes(lambda bug: config, name), name)

    def _report(self, outcomes: List[BugOutcome], name: str) -> MetricsReport:
        rankings = {m.bug_id: ranking for m, ranking, _ in outcomes}
        truths = {bug.bug_id: bug.truth for bug in self.bugs}
        return build_report(rankings, truths, [m for m, _, _ in outcomes], name)

    def ablations(self) -> Dict[str, MetricsReport]:
        """The full configuration, the four component ablations and the method-known variant."""
        reports = {name: self.evaluate(config, name) for name, config in ablation_configs(self.config).items()}

        def method_known(bug: CorpusBug) -> PipelineConfig:
            return self.config.with_overrides(method_known=bug.faulty_method)

        reports["VarDT_mk"] = self._report(self.run_outcomes(method_known, "VarDT_mk"), "VarDT_mk")
        return reports

    def sweep(self, factors: Iterable[float] = SWEEP_FACTORS) -> Dict[float, MetricsReport]:
        return {
            factor: self.evaluate(self.config.with_overrides(dep_factor=factor), f"dep_factor={factor:.1f}")
            for factor in factors
        }

    def patch_table(self, top: Iterable[int] = TOP_N) -> Dict[int, FilterReport]:
        """Filter reports summed over every bug that ships a patch set."""
        top = tuple(top)
        totals = {n: FilterReport() for n in top}
        patched = [bug for bug in self.bugs if bug.has_patches]
        for bug in patched:
            _, ranking, result = localize_bug(bug, self.config)
            if not ranking:
                self.logger.warning(f"{bug.bug_id}: no ranking, skipping its patches")
                continue
            for n, report in filter_table(bug.patches, ranking, result.program, top).items():
                totals[n] = totals[n] + report
        self.logger.info(f"Patch table over {len(patched)} bug(s)")
        return totals


def ablation_direction(reports: Dict[str, MetricsReport]) -> List[str]:
    """Ablations whose Top-1 count beats the full configuration."""
    full = reports["VarDT"].top_n_counts[1]
    return [
        f"{name}: Top-1 {reports[name].top_n_counts[1]} > VarDT {full}"
        for name in ABLATIONS_CHECKED
        if name in reports and reports[name].top_n_counts[1] > full
    ]


def comparison_lines(reports: Dict[str, MetricsReport]) -> List[str]:
    """One row per configuration: Top-N counts, MFR and MAR."""
    def fmt(value: Optional[float]) -> str:
        return "undef" if value is None else f"{value:.2f}"

    header = f"{'config':<16}" + "".join(f"{'Top-' + str(n):>8}" for n in TOP_N) + f"{'MFR':>8}{'MAR':>8}"
    lines = [header]
    for name, report in reports.items():
        counts = "".join(f"{report.top_n_counts[n]:>8}" for n in TOP_N)
        lines.append(f"{name:<16}{counts}{fmt(report.mfr):>8}{fmt(report.mar):>8}")
    return lines


def patch_table_lines(table: Dict[int, FilterReport]) -> List[str]:
    def pct(value: Optional[float]) -> str:
        return "undef" if value is None else f"{value * 100:.1f}%"

    lines = [f"{'N':<6}{'kept':>10}{'precision':>12}{'recall':>10}"]
    for n, report in table.items():
        lines.append(f"{'Top-' + str(n):<6}{report.kept_summary():>10}{pct(report.precision):>12}{pct(report.recall):>10}")
    return lines
