#!/usr/bin/env python3
"""
End-to-end localization pipeline.

Stages run in order: method-level SBFL, backward slicing of every
suspicious method, GSA transformation and value profiling, multi-tree
modelling, and the global variable ranking.  Each stage is also callable
on its own so that the CLI can dump intermediate results.
"""

import asyncio
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .config import PipelineConfig
from .dtree.features import FeatureTable, build_feature_table
from .dtree.model import DecisionTree, DependencyPenalty, build_model
from .errors import InsufficientTestsError, MethodUnreachedError, VarDTError
from .frontend.dependence import (
    DependencyGraph, EquivalenceClasses, MethodFacts, analyze_method, build_dependence_graph,
    equivalence_classes,
)
from .frontend.gsa import transform_gsa
from .frontend.parser import parse_file, parse_suite_file
from .frontend.syntax import OccurrenceKind, Program, TestCase, VarOccurrence, feature_base
from .ranker import MethodResult, RankedVariable, global_rank
from .runtime.profiler import TrackedMap, run_suite
from .runtime.traces import TestRunTrace
from .sbfl import MethodScore, MethodScoreList, build_matrix, rank_methods
from .slicer import Slice, reduction_ratio, slice_method

logger = logging.getLogger(__name__)


@dataclass
class MethodAnalysis:
    """Static facts about one suspicious method of the transformed program."""
    method: str
    score: float
    facts: MethodFacts
    graph: DependencyGraph
    classes: EquivalenceClasses
    slice: Optional[Slice] = None
    reduction_ratio: Optional[float] = None


@dataclass
class LocalizationResult:
    success: bool = True
    error: Optional[str] = None
    config_name: str = "VarDT"
    program: Optional[Program] = None
    method_scores: MethodScoreList = field(default_factory=MethodScoreList)
    analyses: Dict[str, MethodAnalysis] = field(default_factory=dict)
    traces: List[TestRunTrace] = field(default_factory=list)
    tables: Dict[str, FeatureTable] = field(default_factory=dict)
    models: Dict[str, List[DecisionTree]] = field(default_factory=dict)
    results: List[MethodResult] = field(default_factory=list)
    ranking: List[RankedVariable] = field(default_factory=list)
    skipped: Dict[str, str] = field(default_factory=dict)

    @property
    def slices(self) -> Dict[str, Slice]:
        return {m: a.slice for m, a in self.analyses.items() if a.slice is not None}

    @property
    def reduction_ratio(self) -> Optional[float]:
        ratios = [a.reduction_ratio for a in self.analyses.values() if a.reduction_ratio is not None]
        return sum(ratios) / len(ratios) if ratios else None

    @property
    def tree_build_seconds(self) -> float:
        return sum(r.tree_build_seconds for r in self.results)

    def top(self, n: int) -> List[RankedVariable]:
        return self.ranking[:n]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "success": self.success,
            "error": self.error,
            "config": self.config_name,
            "methods": [{"method": e.method, "score": e.score} for e in self.method_scores],
            "skipped": dict(self.skipped),
            "reduction_ratio": self.reduction_ratio,
            "tree_build_seconds": self.tree_build_seconds,
            "ranking": [r.to_dict() for r in self.ranking],
        }


def feature_bases(traces: Sequence[TestRunTrace], analysis: MethodAnalysis) -> List[Tuple[VarOccurrence, VarOccurrence]]:
    """(feature, base occurrence) for every predicate feature the runs observed."""
    pairs = {}
    for trace in traces:
        for obs in trace.observations_for(analysis.method):
            occ = obs.occurrence
            if occ.kind is OccurrenceKind.PREDICATE_FEATURE and occ not in pairs:
                base = VarOccurrence(feature_base(occ.variable), occ.line)
                pairs[occ] = analysis.facts.occurrences.get(base, base)
    return sorted(pairs.items())


class LocalizationPipeline:
    """Runs VarDT on one program and its test suite under a fixed configuration."""

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self.logger = logging.getLogger(__name__)

    # -- stage 1: suspicious methods --------------------------------------

    def coverage(self, program: Program, suite: List[TestCase]) -> List[TestRunTrace]:
        """Labelled runs with line coverage only."""
        return run_suite(program, suite, tracked={}, step_budget=self.config.step_budget)

    def suspicious_methods(self, program: Program, traces: Sequence[TestRunTrace]) -> MethodScoreList:
        matrix = build_matrix(traces, program.method_names())
        known = self.config.method_known
        if known:
            if not program.has_method(known):
                raise VarDTError(f"--method-known names an unknown method: {known}")
            self.logger.info(f"Method known: analysing only {known}")
            return MethodScoreList([MethodScore(known, 1.0)])
        scores = rank_methods(matrix, self.config.sbfl_formula, self.config.top_k_methods)
        return MethodScoreList([e for e in scores if e.score > 0])

    # -- stage 2: static analysis and slicing -----------------------------

    def analyze(self, program: Program, method: str, score: float,
                coverage: Sequence[TestRunTrace]) -> MethodAnalysis:
        target = program.method(method)
        facts = analyze_method(target)
        graph = build_dependence_graph(target, facts)
        analysis = MethodAnalysis(method, score, facts, graph, equivalence_classes(graph, target))
        if self.config.slicing:
            analysis.slice = slice_method(graph, coverage)
            analysis.reduction_ratio = reduction_ratio(analysis.slice, facts, coverage)
        return analysis

    def tracked_map(self, analyses: Dict[str, MethodAnalysis]) -> Optional[TrackedMap]:
        if not self.config.slicing:
            return None
        return {m: set(a.slice.occurrences) for m, a in analyses.items() if a.slice is not None}

    # -- stage 3: profiling -----------------------------------------------

    def profile(self, program: Program, suite: List[TestCase],
                tracked: Optional[TrackedMap]) -> List[TestRunTrace]:
        return run_suite(program, suite, tracked=tracked, step_budget=self.config.step_budget)

    # -- stage 4: trees ---------------------------------------------------

    def model_method(self, analysis: MethodAnalysis,
                     traces: Sequence[TestRunTrace]) -> Tuple[FeatureTable, MethodResult]:
        table = build_feature_table(analysis.method, traces, analysis.classes)
        table.check_gate()
        graph = analysis.graph.with_features(feature_bases(traces, analysis))
        columns = table.column_list()
        factor = self.config.effective_dep_factor

        started = time.perf_counter()
        trees = build_model(table, graph, factor, columns) if self.config.tree_model else []
        elapsed = time.perf_counter() - started

        result = MethodResult(
            method=analysis.method,
            method_score=analysis.score,
            columns=columns,
            trees=trees,
            penalty=DependencyPenalty(graph, columns, factor),
            labels=dict(table.labels),
            tree_build_seconds=elapsed,
            reduction_ratio=analysis.reduction_ratio,
        )
        return table, result

    async def _model_all(self, analyses: List[MethodAnalysis], traces: Sequence[TestRunTrace]):
        semaphore = asyncio.Semaphore(self.config.jobs)

        async def one(analysis: MethodAnalysis):
            async with semaphore:
                try:
                    return await asyncio.to_thread(self.model_method, analysis, traces)
                except InsufficientTestsError as error:
                    return error

        return await asyncio.gather(*(one(a) for a in analyses))

    # -- whole pipeline ---------------------------------------------------

    def run(self, program: Program, suite: List[TestCase]) -> LocalizationResult:
        """Localize; raises ``VarDTError`` when nothing can be ranked."""
        name = self.config.ablation_name()
        self.logger.info(f"Running {name} on {len(program.methods)} method(s), {len(suite)} test(s)")
        program = transform_gsa(program)
        result = LocalizationResult(config_name=name, program=program)

        coverage = self.coverage(program, suite)
        result.method_scores = self.suspicious_methods(program, coverage)

        for entry in result.method_scores:
            try:
                result.analyses[entry.method] = self.analyze(program, entry.method, entry.score, coverage)
            except MethodUnreachedError as error:
                self.logger.warning(f"Skipping {entry.method}: {error}")
                result.skipped[entry.method] = str(error)

        result.traces = self.profile(program, suite, self.tracked_map(result.analyses))

        outcomes = asyncio.run(self._model_all(list(result.analyses.values()), result.traces))
        for analysis, outcome in zip(result.analyses.values(), outcomes):
            if isinstance(outcome, InsufficientTestsError):
                self.logger.warning(f"Skipping {analysis.method}: {outcome}")
                result.skipped[analysis.method] = str(outcome)
                continue
            table, method_result = outcome
            result.tables[analysis.method] = table
            result.models[analysis.method] = method_result.trees
            result.results.append(method_result)

        if not result.results:
            raise InsufficientTestsError(
                "no suspicious method passed the three-test gate: "
                + "; ".join(f"{m}: {why}" for m, why in sorted(result.skipped.items()))
            )
        result.ranking = global_rank(result.results, self.config.method_score)
        self.logger.info(f"{name} ranked {len(result.ranking)} variable(s); "
                         f"top: {result.ranking[0].to_line() if result.ranking else 'none'}")
        return result


def localize(program_path: Union[str, Path], suite_path: Union[str, Path],
             config: Optional[PipelineConfig] = None) -> LocalizationResult:
    program = parse_file(program_path)
    suite = parse_suite_file(suite_path)
    return LocalizationPipeline(config).run(program, suite)
