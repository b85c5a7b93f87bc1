#!/usr/bin/env python3
"""
Command-line interface.

    vardt localize PROGRAM SUITE      full pipeline, ranked variables
    vardt eval                        seeded-corpus metrics, ablations, sweep, patch table
    vardt filter PROGRAM SUITE PATCHES
    vardt trace | slice | tree        single-stage dumps

Exit codes: 0 success, 1 parse or format error, 2 gate failure or nothing
to localize, 3 any other toolkit error.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer
from pydantic import ValidationError

from .artifacts import ArtifactStore
from .config import PipelineConfig, SbflFormula, load_config
from .dtree.model import prioritize_vars
from .dtree.render import render_model, render_priorities
from .errors import VarDTError
from .evalkit.corpus import seed_corpus
from .evalkit.runner import CorpusEvaluator, ablation_direction, comparison_lines, patch_table_lines
from .frontend.gsa import transform_gsa
from .frontend.parser import parse_file, parse_suite_file
from .patch_filter import filter_patches, load_patches
from .pipeline import LocalizationPipeline, LocalizationResult
from .ranker import report_json, report_lines
from .runtime.traces import dumps_trace, read_traces

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="vardt",
    help="Variable-level fault localization with decision trees for MiniLang programs.",
    no_args_is_help=True,
    add_completion=False,
)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors."),
) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


# --------------------------------------------------------------------------
# Shared options
# --------------------------------------------------------------------------

DepFactor = typer.Option(None, "--dep-factor", help="Dependency penalty factor in (0, 1].")
TopK = typer.Option(None, "--top-k", help="Number of suspicious methods to analyse.")
Sbfl = typer.Option(None, "--sbfl", help="Method-level formula: ochiai or dstar.")
NoSlice = typer.Option(False, "--no-slice", help="Skip dynamic slicing (VarDT_slice).")
NoTree = typer.Option(False, "--no-tree", help="Rank without the tree model (VarDT_tree).")
NoDep = typer.Option(False, "--no-dep", help="Neutralize the dependency penalty (VarDT_dep).")
NoMethodScore = typer.Option(False, "--no-method-score", help="Ignore method scores (VarDT_ms).")
MethodKnown = typer.Option(None, "--method-known", help="Analyse only this method (VarDT_mk).")
TopN = typer.Option(None, "--top-n", help="Variables to report or to filter patches with.")
Jobs = typer.Option(None, "--jobs", "-j", help="Concurrent work items.")
Out = typer.Option(None, "--out", help="Directory for stage artifacts and reports.")


def build_config(dep_factor: Optional[float] = None, top_k: Optional[int] = None,
                 sbfl: Optional[SbflFormula] = None, no_slice: bool = False, no_tree: bool = False,
                 no_dep: bool = False, no_method_score: bool = False, method_known: Optional[str] = None,
                 top_n: Optional[int] = None, jobs: Optional[int] = None,
                 out: Optional[Path] = None) -> PipelineConfig:
    """Only flags the user actually passed override the environment."""
    return load_config(
        dep_factor=dep_factor,
        top_k_methods=top_k,
        sbfl_formula=sbfl,
        slicing=False if no_slice else None,
        tree_model=False if no_tree else None,
        dep_penalty=False if no_dep else None,
        method_score=False if no_method_score else None,
        method_known=method_known,
        top_n=top_n,
        jobs=jobs,
        out_dir=out,
    )


def run_command(body: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    """Run a command body, mapping toolkit errors onto exit codes."""
    try:
        return body()
    except ValidationError as error:
        logger.error(f"Invalid configuration: {error}")
        raise typer.Exit(code=1)
    except VarDTError as error:
        logger.error(f"{type(error).__name__}: {error}")
        raise typer.Exit(code=error.exit_code)


def echo_lines(lines: List[str]) -> None:
    for line in lines:
        typer.echo(line)


def store_for(config: PipelineConfig) -> Optional[ArtifactStore]:
    return ArtifactStore(config.out_dir) if config.out_dir is not None else None


def write_localization(store: ArtifactStore, result: LocalizationResult) -> None:
    store.write_methods(result.method_scores.to_lines())
    for method, piece in result.slices.items():
        store.write_slice(method, piece.to_lines())
    store.write_traces(result.traces)
    for method, trees in result.models.items():
        store.write_trees(method, render_model(trees, result.tables[method].labels))
    store.write_ranking(report_lines(result.ranking), report_json(result.ranking))
    store.write_json("summary.json", {key: value for key, value in result.to_dict().items() if key != "ranking"})


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

@app.command()
def localize(
    program: Path = typer.Argument(..., exists=True, dir_okay=False, help="MiniLang program file."),
    suite: Path = typer.Argument(..., exists=True, dir_okay=False, help="MiniLang test suite file."),
    dep_factor: Optional[float] = DepFactor, top_k: Optional[int] = TopK, sbfl: Optional[SbflFormula] = Sbfl,
    no_slice: bool = NoSlice, no_tree: bool = NoTree, no_dep: bool = NoDep,
    no_method_score: bool = NoMethodScore, method_known: Optional[str] = MethodKnown,
    top_n: Optional[int] = TopN, jobs: Optional[int] = Jobs, out: Optional[Path] = Out,
) -> None:
    """Rank the variables of PROGRAM by how likely they are fault relevant."""
    def body() -> Dict[str, Any]:
        config = build_config(dep_factor, top_k, sbfl, no_slice, no_tree, no_dep, no_method_score,
                              method_known, top_n, jobs, out)
        result = LocalizationPipeline(config).run(parse_file(program), parse_suite_file(suite))
        store = store_for(config)
        if store is not None:
            write_localization(store, result)
        echo_lines(report_lines(result.top(config.top_n) if top_n else result.ranking))
        return result.to_dict()

    run_command(body)


@app.command("eval")
def evaluate(
    corpus: Optional[Path] = typer.Option(None, "--corpus", help="Corpus directory with a manifest.yaml."),
    bug: Optional[List[str]] = typer.Option(None, "--bug", help="Only evaluate these bug ids."),
    ablations: bool = typer.Option(False, "--ablations", help="Also run every ablation variant."),
    sweep: bool = typer.Option(False, "--sweep", help="Sweep the dependency factor from 0.1 to 1.0."),
    patches: bool = typer.Option(False, "--patches", help="Run the patch filter at Top-1/3/5/10."),
    dep_factor: Optional[float] = DepFactor, top_k: Optional[int] = TopK, sbfl: Optional[SbflFormula] = Sbfl,
    no_slice: bool = NoSlice, no_tree: bool = NoTree, no_dep: bool = NoDep,
    no_method_score: bool = NoMethodScore, jobs: Optional[int] = Jobs, out: Optional[Path] = Out,
) -> None:
    """Evaluate on the seeded-bug corpus: Top-N recall, MFR and MAR."""
    def body() -> Dict[str, Any]:
        config = build_config(dep_factor, top_k, sbfl, no_slice, no_tree, no_dep, no_method_score,
                              None, None, jobs, out)
        bugs = seed_corpus(corpus)
        if bug:
            bugs = [b for b in bugs if b.bug_id in set(bug)]
            if not bugs:
                raise VarDTError(f"no corpus bug matches {', '.join(bug)}")
        evaluator = CorpusEvaluator(config, bugs, show_progress=sys.stderr.isatty())
        store = store_for(config)

        report = evaluator.evaluate()
        echo_lines(report.to_lines())
        if store is not None:
            store.write_report("metrics", report.to_lines(), report.to_dict())

        if ablations:
            reports = evaluator.ablations()
            lines = comparison_lines(reports)
            violations = ablation_direction(reports)
            lines.extend(f"ablation beats full configuration: {v}" for v in violations)
            echo_lines([""] + lines)
            if store is not None:
                store.write_report("ablations", lines, {name: r.to_dict() for name, r in reports.items()})

        if sweep:
            reports = evaluator.sweep()
            lines = comparison_lines({r.name: r for r in reports.values()})
            echo_lines([""] + lines)
            if store is not None:
                store.write_report("sweep", lines, {f"{f:.1f}": r.to_dict() for f, r in reports.items()})

        if patches:
            table = evaluator.patch_table()
            lines = patch_table_lines(table)
            echo_lines([""] + lines)
            if store is not None:
                store.write_report("patches", lines, {str(n): r.to_dict() for n, r in table.items()})
        return {"success": True, "bugs": len(bugs)}

    run_command(body)


@app.command("filter")
def filter_command(
    program: Path = typer.Argument(..., exists=True, dir_okay=False),
    suite: Path = typer.Argument(..., exists=True, dir_okay=False),
    patches: Path = typer.Argument(..., exists=True, dir_okay=False, help="Structured patch file."),
    top_n: Optional[int] = TopN,
    dep_factor: Optional[float] = DepFactor, top_k: Optional[int] = TopK, sbfl: Optional[SbflFormula] = Sbfl,
    no_slice: bool = NoSlice, no_tree: bool = NoTree, no_dep: bool = NoDep,
    no_method_score: bool = NoMethodScore, method_known: Optional[str] = MethodKnown,
    jobs: Optional[int] = Jobs, out: Optional[Path] = Out,
) -> None:
    """Keep only the patches that touch one of the Top-N localized variables."""
    def body() -> Dict[str, Any]:
        config = build_config(dep_factor, top_k, sbfl, no_slice, no_tree, no_dep, no_method_score,
                              method_known, top_n, jobs, out)
        parsed = parse_file(program)
        candidates = load_patches(patches, parsed)
        lines: List[str] = []
        if not candidates:
            lines.append("no patches")
            echo_lines(lines)
            return {"success": True, "kept": [], "filtered": []}

        result = LocalizationPipeline(config).run(parsed, parse_suite_file(suite))
        kept, filtered, report = filter_patches(candidates, result.top(config.top_n), result.program)
        lines.extend(f"KEEP {p.patch_id}" for p in kept)
        lines.extend(f"FILTER {p.patch_id}" for p in filtered)
        lines.extend(report.to_lines())
        echo_lines(lines)
        store = store_for(config)
        if store is not None:
            write_localization(store, result)
            store.write_report("filter", lines, {
                "kept": [p.patch_id for p in kept],
                "filtered": [p.patch_id for p in filtered],
                "report": report.to_dict(),
            })
        return {"success": True, "report": report.to_dict()}

    run_command(body)


@app.command()
def trace(
    program: Path = typer.Argument(..., exists=True, dir_okay=False),
    suite: Path = typer.Argument(..., exists=True, dir_okay=False),
    out: Optional[Path] = Out,
) -> None:
    """Profile every occurrence of the transformed program and dump JSON-lines traces."""
    def body() -> Dict[str, Any]:
        pipeline = LocalizationPipeline(build_config(out=out))
        traces = pipeline.profile(transform_gsa(parse_file(program)), parse_suite_file(suite), None)
        store = store_for(pipeline.config)
        if store is not None:
            store.write_traces(traces)
        else:
            echo_lines([dumps_trace(t) for t in traces])
        return {"success": True, "traces": len(traces)}

    run_command(body)


@app.command("slice")
def slice_command(
    program: Path = typer.Argument(..., exists=True, dir_okay=False),
    suite: Path = typer.Argument(..., exists=True, dir_okay=False),
    method: str = typer.Option(..., "--method", "-m", help="Method to slice."),
    out: Optional[Path] = Out,
) -> None:
    """Backward slice of METHOD over every failed run, with its reduction ratio."""
    def body() -> Dict[str, Any]:
        pipeline = LocalizationPipeline(build_config(out=out))
        transformed = transform_gsa(parse_file(program))
        if not transformed.has_method(method):
            raise VarDTError(f"unknown method {method}")
        coverage = pipeline.coverage(transformed, parse_suite_file(suite))
        analysis = pipeline.analyze(transformed, method, 1.0, coverage)
        lines = analysis.slice.to_lines() + [f"reduction ratio: {analysis.reduction_ratio:.4f}"]
        echo_lines(lines)
        store = store_for(pipeline.config)
        if store is not None:
            store.write_slice(method, lines)
        return {"success": True, "occurrences": len(analysis.slice.occurrences)}

    run_command(body)


@app.command()
def tree(
    program: Path = typer.Argument(..., exists=True, dir_okay=False),
    suite: Path = typer.Argument(..., exists=True, dir_okay=False),
    method: str = typer.Option(..., "--method", "-m", help="Method to model."),
    traces: Optional[Path] = typer.Option(None, "--traces", exists=True, dir_okay=False,
                                          help="Reuse traces written by an earlier stage."),
    dep_factor: Optional[float] = DepFactor, no_slice: bool = NoSlice, no_dep: bool = NoDep,
    out: Optional[Path] = Out,
) -> None:
    """Decision trees for METHOD plus the root-level variable priorities."""
    def body() -> Dict[str, Any]:
        pipeline = LocalizationPipeline(build_config(dep_factor=dep_factor, no_slice=no_slice, no_dep=no_dep, out=out))
        transformed = transform_gsa(parse_file(program))
        if not transformed.has_method(method):
            raise VarDTError(f"unknown method {method}")
        tests = parse_suite_file(suite)
        coverage = pipeline.coverage(transformed, tests)
        analysis = pipeline.analyze(transformed, method, 1.0, coverage)
        if traces is not None:
            runs = read_traces(traces)
        else:
            runs = pipeline.profile(transformed, tests, pipeline.tracked_map({method: analysis}))

        table, result = pipeline.model_method(analysis, runs)
        priorities = prioritize_vars(result.columns, table, result.penalty.graph,
                                     pipeline.config.effective_dep_factor, penalty=result.penalty)
        lines = render_model(result.trees, table.labels) + ["# priorities"] + render_priorities(priorities)
        echo_lines(lines)
        store = store_for(pipeline.config)
        if store is not None:
            store.write_trees(method, lines)
        return {"success": True, "trees": len(result.trees)}

    run_command(body)


if __name__ == "__main__":
    app()
