#!/usr/bin/env python3
"""
End-to-end tests of the localization pipeline on the Lang-27 bug and the
whole seeded corpus.
"""

import pytest

from vardt.config import PipelineConfig, ablation_configs
from vardt.errors import InsufficientTestsError, VarDTError
from vardt.evalkit import CorpusEvaluator, ablation_direction, find_bug, localize_bug, seed_corpus
from vardt.frontend import parse_suite
from vardt.pipeline import LocalizationPipeline, localize
from vardt.ranker import report_json


class TestLang27:
    """Golden run of the full configuration."""

    def setup_method(self):
        self.bug = find_bug("lang27")
        self.result = LocalizationPipeline(PipelineConfig()).run(self.bug.buggy, self.bug.suite)

    def test_single_suspicious_method(self):
        assert self.result.method_scores.methods() == ["createNumber"]
        assert self.result.skipped == {}

    def test_slice(self):
        piece = self.result.slices["createNumber"]
        assert piece.lines == {2, 3, 6, 7, 10, 21, 22}
        assert len(piece.occurrences) == 8
        assert 0.0 < self.result.reduction_ratio < 1.0

    def test_tree_shape(self):
        root = self.result.models["createNumber"][0]
        assert root.predicate.variable.variable == "length(str)"
        assert root.predicate.threshold == pytest.approx(4.0)
        branch, left = root.children[0]
        assert branch == "<="
        assert sorted(left.rows) == ["t1", "t4"]
        assert left.predicate.variable.variable == "expPos"
        assert left.predicate.threshold == pytest.approx(1.5)

    def test_ranking(self):
        top = self.result.ranking[0]
        assert top.variable == "expPos"
        assert top.rank == 1.0
        assert top.ds == pytest.approx(1.8238, abs=1e-3)
        by_name = {r.variable: r for r in self.result.ranking}
        assert by_name["length(str)"].ds == pytest.approx(1.75, abs=1e-3)

    def test_metrics(self):
        metrics, ranking, _ = localize_bug(self.bug, PipelineConfig())
        assert metrics.success
        assert ranking[0].variable == "expPos"

    def test_result_dict(self):
        data = self.result.to_dict()
        assert data["success"] is True
        assert data["config"] == "VarDT"
        assert data["ranking"][0]["variable"] == "expPos"


class TestAblations:
    """Every ablation still localizes Lang-27, none better than the full configuration."""

    def setup_method(self):
        self.bug = find_bug("lang27")

    def test_variants_run(self):
        for name, config in ablation_configs(PipelineConfig()).items():
            assert config.ablation_name() == name
            result = LocalizationPipeline(config).run(self.bug.buggy, self.bug.suite)
            assert result.ranking, name

    def test_no_slice_tracks_everything(self):
        result = LocalizationPipeline(PipelineConfig(slicing=False)).run(self.bug.buggy, self.bug.suite)
        assert result.slices == {}
        assert len(result.tables["createNumber"].columns) > 8

    def test_no_tree_scores_by_penalty_only(self):
        result = LocalizationPipeline(PipelineConfig(tree_model=False)).run(self.bug.buggy, self.bug.suite)
        assert result.models["createNumber"] == []
        assert all(r.tree_unused for r in result.ranking)
        assert all(0.0 < r.ds <= 1.0 for r in result.ranking)

    def test_method_score_off_matches_single_method(self):
        full = LocalizationPipeline(PipelineConfig()).run(self.bug.buggy, self.bug.suite)
        plain = LocalizationPipeline(PipelineConfig(method_score=False)).run(self.bug.buggy, self.bug.suite)
        assert [r.variable for r in plain.ranking] == [r.variable for r in full.ranking]

    def test_direction(self):
        evaluator = CorpusEvaluator(PipelineConfig(), [self.bug], show_progress=False)
        reports = evaluator.ablations()
        assert set(reports) == {"VarDT", "VarDT_slice", "VarDT_tree", "VarDT_dep", "VarDT_ms", "VarDT_mk"}
        assert reports["VarDT"].top_n_counts[1] == 1
        assert ablation_direction(reports) == []
        assert reports["VarDT_mk"].top_n_counts[1] == 1


class TestPipelineErrors:
    """Gates and configuration mistakes."""

    def test_too_few_tests(self, lang27):
        suite = [t for t in lang27.suite if t.id in ("t1", "t4")]
        with pytest.raises(InsufficientTestsError) as info:
            LocalizationPipeline().run(lang27.buggy, suite)
        assert info.value.exit_code == 2

    def test_nothing_failing(self, lang27):
        suite = parse_suite('test ok {\n  assert createNumber("1") == "1";\n}\n')
        with pytest.raises(VarDTError) as info:
            LocalizationPipeline().run(lang27.buggy, suite)
        assert info.value.exit_code == 2

    def test_unknown_known_method(self, lang27):
        with pytest.raises(VarDTError):
            LocalizationPipeline(PipelineConfig(method_known="nope")).run(lang27.buggy, lang27.suite)

    def test_localize_from_files(self, lang27):
        result = localize(lang27.buggy_path, lang27.suite_path)
        assert result.ranking[0].variable == "expPos"


class TestWholeCorpus:
    """Properties that must hold over every shipped bug."""

    def test_no_ablation_beats_the_full_configuration(self):
        reports = CorpusEvaluator(PipelineConfig(), show_progress=False).ablations()
        assert ablation_direction(reports) == []

    def test_runs_are_deterministic(self):
        for bug in seed_corpus():
            first = LocalizationPipeline(PipelineConfig()).run(bug.buggy, bug.suite)
            second = LocalizationPipeline(PipelineConfig()).run(bug.buggy, bug.suite)
            assert report_json(first.ranking) == report_json(second.ranking), bug.bug_id
