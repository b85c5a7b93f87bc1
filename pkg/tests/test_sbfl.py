#!/usr/bin/env python3
"""
Tests for the method-level SBFL stage.
"""

import math

import pytest

from vardt.config import SbflFormula
from vardt.errors import NothingToLocalizeError
from vardt.runtime import run_suite
from vardt.runtime.traces import Label, TestRunTrace
from vardt.sbfl import build_matrix, dstar, ochiai, rank_lines, rank_methods


def run(test_id, label, **per_method):
    return TestRunTrace(test_id=test_id, label=label, per_method={m: list(lines) for m, lines in per_method.items()})


class TestSbfl:
    """Spectra, formulas and the top-K method list."""

    def setup_method(self):
        self.traces = [
            run("f1", Label.FAIL, a=[1, 2], b=[5]),
            run("f2", Label.FAIL, a=[1]),
            run("p1", Label.PASS, b=[5, 6]),
            run("p2", Label.PASS, c=[9]),
        ]
        self.matrix = build_matrix(self.traces, ["a", "b", "c", "d"])

    def test_spectra(self):
        assert self.matrix.spectrum("a").as_tuple() == (2, 0, 0, 2)
        assert self.matrix.spectrum("b").as_tuple() == (1, 1, 1, 1)
        assert self.matrix.spectrum("d").as_tuple() == (0, 0, 2, 2)
        assert self.matrix.spectrum("a:2").as_tuple() == (1, 0, 1, 2)

    def test_ochiai_ranking(self):
        ranked = rank_methods(self.matrix, SbflFormula.OCHIAI, k=10)
        assert ranked.methods() == ["a", "b", "c", "d"]
        assert ranked.score_of("a") == pytest.approx(1.0)
        assert ranked.score_of("b") == pytest.approx(0.5)
        assert ranked.score_of("c") == 0.0

    def test_top_k_truncates(self):
        assert rank_methods(self.matrix, k=1).methods() == ["a"]

    def test_dstar_sentinel_resolves_to_finite_max(self):
        ranked = rank_methods(self.matrix, SbflFormula.DSTAR)
        assert ranked.score_of("a") == pytest.approx(1.0)
        assert ranked.score_of("b") == pytest.approx(1.0)
        assert ranked.methods()[:2] == ["a", "b"]

    def test_formulas(self):
        assert ochiai(1, 1, 0, 0) == pytest.approx(1 / math.sqrt(2))
        assert ochiai(0, 3, 2, 1) == 0.0
        assert dstar(2, 1, 1, 0) == pytest.approx(2.0)
        assert dstar(2, 0, 0, 5) == math.inf

    def test_no_failing_test(self):
        with pytest.raises(NothingToLocalizeError) as info:
            build_matrix([run("p1", Label.PASS, a=[1])])
        assert info.value.exit_code == 2

    def test_scores_are_normalized(self):
        scores = dict(rank_lines(self.matrix))
        assert max(scores.values()) == pytest.approx(1.0)
        assert all(0.0 <= s <= 1.0 for s in scores.values())

    def test_lang27_single_method(self, lang27):
        traces = run_suite(lang27.buggy, lang27.suite, tracked={})
        ranked = rank_methods(build_matrix(traces, lang27.buggy.method_names()))
        assert ranked.methods() == ["createNumber"]
        assert ranked.score_of("createNumber") == pytest.approx(1.0)
