#!/usr/bin/env python3
"""
Tests for discriminative scores, final scores and the global ranking.
"""

import math

import pytest

from vardt.dtree import ColumnKind, DependencyPenalty, FeatureTable, build_model
from vardt.dtree.features import Column
from vardt.frontend import DependencyGraph, OccurrenceKind, VarOccurrence
from vardt.ranker import (
    MethodResult, RankedVariable, assign_average_ranks, final_score, global_rank, load_report_json,
    report_json, report_lines,
)
from vardt.runtime.traces import Label


def ranked(variable, fs, method="m", line=1):
    return RankedVariable(method=method, variable=variable, line=line, kind=OccurrenceKind.PROGRAM_VARIABLE.value,
                          lines=[line], ds=fs, method_score=1.0, fs=fs)


class TestRanker:
    """Scores of variables with and without tree nodes."""

    def setup_method(self):
        rows = ["r0", "r1", "r2", "r3", "r4"]
        labels = dict(zip(rows, [Label.FAIL, Label.FAIL, Label.PASS, Label.PASS, Label.PASS]))
        self.data = FeatureTable("m", rows, labels)
        for name, line, kind, values in (
            ("a", 3, ColumnKind.NUMERIC, [1, 2, 3, 4, 5]),
            ("flag", 4, ColumnKind.BOOLEAN, [True, False, True, False, None]),
            ("k", 6, ColumnKind.NUMERIC, [7, 7, 7, 7, 7]),
        ):
            key = VarOccurrence(name, line)
            self.data.columns[key] = Column(key, kind, dict(zip(rows, values)), frozenset({key}))
        graph = DependencyGraph("m")
        columns = self.data.column_list()
        self.result = MethodResult(
            method="m",
            method_score=0.5,
            columns=columns,
            trees=build_model(self.data, graph, 0.8),
            penalty=DependencyPenalty(graph, columns, 0.8),
            labels=labels,
        )

    def test_discriminative_scores(self):
        by_name = {r.variable: r for r in global_rank([self.result])}
        assert by_name["a"].ds == pytest.approx(math.sqrt(5) + 1.0)
        assert by_name["flag"].ds == pytest.approx(0.6 * math.sqrt(5) + 1.0)
        assert by_name["k"].ds == pytest.approx(1.0)
        assert by_name["k"].tree_unused and not by_name["a"].tree_unused

    def test_method_score_squared(self):
        by_name = {r.variable: r for r in global_rank([self.result])}
        assert by_name["a"].fs == pytest.approx(by_name["a"].ds * 0.25)
        plain = {r.variable: r for r in global_rank([self.result], use_method_score=False)}
        assert plain["a"].fs == plain["a"].ds
        assert final_score(2.0, 0.5, use_method_score=True) == pytest.approx(0.5)

    def test_order(self):
        assert [r.variable for r in global_rank([self.result])] == ["a", "flag", "k"]

    def test_average_ranks_for_ties(self):
        items = assign_average_ranks([ranked("w", 1.0), ranked("x", 3.0), ranked("y", 2.0, line=2),
                                      ranked("z", 2.0, line=3)])
        assert [(r.variable, r.rank) for r in items] == [("x", 1.0), ("y", 2.5), ("z", 2.5), ("w", 4.0)]

    def test_report_formats(self):
        ranking = global_rank([self.result])
        assert report_lines(ranking)[0].startswith("1 ")
        assert "m a@[3]" in report_lines(ranking)[0]
        assert report_lines(ranking)[-1].endswith("tree-unused")
        restored = load_report_json(report_json(ranking))
        assert [r.to_dict() for r in restored] == [r.to_dict() for r in ranking]
