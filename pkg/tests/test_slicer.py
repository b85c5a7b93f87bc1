#!/usr/bin/env python3
"""
Tests for dynamic backward slicing.
"""

from dataclasses import replace

import pytest

from vardt.errors import MethodUnreachedError, SliceMergeError, VarDTError
from vardt.evalkit.corpus import seed_corpus
from vardt.frontend import analyze_method, build_dependence_graph, transform_gsa
from vardt.frontend.syntax import Assign, ExprStmt, If, IndexAssign, While
from vardt.runtime import Interpreter, MiniArray, MiniThrow, Recorder, render, run_suite
from vardt.slicer import backward_slice, governing_guards, multi_fail_merge, reduction_ratio, slice_method

LANG27_SLICE = {
    "str@2", "__tcreateNumber_1@3", "decPos@6", "expPos@7", "__tcreateNumber_2@10",
    "__tcreateNumber_8@21", "str@22", "expPos@22",
}


def prepare(bug, method):
    program = transform_gsa(bug.buggy)
    target = program.method(method)
    facts = analyze_method(target)
    graph = build_dependence_graph(target, facts)
    traces = run_suite(program, bug.suite, tracked={})
    return facts, graph, traces


def fresh_copy(value):
    return MiniArray([fresh_copy(v) for v in value.items]) if isinstance(value, MiniArray) else value


class CallCapture(Recorder):
    """Keeps a copy of the arguments of the last call to one method."""

    def __init__(self, method):
        self.method = method
        self.args = None

    def enter_method(self, method, args):
        if method.name == self.method:
            self.args = [fresh_copy(a) for a in args]


class CriterionWatch(Recorder):
    """Last rendered value of each watched name at one line."""

    def __init__(self, method, line, names):
        self.method, self.line, self.names = method, line, names
        self.values = {}

    def observe(self, method, name, line, kind, value):
        if method.name == self.method and line == self.line and name in self.names:
            self.values[name] = render(value)


def replay(program, method, args, line, names):
    watch = CriterionWatch(method, line, names)
    try:
        Interpreter(program, watch).call(method, [fresh_copy(a) for a in args])
    except MiniThrow:
        pass
    return watch.values


def keep_lines(body, lines):
    kept = []
    for stmt in body:
        if isinstance(stmt, (Assign, IndexAssign, ExprStmt, If, While)) and stmt.line not in lines:
            continue
        if isinstance(stmt, If):
            stmt = replace(stmt, then_body=keep_lines(stmt.then_body, lines),
                           else_body=keep_lines(stmt.else_body, lines))
        elif isinstance(stmt, While):
            stmt = replace(stmt, body=keep_lines(stmt.body, lines))
        kept.append(stmt)
    return tuple(kept)


def sliced_program(program, method, lines):
    methods = [replace(m, body=keep_lines(m.body, lines)) if m.name == method else m for m in program.methods]
    return replace(program, methods=methods)


class TestSlicer:
    """Backward slices over the failed runs."""

    def test_lang27_slice(self, lang27):
        facts, graph, traces = prepare(lang27, "createNumber")
        piece = slice_method(graph, traces)
        assert {str(o) for o in piece.occurrences} == LANG27_SLICE
        assert piece.lines == {2, 3, 6, 7, 10, 21, 22}
        assert piece.criterion[0] == 22

    def test_lang27_guard_of_failure_line(self, lang27):
        facts, _, _ = prepare(lang27, "createNumber")
        assert {str(g) for g in governing_guards(facts, 22)} == {"__tcreateNumber_8@21"}

    def test_reduction_ratio(self, lang27):
        facts, graph, traces = prepare(lang27, "createNumber")
        ratio = reduction_ratio(slice_method(graph, traces), facts, traces)
        assert 0.0 < ratio < 1.0

    def test_unreached_method(self, lang27):
        _, graph, traces = prepare(lang27, "createNumber")
        passing = [t for t in traces if not t.failed]
        with pytest.raises(MethodUnreachedError):
            slice_method(graph, passing)

    def test_merge_rejects_other_methods(self, lang27):
        _, graph, traces = prepare(lang27, "createNumber")
        piece = slice_method(graph, traces)
        other = type(piece)("elsewhere")
        with pytest.raises(SliceMergeError):
            multi_fail_merge([piece, other])
        with pytest.raises(VarDTError):
            multi_fail_merge([])

    @pytest.mark.parametrize("bug", seed_corpus(), ids=lambda b: b.bug_id)
    def test_deleting_statements_outside_the_slice_keeps_criterion_values(self, bug):
        """Replaying a failed call on the sliced method observes the same values at the criterion."""
        facts, graph, traces = prepare(bug, bug.faulty_method)
        program = transform_gsa(bug.buggy)
        tests = {t.id: t for t in bug.suite}
        replayed = 0
        for trace in traces:
            if not trace.failed or not trace.executed(bug.faulty_method):
                continue
            piece = backward_slice(graph, trace)
            line, uses = piece.criterion
            capture = CallCapture(bug.faulty_method)
            Interpreter(program, capture).run_test(tests[trace.test_id])
            names = {occ.variable for occ in uses}
            original = replay(program, bug.faulty_method, capture.args, line, names)
            sliced = replay(sliced_program(program, bug.faulty_method, piece.lines),
                            bug.faulty_method, capture.args, line, names)
            assert sliced == original, f"{trace.test_id}: criterion line {line}"
            replayed += 1
        assert replayed > 0

    def test_reduction_ratio_positive_on_most_bugs(self):
        bugs = seed_corpus()
        positive = []
        for bug in bugs:
            facts, graph, traces = prepare(bug, bug.faulty_method)
            if reduction_ratio(slice_method(graph, traces), facts, traces) > 0.0:
                positive.append(bug.bug_id)
        assert len(positive) >= 0.8 * len(bugs)
