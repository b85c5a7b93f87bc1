#!/usr/bin/env python3
"""
Value profiling: run tests, label them, and record what variables held.

When a ``tracked`` map is given (method -> occurrences kept by slicing),
only those occurrences are recorded; predicate features ride along with
their base variable.  Without it every occurrence of every method is
recorded.
"""

import logging
from typing import Dict, Iterable, List, Optional, Set

from ..errors import SuiteError
from ..frontend.syntax import Method, OccurrenceKind, Program, TestCase, VarOccurrence
from .interpreter import Interpreter, Recorder
from .traces import Label, TestRunTrace, VariableObservation
from .values import ObservedValue, RuntimeValue, project

logger = logging.getLogger(__name__)

TrackedMap = Dict[str, Set[VarOccurrence]]


class TraceRecorder(Recorder):
    def __init__(self, test_id: str, tracked: Optional[TrackedMap] = None):
        self.test_id = test_id
        self.tracked = tracked
        self.per_method: Dict[str, List[int]] = {}
        self.observations: List[VariableObservation] = []
        self.sequence = 0

    def execute_line(self, method: Method, line: int) -> None:
        self.per_method.setdefault(method.name, []).append(line)

    def _is_tracked(self, method: str, name: str, line: int) -> bool:
        if self.tracked is None:
            return True
        wanted = self.tracked.get(method)
        return wanted is not None and VarOccurrence(name, line) in wanted

    def observe(self, method: Method, name: str, line: int, kind: OccurrenceKind, value: RuntimeValue) -> None:
        if not self._is_tracked(method.name, name, line):
            return
        for occurrence, observed in project(name, line, kind, value):
            self.sequence += 1
            self.observations.append(
                VariableObservation(method.name, occurrence, self.test_id, self.sequence, observed)
            )


def run_test(program: Program, test: TestCase, tracked: Optional[TrackedMap] = None,
             step_budget: int = 1_000_000) -> TestRunTrace:
    recorder = TraceRecorder(test.id, tracked)
    outcome = Interpreter(program, recorder, step_budget).run_test(test)

    trace = TestRunTrace(
        test_id=test.id,
        label=Label.PASS if outcome.passed else Label.FAIL,
        per_method=recorder.per_method,
        observations=recorder.observations,
        budget_exhausted=outcome.budget_exhausted,
        error=None if outcome.passed else f"{outcome.error_kind}: {outcome.error_message}",
    )
    if trace.failed:
        trace.failure_site = {m: lines[-1] for m, lines in recorder.per_method.items() if lines}
        logger.debug(f"Test {test.id} FAIL ({trace.error}); last lines {trace.failure_site}")
    return trace


def check_suite(suite: List[TestCase]) -> None:
    if not suite:
        raise SuiteError("test suite is empty")
    seen: Set[str] = set()
    for test in suite:
        if test.id in seen:
            raise SuiteError(f"duplicate test id {test.id!r}")
        seen.add(test.id)


def run_suite(program: Program, suite: List[TestCase], tracked: Optional[TrackedMap] = None,
              step_budget: int = 1_000_000) -> List[TestRunTrace]:
    check_suite(suite)
    traces = [run_test(program, test, tracked, step_budget) for test in suite]
    failed = sum(1 for t in traces if t.failed)
    logger.info(f"Ran {len(traces)} test(s): {len(traces) - failed} passed, {failed} failed")
    return traces


def last_value_table(traces: Iterable[TestRunTrace],
                     method: str) -> Dict[VarOccurrence, Dict[str, ObservedValue]]:
    """Last recorded value of every occurrence of ``method``, per test."""
    table: Dict[VarOccurrence, Dict[str, ObservedValue]] = {}
    latest: Dict[tuple, int] = {}
    for trace in traces:
        for obs in trace.observations:
            if obs.method != method:
                continue
            key = (obs.occurrence, trace.test_id)
            if obs.sequence_index >= latest.get(key, -1):
                latest[key] = obs.sequence_index
                table.setdefault(obs.occurrence, {})[trace.test_id] = obs.value
    return table
