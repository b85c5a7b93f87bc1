#!/usr/bin/env python3
"""
Feature tables: one row per test run, one column per equivalence class.

A column's value for a test is the last value (by observation order) any
observed member of the class held during that run.  Object values only
reach the table through their predicate features, never as raw columns.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..errors import InsufficientTestsError
from ..frontend.dependence import EquivalenceClasses
from ..frontend.syntax import OccurrenceKind, VarOccurrence, feature_base
from ..runtime.traces import Label, TestRunTrace
from ..runtime.values import (
    BOOLEAN, ELEMENT, NOMINAL, NULL_CHECK, NUMERIC, SIZE, TYPE_TAG, ObservedValue,
)

logger = logging.getLogger(__name__)

MIN_TESTS = 3

ColumnValue = Union[float, bool, str, None]


class ColumnKind:
    NUMERIC = "numeric"
    BOOLEAN = "boolean"
    NOMINAL = "nominal"


@dataclass
class Column:
    key: VarOccurrence
    kind: str
    values: Dict[str, ColumnValue]
    members: FrozenSet[VarOccurrence]
    class_members: FrozenSet[VarOccurrence] = frozenset()

    @property
    def name(self) -> str:
        return self.key.variable

    @property
    def line(self) -> int:
        return self.key.line

    @property
    def is_numeric(self) -> bool:
        return self.kind == ColumnKind.NUMERIC

    @property
    def is_feature(self) -> bool:
        return self.key.kind is OccurrenceKind.PREDICATE_FEATURE

    @property
    def is_temporary(self) -> bool:
        return self.key.kind.is_temporary

    @property
    def lines(self) -> List[int]:
        return sorted({o.line for o in self.members} | {o.line for o in self.class_members})

    def value(self, test_id: str) -> ColumnValue:
        return self.values.get(test_id)

    def vector(self, rows: Sequence[str]) -> List[ColumnValue]:
        return [self.values.get(r) for r in rows]

    def observed_in(self, rows: Iterable[str]) -> bool:
        return any(self.values.get(r) is not None for r in rows)


@dataclass
class FeatureTable:
    method: str
    rows: List[str]
    labels: Dict[str, Label]
    columns: Dict[VarOccurrence, Column] = field(default_factory=dict)

    def label_vector(self, rows: Optional[Sequence[str]] = None) -> np.ndarray:
        rows = self.rows if rows is None else rows
        return np.array([1 if self.labels[r] is Label.FAIL else 0 for r in rows], dtype=int)

    def label_counts(self, rows: Sequence[str]) -> Tuple[int, int]:
        failed = sum(1 for r in rows if self.labels[r] is Label.FAIL)
        return len(rows) - failed, failed

    def is_pure(self, rows: Sequence[str]) -> bool:
        passed, failed = self.label_counts(rows)
        return passed == 0 or failed == 0

    def column_list(self) -> List[Column]:
        return [self.columns[k] for k in sorted(self.columns)]

    def check_gate(self) -> None:
        passed, failed = self.label_counts(self.rows)
        if len(self.rows) < MIN_TESTS or passed == 0 or failed == 0:
            raise InsufficientTestsError(
                f"insufficient tests for {self.method}: {len(self.rows)} run(s), {failed} failed, {passed} passed",
                method=self.method,
            )


def _column_kind(key: VarOccurrence, values: List[ObservedValue]) -> Optional[str]:
    kinds = {v.kind for v in values}
    if key.kind is OccurrenceKind.PREDICATE_FEATURE:
        if kinds <= {SIZE} or (kinds <= {ELEMENT} and all(v.is_numeric for v in values)):
            return ColumnKind.NUMERIC
        if kinds <= {NULL_CHECK} or (kinds <= {ELEMENT} and all(v.is_boolean for v in values)):
            return ColumnKind.BOOLEAN
        return ColumnKind.NOMINAL
    if kinds == {NOMINAL}:
        return None
    if kinds <= {NUMERIC}:
        return ColumnKind.NUMERIC
    if kinds <= {BOOLEAN}:
        return ColumnKind.BOOLEAN
    return ColumnKind.NOMINAL


def _cell(kind: str, value: ObservedValue) -> ColumnValue:
    if kind == ColumnKind.NOMINAL or value.kind == TYPE_TAG:
        return value.nominal
    if kind == ColumnKind.BOOLEAN:
        return bool(value.value)
    return float(value.value)


def _class_members(classes: EquivalenceClasses, occ: VarOccurrence) -> FrozenSet[VarOccurrence]:
    if occ.kind is OccurrenceKind.PREDICATE_FEATURE:
        return classes.class_of(VarOccurrence(feature_base(occ.variable), occ.line))
    return classes.class_of(occ)


def build_feature_table(method: str, traces: Iterable[TestRunTrace],
                        classes: EquivalenceClasses) -> FeatureTable:
    """Rows are the runs that entered ``method``, in suite order."""
    traces = [t for t in traces if t.executed(method)]
    table = FeatureTable(method, [t.test_id for t in traces], {t.test_id: t.label for t in traces})

    latest: Dict[tuple, Dict[str, Tuple[int, ObservedValue]]] = {}
    members: Dict[tuple, Set[VarOccurrence]] = {}
    for trace in traces:
        for obs in trace.observations_for(method):
            key = classes.class_key(obs.occurrence)
            members.setdefault(key, set()).add(obs.occurrence)
            cells = latest.setdefault(key, {})
            seen = cells.get(trace.test_id)
            if seen is None or obs.sequence_index > seen[0]:
                cells[trace.test_id] = (obs.sequence_index, obs.value)

    for key, cells in latest.items():
        observed = members[key]
        representative = classes.representative(observed)
        kind = _column_kind(representative, [v for _, v in cells.values()])
        if kind is None:
            continue
        column = Column(
            key=representative,
            kind=kind,
            values={test: _cell(kind, value) for test, (_, value) in cells.items()},
            members=frozenset(observed),
            class_members=_class_members(classes, representative),
        )
        table.columns[representative] = column

    logger.debug(f"Feature table for {method}: {len(table.rows)} row(s) x {len(table.columns)} column(s)")
    return table
