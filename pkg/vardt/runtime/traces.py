#!/usr/bin/env python3
"""
Test-run traces and their line-delimited JSON storage format.

One JSON object per line, keys sorted, compact separators, so that
``write -> read -> write`` reproduces the file byte for byte.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

from ..frontend.syntax import OccurrenceKind, VarOccurrence
from .values import ObservedValue

logger = logging.getLogger(__name__)


class Label(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class VariableObservation:
    method: str
    occurrence: VarOccurrence
    test_id: str
    sequence_index: int
    value: ObservedValue

    def to_list(self) -> list:
        occ = self.occurrence
        return [self.method, occ.variable, occ.line, occ.kind.value, self.sequence_index] + self.value.to_list()

    @classmethod
    def from_list(cls, test_id: str, data: list) -> "VariableObservation":
        method, variable, line, kind, seq, value_kind, value, index = data
        occurrence = VarOccurrence(variable, line, OccurrenceKind(kind))
        return cls(method, occurrence, test_id, seq, ObservedValue(value_kind, value, index))


@dataclass
class TestRunTrace:
    __test__ = False  # keep pytest from collecting this class

    test_id: str
    label: Label
    per_method: Dict[str, List[int]] = field(default_factory=dict)
    observations: List[VariableObservation] = field(default_factory=list)
    failure_site: Dict[str, int] = field(default_factory=dict)
    budget_exhausted: bool = False
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.label is Label.FAIL

    def executed(self, method: str) -> bool:
        return bool(self.per_method.get(method))

    def executed_lines(self, method: str) -> List[int]:
        return self.per_method.get(method, [])

    def observations_for(self, method: str) -> List[VariableObservation]:
        return [o for o in self.observations if o.method == method]

    def to_dict(self) -> dict:
        return {
            "test_id": self.test_id,
            "label": self.label.value,
            "budget_exhausted": self.budget_exhausted,
            "error": self.error,
            "per_method": {m: list(lines) for m, lines in self.per_method.items()},
            "failure_site": dict(self.failure_site),
            "observations": [o.to_list() for o in self.observations],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestRunTrace":
        test_id = data["test_id"]
        return cls(
            test_id=test_id,
            label=Label(data["label"]),
            per_method={m: list(lines) for m, lines in data.get("per_method", {}).items()},
            observations=[VariableObservation.from_list(test_id, o) for o in data.get("observations", [])],
            failure_site={m: int(line) for m, line in data.get("failure_site", {}).items()},
            budget_exhausted=bool(data.get("budget_exhausted", False)),
            error=data.get("error"),
        )


def dumps_trace(trace: TestRunTrace) -> str:
    return json.dumps(trace.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_traces(traces: Iterable[TestRunTrace], target: Union[str, Path, TextIO]) -> None:
    lines = "".join(dumps_trace(t) + "\n" for t in traces)
    if hasattr(target, "write"):
        target.write(lines)
        return
    Path(target).write_text(lines, encoding="utf-8")


def read_traces(source: Union[str, Path, TextIO]) -> List[TestRunTrace]:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    traces = [TestRunTrace.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
    logger.debug(f"Read {len(traces)} trace(s)")
    return traces
