#!/usr/bin/env python3
"""
Ground-truth files: which variables a fix makes fault relevant.

One entry per line::

    VAR <name> LINES <l1,l2,...> RULE <1-4>

Blank lines and ``#`` comments are ignored.  Rules: 1 the fix edits the
variable directly, 2 an inserted statement affects its value, 3 it is the
condition temporary guarding a data-flow-breaking statement, 4 it is the
condition temporary of a branch whose whole body the fix rewrites.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, List, Union

from ..errors import GroundTruthFormatError

logger = logging.getLogger(__name__)

RULES = (1, 2, 3, 4)

_ENTRY = re.compile(r"^VAR\s+(?P<name>\S+)\s+LINES\s+(?P<lines>\d+(?:\s*,\s*\d+)*)\s+RULE\s+(?P<rule>\d+)$")


@dataclass(frozen=True)
class TruthVariable:
    name: str
    lines: FrozenSet[int]
    rule: int

    def matches(self, name: str, lines: Iterable[int]) -> bool:
        """Same variable name and at least one shared line."""
        return name == self.name and bool(self.lines & set(lines))

    def to_line(self) -> str:
        return f"VAR {self.name} LINES {','.join(str(l) for l in sorted(self.lines))} RULE {self.rule}"


@dataclass
class GroundTruth:
    bug_id: str
    fault_relevant: List[TruthVariable] = field(default_factory=list)

    def rules(self) -> List[int]:
        return sorted({v.rule for v in self.fault_relevant})

    def to_text(self) -> str:
        return "".join(v.to_line() + "\n" for v in self.fault_relevant)


def parse_ground_truth(text: str, bug_id: str = "") -> GroundTruth:
    truth = GroundTruth(bug_id)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _ENTRY.match(line)
        if match is None:
            raise GroundTruthFormatError(f"{bug_id or 'truth'}:{number}: malformed entry {line!r}")
        rule = int(match.group("rule"))
        if rule not in RULES:
            raise GroundTruthFormatError(f"{bug_id or 'truth'}:{number}: unknown rule {rule}")
        lines = frozenset(int(l) for l in match.group("lines").split(","))
        truth.fault_relevant.append(TruthVariable(match.group("name"), lines, rule))
    if not truth.fault_relevant:
        raise GroundTruthFormatError(f"{bug_id or 'truth'}: no fault-relevant variable listed")
    return truth


def load_ground_truth(path: Union[str, Path], bug_id: str = "") -> GroundTruth:
    path = Path(path)
    return parse_ground_truth(path.read_text(encoding="utf-8"), bug_id or path.parent.name)
