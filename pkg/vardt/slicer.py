#!/usr/bin/env python3
"""
Dynamic backward intra-procedural slicing.

The static dependence graph of a method is walked backward from the last
line the failed run executed in it, keeping only occurrences on lines that
run actually executed.  With several failed tests the per-test slices are
unioned.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Set, Tuple

from .errors import MethodUnreachedError, SliceMergeError
from .frontend.dependence import DependencyGraph, MethodFacts, condition_value_variable
from .frontend.syntax import VarOccurrence
from .runtime.traces import TestRunTrace

logger = logging.getLogger(__name__)

Criterion = Tuple[int, FrozenSet[VarOccurrence]]


@dataclass
class Slice:
    method: str
    criteria: List[Criterion] = field(default_factory=list)
    lines: Set[int] = field(default_factory=set)
    occurrences: Set[VarOccurrence] = field(default_factory=set)

    @property
    def criterion(self) -> Optional[Criterion]:
        return self.criteria[0] if self.criteria else None

    @property
    def is_empty(self) -> bool:
        return not self.lines and not self.occurrences

    def to_lines(self) -> List[str]:
        out = [f"{self.method}:{line}" for line in sorted(self.lines)]
        out.extend(f"OCC {occ}" for occ in sorted(self.occurrences))
        return out


def slicing_criterion(trace: TestRunTrace, method: str, facts: MethodFacts) -> Criterion:
    """Last line of ``method`` the run executed and the occurrences read there."""
    executed = trace.executed_lines(method)
    if not executed:
        raise MethodUnreachedError(method)
    line = executed[-1]
    uses = frozenset(facts.uses_by_line.get(line, set()))
    return line, uses


def governing_guards(facts: MethodFacts, line: int) -> Set[VarOccurrence]:
    """Condition values of the branches deciding whether ``line`` runs."""
    cfg = facts.cfg
    control = cfg.control_dependences()
    guards: Set[VarOccurrence] = set()
    for node in cfg.statement_nodes():
        if node.line != line:
            continue
        for branch_id in control.get(node.id, []):
            branch = cfg.nodes[branch_id]
            value = condition_value_variable(branch.stmt)
            if value is not None:
                guards.add(facts.intern(value[0], branch.line, value[1]))
    return guards


def backward_slice(graph: DependencyGraph, trace: TestRunTrace,
                   criterion: Optional[Criterion] = None) -> Slice:
    facts = graph.facts
    if criterion is None:
        criterion = slicing_criterion(trace, graph.method, facts)
    line, uses = criterion
    executed = set(trace.executed_lines(graph.method))

    seeds = set(uses)
    if facts is not None:
        seeds |= governing_guards(facts, line)

    kept: Set[VarOccurrence] = set()
    work = [occ for occ in seeds if occ.line in executed]
    while work:
        occ = work.pop()
        if occ in kept:
            continue
        kept.add(occ)
        for dep in graph.dependencies_of(occ):
            if dep.line in executed and dep not in kept:
                work.append(dep)

    result = Slice(graph.method, [criterion], {line} | {o.line for o in kept}, kept)
    logger.debug(f"Slice of {graph.method} from line {line} ({trace.test_id}): "
                 f"{len(result.lines)} line(s), {len(kept)} occurrence(s)")
    return result


def multi_fail_merge(slices: Iterable[Slice]) -> Slice:
    slices = list(slices)
    if not slices:
        raise SliceMergeError("no slices to merge")
    merged = Slice(slices[0].method)
    for piece in slices:
        if piece.method != merged.method:
            raise SliceMergeError(f"cannot merge slices of {piece.method} into {merged.method}")
        for criterion in piece.criteria:
            if criterion not in merged.criteria:
                merged.criteria.append(criterion)
        merged.lines |= piece.lines
        merged.occurrences |= piece.occurrences
    return merged


def slice_method(graph: DependencyGraph, traces: Iterable[TestRunTrace]) -> Slice:
    """Union of the slices of every failed run that entered the method."""
    pieces = [backward_slice(graph, t) for t in traces if t.failed and t.executed(graph.method)]
    if not pieces:
        raise MethodUnreachedError(graph.method)
    merged = multi_fail_merge(pieces)
    logger.info(f"Sliced {graph.method}: kept {len(merged.occurrences)} occurrence(s) on "
                f"{len(merged.lines)} line(s) from {len(pieces)} failed run(s)")
    return merged


def covered_occurrences(facts: MethodFacts, traces: Iterable[TestRunTrace]) -> Set[VarOccurrence]:
    method = facts.method.name
    covered_lines: Set[int] = set()
    for trace in traces:
        covered_lines.update(trace.executed_lines(method))
    return {occ for occ in facts.occurrences if occ.line in covered_lines}


def reduction_ratio(piece: Slice, facts: MethodFacts, traces: Iterable[TestRunTrace]) -> float:
    """1 - |sliced occurrences| / |occurrences on lines any test covered|."""
    covered = covered_occurrences(facts, traces)
    if not covered:
        return 0.0
    return 1.0 - len(piece.occurrences & covered) / len(covered)
