#!/usr/bin/env python3
"""
Variable prioritization and the iterative multi-tree model.

Columns are ranked by (gain ratio + |correlation|) x dependency penalty,
the best splittable one becomes the node predicate, and trees are grown
until no node can make progress.  ``build_model`` keeps building trees
over the variables earlier trees did not use, so each variable appears in
at most one tree.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from ..errors import UnobservedVariableError
from ..frontend.dependence import DependencyGraph
from ..frontend.syntax import VarOccurrence
from ..runtime.traces import Label
from .features import Column, ColumnKind, FeatureTable
from .metrics import UNOBSERVED, best_threshold, gain_ratio, pearson

logger = logging.getLogger(__name__)

DEFAULT_DEP_FACTOR = 0.8
SCORE_DIGITS = 12


# --------------------------------------------------------------------------
# Dependency penalty
# --------------------------------------------------------------------------

def dependents(v: Column, graph: DependencyGraph, var_list: Sequence[Column]) -> List[Column]:
    """Columns of ``var_list`` (other than ``v``) with a member that reaches a member of ``v``."""
    return [x for x in var_list if x.key != v.key and graph.reaches_any(x.members, v.members)]


def dep_score(v: Column, graph: DependencyGraph, var_list: Sequence[Column], factor: float) -> float:
    return factor ** len(dependents(v, graph, var_list))


class DependencyPenalty:
    """depScore for the columns of one method.

    Pairwise reachability is cached once per method; counts are taken
    against whichever variable list is being prioritized, ``var_list`` by
    default.
    """

    def __init__(self, graph: DependencyGraph, var_list: Sequence[Column], factor: float = DEFAULT_DEP_FACTOR,
                 reach: Optional[Dict[Tuple[VarOccurrence, VarOccurrence], bool]] = None):
        self.graph = graph
        self.var_list = list(var_list)
        self.factor = factor
        self._reach = reach if reach is not None else {}

    def for_list(self, var_list: Sequence[Column]) -> "DependencyPenalty":
        """The same penalty counted against another variable list."""
        return DependencyPenalty(self.graph, var_list, self.factor, self._reach)

    def reaches(self, x: Column, v: Column) -> bool:
        pair = (x.key, v.key)
        if pair not in self._reach:
            self._reach[pair] = self.graph.reaches_any(x.members, v.members)
        return self._reach[pair]

    def count(self, v: Column, var_list: Optional[Sequence[Column]] = None) -> int:
        candidates = self.var_list if var_list is None else var_list
        return sum(1 for x in candidates if x.key != v.key and self.reaches(x, v))

    def score(self, v: Column, var_list: Optional[Sequence[Column]] = None) -> float:
        return self.factor ** self.count(v, var_list)


# --------------------------------------------------------------------------
# Prioritization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PriorityScore:
    variable: VarOccurrence
    gain_ratio: float
    correlation: float
    dep_score: float

    @property
    def combined(self) -> float:
        return (self.gain_ratio + self.correlation) * self.dep_score

    def sort_key(self) -> Tuple:
        return (-round(self.combined, SCORE_DIGITS), self.variable.line, self.variable.variable)

    def __str__(self) -> str:
        return (f"{self.variable} combined={self.combined:.6f} gain_ratio={self.gain_ratio:.6f} "
                f"correlation={self.correlation:.6f} dep={self.dep_score:.6f}")


def _numeric_vector(column: Column, rows: Sequence[str]) -> List[Optional[float]]:
    return [None if v is None else float(v) for v in column.vector(rows)]


def score_column(column: Column, data: FeatureTable, rows: Sequence[str], penalty: DependencyPenalty,
                 var_list: Optional[Sequence[Column]] = None) -> PriorityScore:
    labels = list(data.label_vector(rows))
    values = column.vector(rows)
    if column.kind == ColumnKind.NOMINAL:
        ratio, correlation = gain_ratio(values, labels, numeric=False), 0.0
    else:
        numeric = _numeric_vector(column, rows)
        ratio = gain_ratio(numeric if column.is_numeric else values, labels, numeric=column.is_numeric)
        correlation = pearson(numeric, labels)
    return PriorityScore(column.key, ratio, correlation, penalty.score(column, var_list))


def prioritize_vars(var_list: Sequence[Column], data: FeatureTable, graph: DependencyGraph,
                    factor: float = DEFAULT_DEP_FACTOR, rows: Optional[Sequence[str]] = None,
                    penalty: Optional[DependencyPenalty] = None) -> List[PriorityScore]:
    """Score every column against ``var_list`` itself and sort descending.

    Columns already stand for a whole equivalence class, so one score per
    column is the class score.
    """
    rows = list(data.rows if rows is None else rows)
    var_list = list(var_list)
    penalty = penalty or DependencyPenalty(graph, var_list, factor)
    scores = [score_column(column, data, rows, penalty, var_list) for column in var_list]
    return sorted(scores, key=PriorityScore.sort_key)


# --------------------------------------------------------------------------
# Split predicates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitPredicate:
    variable: VarOccurrence
    kind: str
    threshold: Optional[float] = None
    values: Tuple[str, ...] = ()
    has_unobserved: bool = False

    @property
    def branches(self) -> Tuple[str, ...]:
        if self.kind == ColumnKind.NUMERIC:
            found = ("<=", ">")
        elif self.kind == ColumnKind.BOOLEAN:
            found = ("true", "false")
        else:
            found = self.values
        return found + ((UNOBSERVED,) if self.has_unobserved else ())

    def branch_of(self, value) -> str:
        if value is None:
            return UNOBSERVED
        if self.kind == ColumnKind.NUMERIC:
            return "<=" if float(value) <= self.threshold else ">"
        if self.kind == ColumnKind.BOOLEAN:
            return "true" if value else "false"
        return str(value)

    def partition(self, column: Column, rows: Sequence[str]) -> Dict[str, List[str]]:
        groups: Dict[str, List[str]] = {branch: [] for branch in self.branches}
        for row in rows:
            groups.setdefault(self.branch_of(column.value(row)), []).append(row)
        return groups

    def __str__(self) -> str:
        if self.kind == ColumnKind.NUMERIC:
            return f"{self.variable} <= {self.threshold:g}"
        if self.kind == ColumnKind.BOOLEAN:
            return f"{self.variable} == true"
        return f"{self.variable} in {{{', '.join(self.values)}}}"


def calculate_condition(data: FeatureTable, var: Column, rows: Optional[Sequence[str]] = None,
                        exclude_thresholds: Sequence[float] = ()) -> SplitPredicate:
    rows = list(data.rows if rows is None else rows)
    values = var.vector(rows)
    if all(v is None for v in values):
        raise UnobservedVariableError(str(var.key))
    has_unobserved = any(v is None for v in values)

    if var.is_numeric:
        labels = list(data.label_vector(rows))
        best = best_threshold(_numeric_vector(var, rows), labels, exclude_thresholds)
        if best is None:
            observed = sorted(float(v) for v in values if v is not None)
            return SplitPredicate(var.key, var.kind, threshold=observed[-1], has_unobserved=has_unobserved)
        return SplitPredicate(var.key, var.kind, threshold=best[0], has_unobserved=has_unobserved)

    if var.kind == ColumnKind.BOOLEAN:
        return SplitPredicate(var.key, var.kind, has_unobserved=has_unobserved)

    observed = tuple(sorted({str(v) for v in values if v is not None}))
    return SplitPredicate(var.key, var.kind, values=observed, has_unobserved=has_unobserved)


# --------------------------------------------------------------------------
# Trees
# --------------------------------------------------------------------------

@dataclass
class DecisionTree:
    """One node: its id, split predicate, the tests that reach it and its children by branch."""
    node_id: int
    rows: List[str]
    predicate: Optional[SplitPredicate] = None
    children: List[Tuple[str, "DecisionTree"]] = field(default_factory=list)
    priorities: List[PriorityScore] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.predicate is None

    def nodes(self) -> Iterator["DecisionTree"]:
        yield self
        for _, child in self.children:
            yield from child.nodes()

    def leaves(self) -> List["DecisionTree"]:
        return [node for node in self.nodes() if node.is_leaf]

    def variables(self) -> Set[VarOccurrence]:
        return {node.predicate.variable for node in self.nodes() if node.predicate is not None}

    def nodes_using(self, variable: VarOccurrence) -> List["DecisionTree"]:
        return [n for n in self.nodes() if n.predicate is not None and n.predicate.variable == variable]

    def fail_distance(self, labels: Dict[str, Label]) -> Optional[int]:
        """Edges down to the nearest leaf holding a FAIL test, or None."""
        if self.is_leaf:
            return 0 if any(labels[r] is Label.FAIL for r in self.rows) else None
        distances = [child.fail_distance(labels) for _, child in self.children]
        below = [d for d in distances if d is not None]
        return 1 + min(below) if below else None


@dataclass
class _PathUse:
    variable: VarOccurrence
    threshold: Optional[float]


class TreeBuilder:
    """Grows one tree over a feature table."""

    def __init__(self, data: FeatureTable, var_list: Sequence[Column], penalty: DependencyPenalty):
        self.data = data
        self.var_list = list(var_list)
        self.penalty = penalty
        self.max_depth = len(self.var_list) + 1
        self._next_id = 0

    def _leaf(self, rows: List[str]) -> DecisionTree:
        node = DecisionTree(self._next_id, rows)
        self._next_id += 1
        return node

    def _eligible(self, column: Column, rows: List[str],
                  exclude: Sequence[float] = ()) -> Optional[Tuple[SplitPredicate, Dict[str, List[str]]]]:
        if not column.observed_in(rows):
            return None
        predicate = calculate_condition(self.data, column, rows, exclude)
        if column.is_numeric and any(math.isclose(predicate.threshold, t) for t in exclude):
            return None
        groups = predicate.partition(column, rows)
        if sum(1 for g in groups.values() if g) < 2:
            return None
        return predicate, groups

    def _choose(self, rows: List[str], path: List[_PathUse]):
        used = {use.variable for use in path}
        fresh = [c for c in self.var_list if c.key not in used]
        scores = prioritize_vars(fresh, self.data, self.penalty.graph, rows=rows, penalty=self.penalty)
        columns = {c.key: c for c in self.var_list}
        for score in scores:
            choice = self._eligible(columns[score.variable], rows)
            if choice is not None:
                return scores, columns[score.variable], choice

        reused = [c for c in self.var_list if c.key in used and c.is_numeric]
        fallback = prioritize_vars(reused, self.data, self.penalty.graph, rows=rows, penalty=self.penalty)
        for score in fallback:
            thresholds = [u.threshold for u in path if u.variable == score.variable and u.threshold is not None]
            choice = self._eligible(columns[score.variable], rows, thresholds)
            if choice is not None:
                return scores, columns[score.variable], choice
        return scores, None, None

    def grow(self, rows: List[str], depth: int = 0, path: Optional[List[_PathUse]] = None) -> DecisionTree:
        path = path or []
        if len(rows) < 2 or self.data.is_pure(rows) or depth >= self.max_depth:
            return self._leaf(rows)

        scores, column, choice = self._choose(rows, path)
        if column is None:
            return self._leaf(rows)

        predicate, groups = choice
        node = self._leaf(rows)
        node.predicate = predicate
        node.priorities = scores
        logger.debug(f"Split {len(rows)} row(s) on {predicate}")
        for branch in predicate.branches:
            members = groups.get(branch, [])
            if members:
                child_path = path + [_PathUse(column.key, predicate.threshold)]
                node.children.append((branch, self.grow(members, depth + 1, child_path)))
        return node


def build_tree(data: FeatureTable, var_list: Sequence[Column], graph: DependencyGraph,
               factor: float = DEFAULT_DEP_FACTOR, penalty: Optional[DependencyPenalty] = None) -> DecisionTree:
    """A leaf unless the table holds more than two rows with both labels.

    Every node scores its candidates against the variables still fresh on
    its path, so a shared ``penalty`` only contributes its reachability cache.
    """
    penalty = penalty.for_list(var_list) if penalty is not None else DependencyPenalty(graph, var_list, factor)
    builder = TreeBuilder(data, var_list, penalty)
    if len(data.rows) <= 2 or data.is_pure(data.rows):
        return builder._leaf(list(data.rows))
    return builder.grow(list(data.rows))


def derived_temporaries(remaining: Sequence[Column], consumed: Sequence[Column],
                        graph: DependencyGraph) -> Set[VarOccurrence]:
    """Temporaries whose data operands all belong to classes already consumed."""
    spent: Set[VarOccurrence] = set()
    for column in consumed:
        spent |= column.members | column.class_members
    retired: Set[VarOccurrence] = set()
    for column in remaining:
        if not column.is_temporary:
            continue
        operands: Set[VarOccurrence] = set()
        for member in column.members:
            operands |= graph.data_dependencies_of(member)
        if operands and operands <= spent:
            retired.add(column.key)
    return retired


def build_model(data: FeatureTable, graph: DependencyGraph, factor: float = DEFAULT_DEP_FACTOR,
                var_list: Optional[Sequence[Column]] = None) -> List[DecisionTree]:
    """Trees over disjoint variable sets, in construction order."""
    data.check_gate()
    all_columns = list(var_list) if var_list is not None else data.column_list()
    penalty = DependencyPenalty(graph, all_columns, factor)
    remaining = list(all_columns)
    model: List[DecisionTree] = []
    while remaining:
        tree = build_tree(data, remaining, graph, factor, penalty.for_list(remaining))
        if tree.is_leaf:
            break
        model.append(tree)
        used = tree.variables()
        consumed = [c for c in remaining if c.key in used]
        remaining = [c for c in remaining if c.key not in used]
        retired = derived_temporaries(remaining, consumed, graph)
        if retired:
            logger.debug(f"Retiring derived temporaries {sorted(str(r) for r in retired)}")
            remaining = [c for c in remaining if c.key not in retired]
    logger.info(f"Built {len(model)} tree(s) for {data.method} over {len(all_columns)} variable(s)")
    return model
