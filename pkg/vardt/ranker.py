#!/usr/bin/env python3
"""
Variable scoring across trees and methods, and the global ranked list.

DS(v)  = max over nodes splitting on v of (1 - Gini) * sqrt(|D|) / failNodeDist
         plus depScore(v), added once
FS(v)  = DS(v) * methodScore(m_v)^2

Ties on FS share the average of the positions they occupy.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dtree.features import Column
from .dtree.metrics import weighted_gini
from .dtree.model import SCORE_DIGITS, DecisionTree, DependencyPenalty
from .frontend.syntax import VarOccurrence
from .runtime.traces import Label

logger = logging.getLogger(__name__)


@dataclass
class MethodResult:
    """Everything the ranker needs from one analyzed method."""
    method: str
    method_score: float
    columns: List[Column]
    trees: List[DecisionTree]
    penalty: DependencyPenalty
    labels: Dict[str, Label]
    tree_build_seconds: float = 0.0
    reduction_ratio: Optional[float] = None


@dataclass
class RankedVariable:
    method: str
    variable: str
    line: int
    kind: str
    lines: List[int]
    ds: float
    method_score: float
    fs: float
    rank: float = 0.0
    tree_unused: bool = False

    @property
    def occurrence(self) -> VarOccurrence:
        return VarOccurrence(self.variable, self.line)

    def to_line(self) -> str:
        lines = ",".join(str(l) for l in self.lines)
        flag = " tree-unused" if self.tree_unused else ""
        return (f"{self.rank:g} {self.fs:.6f} {self.ds:.6f} {self.method_score:.6f} "
                f"{self.method} {self.variable}@[{lines}]{flag}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RankedVariable":
        return cls(**data)


def node_term(node: DecisionTree, labels: Dict[str, Label]) -> float:
    """(1 - Gini(p)) * sqrt(|D|) / failNodeDist for one split node; 0 with no FAIL leaf below."""
    distance = node.fail_distance(labels)
    if node.is_leaf or not distance:
        return 0.0
    groups = [[1 if labels[r] is Label.FAIL else 0 for r in child.rows] for _, child in node.children]
    return (1.0 - weighted_gini(groups)) * math.sqrt(len(node.rows)) / distance


def discriminative_score(v: VarOccurrence, trees: Iterable[DecisionTree], labels: Dict[str, Label],
                         dep: float) -> Tuple[float, bool]:
    """(DS, tree_unused) for variable ``v``; an unused variable gets its depScore alone."""
    terms = [node_term(node, labels) for tree in trees for node in tree.nodes_using(v)]
    if not terms:
        return dep, True
    return max(terms) + dep, False


def final_score(ds: float, method_score: float, use_method_score: bool = True) -> float:
    if not use_method_score:
        return ds
    return ds * method_score ** 2


def score_method(result: MethodResult, use_method_score: bool = True) -> List[RankedVariable]:
    ranked = []
    for column in result.columns:
        dep = result.penalty.score(column)
        ds, unused = discriminative_score(column.key, result.trees, result.labels, dep)
        ranked.append(RankedVariable(
            method=result.method,
            variable=column.name,
            line=column.line,
            kind=column.key.kind.value,
            lines=column.lines,
            ds=ds,
            method_score=result.method_score,
            fs=final_score(ds, result.method_score, use_method_score),
            tree_unused=unused,
        ))
    return ranked


def assign_average_ranks(ranked: List[RankedVariable]) -> List[RankedVariable]:
    """Sort by FS and give every run of equal scores the mean of its positions."""
    ranked.sort(key=lambda r: (-round(r.fs, SCORE_DIGITS), r.method, r.line, r.variable))
    position = 0
    while position < len(ranked):
        end = position
        score = round(ranked[position].fs, SCORE_DIGITS)
        while end + 1 < len(ranked) and round(ranked[end + 1].fs, SCORE_DIGITS) == score:
            end += 1
        shared = (position + 1 + end + 1) / 2.0
        for item in ranked[position:end + 1]:
            item.rank = shared
        position = end + 1
    return ranked


def global_rank(results: Sequence[MethodResult], use_method_score: bool = True) -> List[RankedVariable]:
    ranked: List[RankedVariable] = []
    for result in results:
        ranked.extend(score_method(result, use_method_score))
    assign_average_ranks(ranked)
    logger.info(f"Ranked {len(ranked)} variable(s) across {len(results)} method(s)")
    return ranked


def report_lines(ranked: Iterable[RankedVariable]) -> List[str]:
    return [r.to_line() for r in ranked]


def report_json(ranked: Iterable[RankedVariable]) -> str:
    return json.dumps([r.to_dict() for r in ranked], indent=2, sort_keys=True)


def load_report_json(text: str) -> List[RankedVariable]:
    return [RankedVariable.from_dict(item) for item in json.loads(text)]
