#!/usr/bin/env python3
"""
Plain-text tree export, one node per line in pre-order:

    <depth> <predicate|LEAF> tests=[ids] labels={P:x,F:y}

Children follow their parent in branch order (<=, >, true, false, the
sorted nominal values, then the unobserved branch).
"""

from typing import Dict, Iterable, List

from ..runtime.traces import Label
from .model import DecisionTree, PriorityScore


def render_tree(tree: DecisionTree, labels: Dict[str, Label]) -> List[str]:
    lines: List[str] = []

    def visit(node: DecisionTree, depth: int) -> None:
        failed = sum(1 for r in node.rows if labels[r] is Label.FAIL)
        head = "LEAF" if node.is_leaf else str(node.predicate)
        lines.append(f"{depth} {head} tests=[{','.join(node.rows)}] labels={{P:{len(node.rows) - failed},F:{failed}}}")
        for _, child in node.children:
            visit(child, depth + 1)

    visit(tree, 0)
    return lines


def render_model(trees: Iterable[DecisionTree], labels: Dict[str, Label]) -> List[str]:
    lines: List[str] = []
    for index, tree in enumerate(trees, start=1):
        lines.append(f"# tree {index}")
        lines.extend(render_tree(tree, labels))
    return lines


def render_priorities(scores: Iterable[PriorityScore]) -> List[str]:
    return [f"{rank} {score}" for rank, score in enumerate(scores, start=1)]
