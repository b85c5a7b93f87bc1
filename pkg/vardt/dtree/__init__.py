"""
Decision-tree model: feature tables, prioritization and multi-tree building.
"""

from .features import Column, ColumnKind, FeatureTable, build_feature_table
from .metrics import entropy, gain_ratio, gini, pearson, weighted_gini
from .model import (
    DecisionTree, DependencyPenalty, PriorityScore, SplitPredicate, build_model, build_tree,
    calculate_condition, dep_score, prioritize_vars,
)
from .render import render_model, render_priorities, render_tree

__all__ = [
    "Column",
    "ColumnKind",
    "DecisionTree",
    "DependencyPenalty",
    "FeatureTable",
    "PriorityScore",
    "SplitPredicate",
    "build_feature_table",
    "build_model",
    "build_tree",
    "calculate_condition",
    "dep_score",
    "entropy",
    "gain_ratio",
    "gini",
    "pearson",
    "prioritize_vars",
    "render_model",
    "render_priorities",
    "render_tree",
    "weighted_gini",
]
