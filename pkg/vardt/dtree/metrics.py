#!/usr/bin/env python3
"""
Impurity and association measures used to rank and split columns.

Labels are encoded PASS=0 / FAIL=1.  Missing values are ``None``; gain
computations give them a group of their own, Pearson drops them pairwise.
"""

import logging
import math
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

UNOBSERVED = "<unobserved>"


def entropy(labels: Sequence[int]) -> float:
    labels = np.asarray(labels, dtype=int)
    if labels.size == 0:
        return 0.0
    probs = np.bincount(labels, minlength=2) / labels.size
    probs = probs[probs > 0]
    return float(-np.sum(probs * np.log2(probs)))


def gini(labels: Sequence[int]) -> float:
    labels = np.asarray(labels, dtype=int)
    if labels.size == 0:
        return 0.0
    probs = np.bincount(labels, minlength=2) / labels.size
    return float(1.0 - np.sum(probs ** 2))


def weighted_gini(groups: Sequence[Sequence[int]]) -> float:
    """Post-split impurity: sum of |D_c|/|D| * gini(D_c)."""
    total = sum(len(g) for g in groups)
    if total == 0:
        return 0.0
    return float(sum(len(g) / total * gini(g) for g in groups if len(g)))


def split_scores(groups: Sequence[Sequence[int]]) -> Tuple[float, float]:
    """(information gain, gain ratio) of partitioning the union of ``groups``."""
    groups = [list(g) for g in groups if len(g)]
    everything = [label for g in groups for label in g]
    total = len(everything)
    if total == 0 or len(groups) < 2:
        return 0.0, 0.0
    weights = np.array([len(g) / total for g in groups])
    gain = entropy(everything) - float(np.sum(weights * np.array([entropy(g) for g in groups])))
    split_info = float(-np.sum(weights * np.log2(weights)))
    if split_info == 0:
        return gain, 0.0
    return gain, gain / split_info


def group_labels(values: Sequence[Optional[Hashable]], labels: Sequence[int],
                 key=lambda v: v) -> Dict[Hashable, List[int]]:
    groups: Dict[Hashable, List[int]] = {}
    for value, label in zip(values, labels):
        branch = UNOBSERVED if value is None else key(value)
        groups.setdefault(branch, []).append(label)
    return groups


def candidate_thresholds(values: Sequence[Optional[float]]) -> List[float]:
    """Midpoints between adjacent distinct observed values, ascending."""
    distinct = np.unique(np.array([v for v in values if v is not None], dtype=float))
    if distinct.size < 2:
        return []
    return [float(t) for t in (distinct[:-1] + distinct[1:]) / 2.0]


def threshold_groups(values: Sequence[Optional[float]], labels: Sequence[int],
                     threshold: float) -> List[List[int]]:
    below, above, missing = [], [], []
    for value, label in zip(values, labels):
        if value is None:
            missing.append(label)
        elif value <= threshold:
            below.append(label)
        else:
            above.append(label)
    return [below, above, missing]


def best_threshold(values: Sequence[Optional[float]], labels: Sequence[int],
                   exclude: Sequence[float] = ()) -> Optional[Tuple[float, float, float]]:
    """(threshold, gain, gain ratio) maximizing information gain; ties go to the smallest threshold."""
    best: Optional[Tuple[float, float, float]] = None
    for threshold in candidate_thresholds(values):
        if any(math.isclose(threshold, used) for used in exclude):
            continue
        gain, ratio = split_scores(threshold_groups(values, labels, threshold))
        if best is None or round(gain, 12) > round(best[1], 12):
            best = (threshold, gain, ratio)
    return best


def gain_ratio(values: Sequence[Optional[object]], labels: Sequence[int], numeric: bool) -> float:
    """C4.5 gain ratio of the column's best split; 0 for fewer than two distinct observed values."""
    observed = {v for v in values if v is not None}
    if len(observed) < 2:
        return 0.0
    if numeric:
        best = best_threshold(values, labels)
        return best[2] if best else 0.0
    return split_scores(list(group_labels(values, labels).values()))[1]


def pearson(values: Sequence[Optional[float]], labels: Sequence[int]) -> float:
    """|r| over rows where the value is present; 0 when either side is constant."""
    pairs = [(float(v), float(l)) for v, l in zip(values, labels) if v is not None]
    if len(pairs) < 2:
        logger.debug(f"Pearson on {len(pairs)} usable pair(s); returning 0")
        return 0.0
    x, y = np.array(pairs).T
    dx, dy = x - x.mean(), y - y.mean()
    denominator = math.sqrt(float(np.sum(dx * dx)) * float(np.sum(dy * dy)))
    if denominator == 0:
        return 0.0
    return abs(float(np.sum(dx * dy)) / denominator)
