#!/usr/bin/env python3
"""
Scoring formulas checked against plain reference computations on
randomized small inputs: depScore, Pearson, gain ratio, Gini, DS and FS.
"""

import math
import random

import pytest

from vardt.dtree import (
    Column, ColumnKind, DependencyPenalty, FeatureTable, build_model, dep_score, gain_ratio, gini, pearson,
    weighted_gini,
)
from vardt.frontend import CONTROL, DATA, DependencyGraph, VarOccurrence
from vardt.ranker import MethodResult, final_score, score_method
from vardt.runtime.traces import Label

TRIALS = 120
REL = 1e-9


def close(expected):
    return pytest.approx(expected, rel=REL, abs=1e-12)


def reference_entropy(labels):
    if not labels:
        return 0.0
    p = sum(labels) / len(labels)
    return -sum(q * math.log2(q) for q in (p, 1 - p) if q > 0)


def reference_gini(labels):
    if not labels:
        return 0.0
    p = sum(labels) / len(labels)
    return 1.0 - p * p - (1 - p) * (1 - p)


def reference_split(groups):
    groups = [g for g in groups if g]
    everything = [label for g in groups for label in g]
    if len(groups) < 2:
        return 0.0, 0.0
    total = len(everything)
    gain = reference_entropy(everything) - sum(len(g) / total * reference_entropy(g) for g in groups)
    split_info = -sum(len(g) / total * math.log2(len(g) / total) for g in groups)
    return gain, (gain / split_info if split_info else 0.0)


def reference_gain_ratio(values, labels, numeric):
    observed = sorted({v for v in values if v is not None})
    if len(observed) < 2:
        return 0.0
    if not numeric:
        groups = {}
        for value, label in zip(values, labels):
            groups.setdefault("<none>" if value is None else str(value), []).append(label)
        return reference_split(list(groups.values()))[1]
    best = None
    for low, high in zip(observed, observed[1:]):
        threshold = (low + high) / 2.0
        groups = [[], [], []]
        for value, label in zip(values, labels):
            groups[2 if value is None else 0 if value <= threshold else 1].append(label)
        gain, ratio = reference_split(groups)
        if best is None or round(gain, 12) > round(best[0], 12):
            best = (gain, ratio)
    return best[1]


def reference_pearson(values, labels):
    pairs = [(float(v), float(l)) for v, l in zip(values, labels) if v is not None]
    if len(pairs) < 2:
        return 0.0
    n = len(pairs)
    mx = sum(x for x, _ in pairs) / n
    my = sum(y for _, y in pairs) / n
    sxy = sum((x - mx) * (y - my) for x, y in pairs)
    sxx = sum((x - mx) ** 2 for x, _ in pairs)
    syy = sum((y - my) ** 2 for _, y in pairs)
    if sxx == 0 or syy == 0:
        return 0.0
    return abs(sxy / math.sqrt(sxx * syy))


def reference_reach(adjacency, start):
    seen, frontier = set(), list(adjacency.get(start, ()))
    while frontier:
        node = frontier.pop(0)
        if node not in seen:
            seen.add(node)
            frontier.extend(adjacency.get(node, ()))
    return seen


def reference_dep_score(v, columns, adjacency, factor):
    count = 0
    for x in columns:
        if x.key == v.key:
            continue
        reached = set()
        for member in x.members:
            reached |= reference_reach(adjacency, member)
        if reached & v.members:
            count += 1
    return factor ** count


def random_values(rng, n, kind):
    def missing():
        return rng.random() < 0.15

    if kind == ColumnKind.NUMERIC:
        return [None if missing() else rng.randint(-3, 5) for _ in range(n)]
    if kind == ColumnKind.BOOLEAN:
        return [None if missing() else rng.random() < 0.5 for _ in range(n)]
    return [None if missing() else rng.choice(["a", "b", "c"]) for _ in range(n)]


def random_table(rng):
    n = rng.randint(3, 9)
    rows = [f"r{i}" for i in range(n)]
    labels = [Label.FAIL, Label.PASS] + [rng.choice([Label.FAIL, Label.PASS]) for _ in range(n - 2)]
    rng.shuffle(labels)
    data = FeatureTable("m", rows, dict(zip(rows, labels)))
    for index in range(rng.randint(1, 5)):
        kind = rng.choice([ColumnKind.NUMERIC, ColumnKind.NUMERIC, ColumnKind.BOOLEAN, ColumnKind.NOMINAL])
        key = VarOccurrence(f"v{index}", index + 2)
        values = random_values(rng, n, kind)
        if all(v is None for v in values):
            values[0] = {ColumnKind.NUMERIC: 0, ColumnKind.BOOLEAN: True, ColumnKind.NOMINAL: "a"}[kind]
        data.columns[key] = Column(key=key, kind=kind, values=dict(zip(rows, values)), members=frozenset({key}))
    return data


def random_graph(rng, columns):
    graph = DependencyGraph("m")
    adjacency = {}
    occurrences = [m for c in columns for m in c.members]
    for source in occurrences:
        for target in occurrences:
            if source != target and rng.random() < 0.25:
                graph.add_edge(source, target, rng.choice([DATA, CONTROL]))
                adjacency.setdefault(source, set()).add(target)
    return graph, adjacency


def fail_distance(node, labels):
    if node.is_leaf:
        return 0 if any(labels[r] is Label.FAIL for r in node.rows) else None
    below = [fail_distance(child, labels) for _, child in node.children]
    below = [d for d in below if d is not None]
    return 1 + min(below) if below else None


def reference_ds(column, trees, labels, dep):
    terms = []
    for tree in trees:
        for node in tree.nodes():
            if node.predicate is None or node.predicate.variable != column.key:
                continue
            distance = fail_distance(node, labels)
            if not distance:
                terms.append(0.0)
                continue
            size = len(node.rows)
            impurity = sum(
                len(child.rows) / size * reference_gini([1 if labels[r] is Label.FAIL else 0 for r in child.rows])
                for _, child in node.children
            )
            terms.append((1.0 - impurity) * math.sqrt(size) / distance)
    return (max(terms) if terms else 0.0) + dep


class TestImpurity:
    """Gini, gain ratio and Pearson against textbook formulas."""

    def test_gini(self):
        rng = random.Random(7)
        for _ in range(TRIALS):
            groups = [[rng.randint(0, 1) for _ in range(rng.randint(0, 6))] for _ in range(rng.randint(1, 4))]
            for group in groups:
                assert gini(group) == close(reference_gini(group))
            total = sum(len(g) for g in groups)
            expected = sum(len(g) / total * reference_gini(g) for g in groups) if total else 0.0
            assert weighted_gini(groups) == close(expected)

    @pytest.mark.parametrize("kind", [ColumnKind.NUMERIC, ColumnKind.BOOLEAN, ColumnKind.NOMINAL])
    def test_gain_ratio(self, kind):
        rng = random.Random(11)
        numeric = kind == ColumnKind.NUMERIC
        for _ in range(TRIALS):
            n = rng.randint(2, 10)
            labels = [rng.randint(0, 1) for _ in range(n)]
            values = random_values(rng, n, kind)
            if not numeric:
                values = [None if v is None else str(v) for v in values]
            assert gain_ratio(values, labels, numeric=numeric) == close(
                reference_gain_ratio(values, labels, numeric))

    def test_pearson(self):
        rng = random.Random(13)
        for _ in range(TRIALS):
            n = rng.randint(1, 10)
            labels = [rng.randint(0, 1) for _ in range(n)]
            values = [None if rng.random() < 0.2 else rng.randint(-50, 50) for _ in range(n)]
            assert pearson(values, labels) == close(reference_pearson(values, labels))


class TestDependencyScore:
    """depScore against a breadth-first search over an independent adjacency map."""

    def test_random_graphs(self):
        rng = random.Random(17)
        for _ in range(TRIALS):
            columns = []
            line = 1
            for index in range(rng.randint(1, 6)):
                members = []
                for _ in range(rng.randint(1, 2)):
                    members.append(VarOccurrence(f"v{index}", line))
                    line += 1
                columns.append(Column(key=members[0], kind=ColumnKind.NUMERIC, values={},
                                      members=frozenset(members)))
            graph, adjacency = random_graph(rng, columns)
            factor = rng.uniform(0.05, 1.0)
            subset = [c for c in columns if rng.random() < 0.6] or columns[:1]
            penalty = DependencyPenalty(graph, columns, factor)
            for v in columns:
                expected = reference_dep_score(v, columns, adjacency, factor)
                assert dep_score(v, graph, columns, factor) == close(expected)
                assert penalty.score(v) == close(expected)
                assert penalty.score(v, subset) == close(reference_dep_score(v, subset, adjacency, factor))
                assert penalty.for_list(subset).score(v) == penalty.score(v, subset)


class TestScores:
    """DS and FS of every column of randomly built models."""

    def test_discriminative_and_final_scores(self):
        rng = random.Random(19)
        for _ in range(TRIALS):
            data = random_table(rng)
            columns = data.column_list()
            graph, adjacency = random_graph(rng, columns)
            factor = rng.uniform(0.1, 1.0)
            method_score = rng.uniform(0.0, 1.0)
            result = MethodResult(
                method="m",
                method_score=method_score,
                columns=columns,
                trees=build_model(data, graph, factor),
                penalty=DependencyPenalty(graph, columns, factor),
                labels=data.labels,
            )
            by_key = {c.key: c for c in columns}
            for ranked in score_method(result):
                column = by_key[VarOccurrence(ranked.variable, ranked.line)]
                dep = reference_dep_score(column, columns, adjacency, factor)
                ds = reference_ds(column, result.trees, data.labels, dep)
                assert ranked.ds == close(ds)
                assert ranked.fs == close(ds * method_score * method_score)

    def test_final_score_without_method_score(self):
        rng = random.Random(23)
        for _ in range(TRIALS):
            ds, ms = rng.uniform(0, 5), rng.uniform(0, 1)
            assert final_score(ds, ms) == close(ds * ms ** 2)
            assert final_score(ds, ms, use_method_score=False) == ds
