#!/usr/bin/env python3
"""
Tests for the seeded-bug corpus and its loaders.
"""

from collections import Counter

import pytest

from vardt.errors import VarDTError
from vardt.evalkit import find_bug, seed_corpus, validate_bug
from vardt.evalkit.corpus import load_manifest
from vardt.frontend import transform_gsa

BUGS = seed_corpus()


class TestCorpus:
    """Manifest-level invariants."""

    def test_size_and_categories(self):
        assert len(BUGS) >= 20
        counts = Counter(bug.category for bug in BUGS)
        assert set(counts) == {"rule-1", "rule-2", "rule-3", "rule-4"}
        assert all(count >= 4 for count in counts.values())

    def test_unique_ids(self):
        ids = [bug.bug_id for bug in BUGS]
        assert len(ids) == len(set(ids))

    def test_some_bugs_ship_patches(self):
        patched = [bug.bug_id for bug in BUGS if bug.has_patches]
        assert "lang27" in patched
        assert len(patched) >= 5

    def test_find_bug(self):
        assert find_bug("clamp").faulty_method == "clamp"
        with pytest.raises(VarDTError):
            find_bug("no-such-bug")

    def test_custom_root(self, tmp_path):
        (tmp_path / "manifest.yaml").write_text("bugs:\n  - id: missing\n", encoding="utf-8")
        assert load_manifest(tmp_path) == [{"id": "missing"}]
        with pytest.raises(VarDTError):
            seed_corpus(tmp_path)


@pytest.mark.parametrize("bug", BUGS, ids=lambda b: b.bug_id)
class TestBug:
    """Every bug is reproducible and its truth refers to real variables."""

    def test_validates(self, bug):
        assert validate_bug(bug) == []

    def test_category_rule_is_listed(self, bug):
        rule = int(bug.category.split("-")[1])
        assert rule in bug.truth.rules()

    def test_truth_temporaries_exist(self, bug):
        source_map = transform_gsa(bug.buggy).source_map
        for entry in bug.truth.fault_relevant:
            if entry.name.startswith("__t"):
                assert entry.name in source_map
                assert source_map[entry.name].line in entry.lines

    def test_truth_lines_belong_to_the_program(self, bug):
        lines = {line for method in bug.buggy.methods for line in method.lines}
        for entry in bug.truth.fault_relevant:
            assert entry.lines & lines
