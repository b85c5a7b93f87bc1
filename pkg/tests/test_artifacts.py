#!/usr/bin/env python3
"""
Tests for the stage artifact store.
"""

from vardt.artifacts import ArtifactStore, atomic_write
from vardt.runtime import run_suite


class TestAtomicWrite:
    """Temporary-file-then-rename writes."""

    def test_creates_parents_and_replaces(self, tmp_path):
        target = tmp_path / "a" / "b" / "file.txt"
        atomic_write(target, "first\n")
        atomic_write(target, "second\n")
        assert target.read_text(encoding="utf-8") == "second\n"
        assert [p.name for p in target.parent.iterdir()] == ["file.txt"]


class TestArtifactStore:
    """Stage files of one run directory."""

    def setup_method(self):
        self.lines = ["1 createNumber 1.000000"]

    def test_stage_files(self, tmp_path):
        store = ArtifactStore(tmp_path / "run")
        store.write_methods(self.lines)
        store.write_slice("createNumber", ["expPos@7"])
        store.write_trees("createNumber", ["# tree 1"])
        store.write_ranking(["1 x"], "[]")
        assert store.read_text("methods.txt") == "1 createNumber 1.000000\n"
        assert store.exists("slices/createNumber.txt")
        assert store.exists("trees/createNumber.txt")
        assert store.read_json("ranking.json") == []

    def test_traces_round_trip(self, tmp_path, lang27):
        traces = run_suite(lang27.buggy, lang27.suite)
        store = ArtifactStore(tmp_path)
        store.write_traces(traces)
        restored = store.read_traces()
        assert [t.test_id for t in restored] == ["t1", "t2", "t3", "t4"]
        assert [t.label for t in restored] == [t.label for t in traces]

    def test_report_and_summary(self, tmp_path):
        store = ArtifactStore(tmp_path)
        written = store.write_report("metrics", ["Top-1: 1/1"], {"top": 1})
        assert [p.name for p in written] == ["metrics.txt", "metrics.json"]
        assert store.write_report("plain", ["x"]) == [tmp_path / "plain.txt"]
        summary = store.summary()
        assert summary["success"] is True
        assert summary["files"] == ["metrics.txt", "metrics.json", "plain.txt"]
