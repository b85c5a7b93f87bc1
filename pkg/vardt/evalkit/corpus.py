#!/usr/bin/env python3
"""
The seeded-bug corpus shipped under ``vardt/corpus``.

``manifest.yaml`` lists the bugs; each bug directory holds the buggy and
fixed programs, the shared test suite, the ground truth and, for some
bugs, a labelled patch set.  Sources are parsed lazily.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from ..errors import VarDTError
from ..frontend.parser import parse, parse_suite
from ..frontend.syntax import Program, TestCase
from ..patch_filter import PatchDiff, parse_patches
from ..runtime.profiler import run_suite
from .groundtruth import GroundTruth, parse_ground_truth

logger = logging.getLogger(__name__)

CORPUS_ROOT = Path(__file__).resolve().parent.parent / "corpus"
MANIFEST = "manifest.yaml"


@dataclass
class CorpusBug:
    bug_id: str
    directory: Path
    category: str = ""
    faulty_method: Optional[str] = None
    description: str = ""
    _cache: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def _read(self, name: str) -> str:
        return (self.directory / name).read_text(encoding="utf-8")

    def _cached(self, key: str, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def buggy_source(self) -> str:
        return self._read("buggy.mini")

    @property
    def fixed_source(self) -> str:
        return self._read("fixed.mini")

    @property
    def suite_source(self) -> str:
        return self._read("tests.mini")

    @property
    def buggy(self) -> Program:
        return self._cached("buggy", lambda: parse(self.buggy_source))

    @property
    def fixed(self) -> Program:
        return self._cached("fixed", lambda: parse(self.fixed_source))

    @property
    def suite(self) -> List[TestCase]:
        return self._cached("suite", lambda: parse_suite(self.suite_source))

    @property
    def truth(self) -> GroundTruth:
        return self._cached("truth", lambda: parse_ground_truth(self._read("truth.txt"), self.bug_id))

    @property
    def has_patches(self) -> bool:
        return (self.directory / "patches.txt").exists()

    @property
    def patches(self) -> List[PatchDiff]:
        if not self.has_patches:
            return []
        return self._cached("patches", lambda: parse_patches(self._read("patches.txt"), self.buggy))

    @property
    def buggy_path(self) -> Path:
        return self.directory / "buggy.mini"

    @property
    def suite_path(self) -> Path:
        return self.directory / "tests.mini"


def load_manifest(root: Union[str, Path, None] = None) -> List[Dict[str, Any]]:
    root = Path(root) if root is not None else CORPUS_ROOT
    with open(root / MANIFEST, "r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    entries = data.get("bugs", [])
    if not isinstance(entries, list):
        raise VarDTError(f"{root / MANIFEST}: 'bugs' must be a list")
    return entries


def seed_corpus(root: Union[str, Path, None] = None) -> List[CorpusBug]:
    """All bugs listed in the manifest, in manifest order."""
    root = Path(root) if root is not None else CORPUS_ROOT
    bugs = []
    for entry in load_manifest(root):
        bug_id = str(entry["id"])
        directory = root / entry.get("directory", bug_id)
        if not directory.is_dir():
            raise VarDTError(f"corpus bug {bug_id}: missing directory {directory}")
        bugs.append(CorpusBug(
            bug_id=bug_id,
            directory=directory,
            category=str(entry.get("category", "")),
            faulty_method=entry.get("faulty_method"),
            description=str(entry.get("description", "")),
        ))
    logger.info(f"Loaded {len(bugs)} corpus bug(s) from {root}")
    return bugs


def find_bug(bug_id: str, root: Union[str, Path, None] = None) -> CorpusBug:
    for bug in seed_corpus(root):
        if bug.bug_id == bug_id:
            return bug
    raise VarDTError(f"no corpus bug named {bug_id!r}")


def validate_bug(bug: CorpusBug, step_budget: int = 100_000) -> List[str]:
    """Problems with one bug; an empty list means the bug is well formed."""
    problems: List[str] = []
    try:
        buggy_traces = run_suite(bug.buggy, bug.suite, step_budget=step_budget)
        fixed_traces = run_suite(bug.fixed, bug.suite, step_budget=step_budget)
        logger.debug(f"{bug.bug_id}: {len(bug.truth.fault_relevant)} truth variable(s), {len(bug.patches)} patch(es)")
    except VarDTError as error:
        return [f"{bug.bug_id}: {error}"]

    if not any(t.failed for t in buggy_traces):
        problems.append(f"{bug.bug_id}: no test fails on the buggy program")
    failing_fixed = [t.test_id for t in fixed_traces if t.failed]
    if failing_fixed:
        problems.append(f"{bug.bug_id}: fixed program fails {', '.join(failing_fixed)}")

    method = bug.faulty_method
    if method is not None:
        if not bug.buggy.has_method(method):
            problems.append(f"{bug.bug_id}: faulty method {method} is not in the buggy program")
        else:
            rows = [t for t in buggy_traces if t.executed(method)]
            failed = sum(1 for t in rows if t.failed)
            if len(rows) < 3 or failed == 0 or failed == len(rows):
                problems.append(f"{bug.bug_id}: {method} covered by {len(rows)} test(s), {failed} failing")

    for problem in problems:
        logger.warning(problem)
    return problems
