#!/usr/bin/env python3
"""
Stage artifact storage.

Every stage output lands in one run directory so that a later stage can
be rerun from the files of the earlier ones:

    methods.txt           ranked suspicious methods
    slices/<method>.txt   merged backward slice
    traces.jsonl          profiled test runs
    trees/<method>.txt    decision trees and root priorities
    ranking.txt / .json   the global variable ranking

Writes are atomic: a temporary file in the target directory is renamed
over the destination.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .runtime.traces import TestRunTrace, dumps_trace, read_traces

logger = logging.getLogger(__name__)


def atomic_write(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_path = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as out:
            out.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
    return path


def _text(lines: Iterable[str]) -> str:
    return "".join(f"{line}\n" for line in lines)


class ArtifactStore:
    """Reads and writes the files of one localization or evaluation run."""

    def __init__(self, out_dir: Union[str, Path]):
        self.root = Path(out_dir)
        self.logger = logging.getLogger(__name__)
        self.written: List[Path] = []

    def path(self, *parts: str) -> Path:
        return self.root.joinpath(*parts)

    def write_text(self, relative: str, text: str) -> Path:
        target = atomic_write(self.path(relative), text)
        self.written.append(target)
        self.logger.debug(f"Wrote artifact {target}")
        return target

    def write_lines(self, relative: str, lines: Iterable[str]) -> Path:
        return self.write_text(relative, _text(lines))

    def write_json(self, relative: str, data: Any) -> Path:
        return self.write_text(relative, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def read_text(self, relative: str) -> str:
        return self.path(relative).read_text(encoding="utf-8")

    def read_json(self, relative: str) -> Any:
        return json.loads(self.read_text(relative))

    def exists(self, relative: str) -> bool:
        return self.path(relative).exists()

    # -- stage files ------------------------------------------------------

    def write_methods(self, lines: Iterable[str]) -> Path:
        return self.write_lines("methods.txt", lines)

    def write_slice(self, method: str, lines: Iterable[str]) -> Path:
        return self.write_lines(f"slices/{method}.txt", lines)

    def write_traces(self, traces: Iterable[TestRunTrace]) -> Path:
        return self.write_text("traces.jsonl", "".join(dumps_trace(t) + "\n" for t in traces))

    def read_traces(self) -> List[TestRunTrace]:
        return read_traces(self.path("traces.jsonl"))

    def write_trees(self, method: str, lines: Iterable[str]) -> Path:
        return self.write_lines(f"trees/{method}.txt", lines)

    def write_ranking(self, lines: Iterable[str], payload: str) -> List[Path]:
        return [self.write_lines("ranking.txt", lines), self.write_text("ranking.json", payload)]

    def write_report(self, name: str, lines: Iterable[str], data: Optional[Dict[str, Any]] = None) -> List[Path]:
        """Human text plus, when given, the machine-readable twin."""
        written = [self.write_lines(f"{name}.txt", lines)]
        if data is not None:
            written.append(self.write_json(f"{name}.json", data))
        return written

    def summary(self) -> Dict[str, Any]:
        return {
            "success": True,
            "out_dir": str(self.root),
            "files": [str(p.relative_to(self.root)) for p in self.written],
        }
