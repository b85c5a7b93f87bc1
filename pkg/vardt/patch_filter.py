#!/usr/bin/env python3
"""
Patch filtering with localized variables.

A candidate patch is kept when it modifies or inserts at least one of the
Top-N ranked variables and filtered otherwise.  Patch files use a small
structured hunk format::

    PATCH <id> LABEL <correct|incorrect>
    METHOD <name>
    - <line> <removed statement>
    + <inserted statement>

Labels only feed the evaluation report; filtering never looks at them.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import MiniLangSyntaxError, NothingToLocalizeError, PatchFormatError
from .frontend.dependence import analyze_method
from .frontend.lexer import tokenize
from .frontend.syntax import OccurrenceKind, Program, feature_base
from .ranker import RankedVariable
from .slicer import governing_guards

logger = logging.getLogger(__name__)

CORRECT = "correct"
INCORRECT = "incorrect"

_HEADER = re.compile(r"^PATCH\s+(?P<id>\S+)(?:\s+LABEL\s+(?P<label>\S+))?$")
_METHOD = re.compile(r"^METHOD\s+(?P<name>\S+)$")
_REMOVED = re.compile(r"^-\s*(?P<line>\d+)\s+(?P<text>.*)$")
_INSERTED = re.compile(r"^\+\s?(?P<text>.*)$")


@dataclass(frozen=True)
class Hunk:
    method: str
    removed: Tuple[Tuple[int, str], ...] = ()
    inserted: Tuple[str, ...] = ()

    @property
    def removed_lines(self) -> Set[int]:
        return {line for line, _ in self.removed}


@dataclass
class PatchDiff:
    patch_id: str
    label: Optional[str] = None
    hunks: List[Hunk] = field(default_factory=list)

    @property
    def methods(self) -> List[str]:
        return sorted({h.method for h in self.hunks})


@dataclass
class FilterReport:
    n_fi: int = 0
    n_fc: int = 0
    n_ni: int = 0
    n_nc: int = 0
    unlabeled: int = 0

    @property
    def total(self) -> int:
        return self.n_fi + self.n_fc + self.n_ni + self.n_nc + self.unlabeled

    @property
    def precision(self) -> Optional[float]:
        filtered = self.n_fi + self.n_fc
        return self.n_fi / filtered if filtered else None

    @property
    def recall(self) -> Optional[float]:
        incorrect = self.n_fi + self.n_ni
        return self.n_fi / incorrect if incorrect else None

    def kept_summary(self) -> str:
        """``total(correct)`` of the kept patches."""
        return f"{self.n_ni + self.n_nc}({self.n_nc})"

    def to_dict(self) -> dict:
        return {
            "n_fi": self.n_fi,
            "n_fc": self.n_fc,
            "n_ni": self.n_ni,
            "n_nc": self.n_nc,
            "unlabeled": self.unlabeled,
            "precision": self.precision,
            "recall": self.recall,
        }

    def to_lines(self) -> List[str]:
        def pct(value: Optional[float]) -> str:
            return "undefined" if value is None else f"{value * 100:.1f}%"

        return [
            f"filtered incorrect (N_fi): {self.n_fi}",
            f"filtered correct (N_fc): {self.n_fc}",
            f"kept incorrect (N_ni): {self.n_ni}",
            f"kept correct (N_nc): {self.n_nc}",
            f"kept: {self.kept_summary()}",
            f"precision: {pct(self.precision)}",
            f"recall: {pct(self.recall)}",
        ]

    def __add__(self, other: "FilterReport") -> "FilterReport":
        return FilterReport(self.n_fi + other.n_fi, self.n_fc + other.n_fc, self.n_ni + other.n_ni,
                            self.n_nc + other.n_nc, self.unlabeled + other.unlabeled)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def parse_patches(text: str, program: Optional[Program] = None) -> List[PatchDiff]:
    """Parse a patch file; with ``program``, hunk methods and lines are checked against it."""
    patches: List[PatchDiff] = []
    current: Optional[PatchDiff] = None
    method: Optional[str] = None
    removed: List[Tuple[int, str]] = []
    inserted: List[str] = []

    def close_hunk() -> None:
        nonlocal removed, inserted
        if current is not None and method is not None and (removed or inserted):
            current.hunks.append(Hunk(method, tuple(removed), tuple(inserted)))
        removed, inserted = [], []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        header = _HEADER.match(line)
        if header:
            close_hunk()
            label = header.group("label")
            if label is not None and label not in (CORRECT, INCORRECT):
                raise PatchFormatError(f"line {number}: unknown label {label!r}")
            current = PatchDiff(header.group("id"), label)
            patches.append(current)
            method = None
            continue
        if current is None:
            raise PatchFormatError(f"line {number}: expected a PATCH header, got {line!r}")
        declared = _METHOD.match(line)
        if declared:
            close_hunk()
            method = declared.group("name")
            continue
        if method is None:
            raise PatchFormatError(f"line {number}: hunk line before any METHOD in patch {current.patch_id}")
        minus = _REMOVED.match(line)
        if minus:
            removed.append((int(minus.group("line")), minus.group("text")))
            continue
        plus = _INSERTED.match(line)
        if plus:
            inserted.append(plus.group("text"))
            continue
        raise PatchFormatError(f"line {number}: malformed hunk line {line!r}")
    close_hunk()

    ids = [p.patch_id for p in patches]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise PatchFormatError(f"duplicate patch ids: {', '.join(duplicates)}")
    if program is not None:
        for patch in patches:
            check_patch(patch, program)
    logger.debug(f"Parsed {len(patches)} patch(es)")
    return patches


def check_patch(patch: PatchDiff, program: Program) -> None:
    for hunk in patch.hunks:
        if not program.has_method(hunk.method):
            raise PatchFormatError(f"patch {patch.patch_id}: unknown method {hunk.method}")
        lines = set(program.method(hunk.method).lines)
        stray = sorted(hunk.removed_lines - lines)
        if stray:
            raise PatchFormatError(f"patch {patch.patch_id}: no statement of {hunk.method} on line(s) {stray}")


def load_patches(path: Union[str, Path], program: Optional[Program] = None) -> List[PatchDiff]:
    return parse_patches(Path(path).read_text(encoding="utf-8"), program)


# --------------------------------------------------------------------------
# Filtering
# --------------------------------------------------------------------------

def identifiers(text: str) -> Set[str]:
    """Variable names in a statement fragment; called names are skipped."""
    try:
        tokens = list(tokenize(text))
    except MiniLangSyntaxError:
        logger.debug(f"Could not tokenize {text!r}; falling back to a word scan")
        return set(re.findall(r"[A-Za-z_]\w*", text))
    names = set()
    for position, token in enumerate(tokens):
        if token.kind != "IDENT":
            continue
        following = tokens[position + 1] if position + 1 < len(tokens) else None
        if following is not None and following.text == "(":
            continue
        names.add(token.text)
    return names


class _HunkScope:
    """Everything one hunk touches, resolved against the transformed program."""

    def __init__(self, hunk: Hunk, program: Optional[Program]):
        self.method = hunk.method
        self.removed_lines = hunk.removed_lines
        self.names: Set[str] = set()
        for _, text in hunk.removed:
            self.names |= identifiers(text)
        for text in hunk.inserted:
            self.names |= identifiers(text)
        self.temporaries: Set[str] = set()
        if program is not None and program.transformed and program.has_method(hunk.method):
            facts = analyze_method(program.method(hunk.method))
            for line in self.removed_lines:
                self.temporaries |= {o.variable for o in facts.occurrences_at(line) if o.kind.is_temporary}
                self.temporaries |= {o.variable for o in governing_guards(facts, line)}

    def touches(self, variable: RankedVariable, program: Optional[Program]) -> bool:
        if variable.method != self.method:
            return False
        kind = OccurrenceKind(variable.kind)
        if kind.is_temporary:
            if variable.variable in self.temporaries:
                return True
            origin = program.source_map.get(variable.variable) if program is not None else None
            lines = {origin.line} if origin is not None else set(variable.lines)
            return bool(lines & self.removed_lines)
        if kind is OccurrenceKind.PREDICATE_FEATURE:
            return feature_base(variable.variable) in self.names
        return variable.variable in self.names


def involves(patch: PatchDiff, variables: Sequence[RankedVariable],
             program: Optional[Program] = None) -> bool:
    """True when any hunk modifies or inserts one of ``variables``.

    ``program`` should be the transformed buggy program; it lets a condition
    temporary match edits to the lines its branch governs.
    """
    if not variables:
        raise NothingToLocalizeError("involves() needs at least one localized variable")
    scopes = [_HunkScope(h, program) for h in patch.hunks]
    return any(scope.touches(v, program) for scope in scopes for v in variables)


def filter_patches(patches: Iterable[PatchDiff], variables: Sequence[RankedVariable],
                   program: Optional[Program] = None) -> Tuple[List[PatchDiff], List[PatchDiff], FilterReport]:
    kept: List[PatchDiff] = []
    filtered: List[PatchDiff] = []
    report = FilterReport()
    for patch in patches:
        keep = involves(patch, variables, program)
        (kept if keep else filtered).append(patch)
        if patch.label is None:
            report.unlabeled += 1
        elif patch.label == INCORRECT:
            if keep:
                report.n_ni += 1
            else:
                report.n_fi += 1
        elif keep:
            report.n_nc += 1
        else:
            report.n_fc += 1
        logger.debug(f"Patch {patch.patch_id}: {'kept' if keep else 'filtered'}")
    logger.info(f"Patch filter kept {len(kept)} and filtered {len(filtered)} of {report.total} patch(es)")
    return kept, filtered, report


def filter_table(patches: Sequence[PatchDiff], ranking: Sequence[RankedVariable],
                 program: Optional[Program] = None, top: Iterable[int] = (1, 3, 5, 10)) -> Dict[int, FilterReport]:
    """Filter reports for several cut-offs; Top-N is the first N entries of the ranked list."""
    return {n: filter_patches(patches, list(ranking[:n]), program)[2] for n in top}
