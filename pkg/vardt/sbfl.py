#!/usr/bin/env python3
"""
Spectrum-based fault localization: the method-level first stage.

A coverage matrix counts, per method and per method line, how many failed
and passed tests did or did not execute it.  Ochiai (the default) or
DStar turns those counts into a suspiciousness score, and the top-K
methods move on to variable-level analysis.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from .config import SbflFormula
from .errors import NothingToLocalizeError
from .runtime.traces import TestRunTrace

logger = logging.getLogger(__name__)

DSTAR_SENTINEL = math.inf


@dataclass(frozen=True)
class Spectrum:
    ef: int
    ep: int
    nf: int
    np: int

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.ef, self.ep, self.nf, self.np)


@dataclass
class CoverageMatrix:
    """Spectra per method and per ``method:line``."""
    total_failed: int
    total_passed: int
    methods: Dict[str, Spectrum] = field(default_factory=dict)
    lines: Dict[str, Spectrum] = field(default_factory=dict)

    def spectrum(self, entity: str) -> Spectrum:
        if entity in self.methods:
            return self.methods[entity]
        if entity in self.lines:
            return self.lines[entity]
        return Spectrum(0, 0, self.total_failed, self.total_passed)


@dataclass(frozen=True)
class MethodScore:
    method: str
    score: float


@dataclass
class MethodScoreList:
    entries: List[MethodScore] = field(default_factory=list)

    def score_of(self, method: str) -> float:
        for entry in self.entries:
            if entry.method == method:
                return entry.score
        return 0.0

    def methods(self) -> List[str]:
        return [e.method for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_lines(self) -> List[str]:
        return [f"{rank} {e.method} {e.score:.6f}" for rank, e in enumerate(self.entries, start=1)]


def build_matrix(traces: Iterable[TestRunTrace], methods: Optional[Iterable[str]] = None) -> CoverageMatrix:
    """Count spectra; ``methods`` adds entities no test covered."""
    traces = list(traces)
    failed = [t for t in traces if t.failed]
    passed = [t for t in traces if not t.failed]
    if not failed:
        raise NothingToLocalizeError()

    method_cover: Dict[str, List[int]] = {m: [0, 0] for m in (methods or [])}
    line_cover: Dict[str, List[int]] = {}
    for trace in traces:
        slot = 0 if trace.failed else 1
        for method, lines in trace.per_method.items():
            if not lines:
                continue
            method_cover.setdefault(method, [0, 0])[slot] += 1
            for line in sorted(set(lines)):
                line_cover.setdefault(f"{method}:{line}", [0, 0])[slot] += 1

    tf, tp = len(failed), len(passed)

    def spectra(cover: Dict[str, List[int]]) -> Dict[str, Spectrum]:
        return {e: Spectrum(ef, ep, tf - ef, tp - ep) for e, (ef, ep) in sorted(cover.items())}

    matrix = CoverageMatrix(tf, tp, spectra(method_cover), spectra(line_cover))
    logger.info(f"Coverage matrix: {len(matrix.methods)} method(s), {len(matrix.lines)} line(s), {tf} failed / {tp} passed")
    return matrix


def ochiai(ef: int, ep: int, nf: int, np_: int) -> float:
    if ef == 0:
        return 0.0
    denominator = math.sqrt((ef + nf) * (ef + ep))
    if denominator == 0:
        return 0.0
    return ef / denominator


def dstar(ef: int, ep: int, nf: int, np_: int, star: int = 2) -> float:
    """ef^star / (ep + nf); ``DSTAR_SENTINEL`` when the denominator vanishes."""
    if ef == 0:
        return 0.0
    denominator = ep + nf
    if denominator == 0:
        return DSTAR_SENTINEL
    return float(ef ** star) / denominator


FORMULAS: Dict[SbflFormula, Callable[..., float]] = {
    SbflFormula.OCHIAI: ochiai,
    SbflFormula.DSTAR: dstar,
}


def score_entities(spectra: Dict[str, Spectrum], formula: SbflFormula) -> Dict[str, float]:
    """Raw scores with sentinels resolved and everything divided by the maximum."""
    compute = FORMULAS[SbflFormula(formula)]
    names = sorted(spectra)
    raw = np.array([compute(*spectra[n].as_tuple()) for n in names], dtype=float)
    if raw.size == 0:
        return {}

    finite = raw[np.isfinite(raw)]
    ceiling = float(finite.max()) if finite.size and finite.max() > 0 else 1.0
    raw[~np.isfinite(raw)] = ceiling

    peak = float(raw.max())
    if peak > 0:
        raw = raw / peak
    return {name: float(score) for name, score in zip(names, raw)}


def rank_methods(matrix: CoverageMatrix, formula: SbflFormula = SbflFormula.OCHIAI, k: int = 10) -> MethodScoreList:
    scores = score_entities(matrix.methods, formula)
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:k]
    result = MethodScoreList([MethodScore(m, s) for m, s in ordered])
    logger.info(f"Top-{k} methods by {SbflFormula(formula).value}: "
                + ", ".join(f"{e.method}={e.score:.3f}" for e in result))
    return result


def rank_lines(matrix: CoverageMatrix, formula: SbflFormula = SbflFormula.OCHIAI) -> List[Tuple[str, float]]:
    """Line-level ranking; used for reporting and sanity checks."""
    scores = score_entities(matrix.lines, formula)
    return sorted(scores.items(), key=lambda item: (-item[1], item[0]))
