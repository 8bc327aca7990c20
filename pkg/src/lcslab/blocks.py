"""Gap statistics of a designated block under optimal alignments.

The measurement rule: among ALL optimal alignments of (x, y), find the one
putting the most (or fewest) block positions on gaps.  Realized exactly by a
dynamic program over lexicographic value pairs (LCS length, matched-in-block
count), encoded into a single integer per cell so rows stay vectorized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .sequences import Alignment, SymbolSequence, require_same_alphabet

MAXIMIZE_GAPS = "maximize-gaps"
MINIMIZE_GAPS = "minimize-gaps"
OBJECTIVES = (MAXIMIZE_GAPS, MINIMIZE_GAPS)


@dataclass(frozen=True)
class BlockSpec:
    """A contiguous index interval [start, start+length) of one sequence."""

    start: int
    length: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.length < 1:
            raise InputError(
                f"block must have start >= 0 and length >= 1, got {self}"
            )

    @property
    def stop(self) -> int:
        return self.start + self.length

    def validate_for(self, x: SymbolSequence) -> None:
        if self.stop > len(x):
            raise InputError(
                f"block [{self.start}, {self.stop}) exceeds sequence length {len(x)}"
            )


@dataclass(frozen=True)
class BlockGapStats:
    """Extremal gap count of a block over all optimal alignments."""

    lcs_len: int
    gaps: int
    matched_in_block: int


def extremal_block_gaps(
    x: SymbolSequence,
    y: SymbolSequence,
    block: BlockSpec,
    objective: str = MAXIMIZE_GAPS,
) -> BlockGapStats:
    """Extremal number of block positions aligned with gaps.

    Cell values are length * M +/- matched_in_block with M = block length + 1,
    so an integer maximum is exactly the lexicographic optimum: LCS length
    first, then the matched-in-block count minimized (maximize-gaps) or
    maximized (minimize-gaps).  Optimality is never sacrificed to the
    secondary objective.
    """
    if objective not in OBJECTIVES:
        raise InputError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    block.validate_for(x)
    require_same_alphabet(x, y)
    xa, ya = x.symbols, y.symbols
    scale = block.length + 1
    sign = -1 if objective == MAXIMIZE_GAPS else 1
    in_block = np.zeros(xa.size, dtype=np.int64)
    in_block[block.start : block.stop] = 1
    add = scale + sign * in_block

    n = ya.size
    prev = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(n + 1, dtype=np.int64)
    for i, s in enumerate(xa):
        cand = np.where(ya == s, prev[:-1] + add[i], 0)
        np.maximum(cand, prev[1:], out=cand)
        np.maximum.accumulate(cand, out=cand)
        cur[1:] = cand
        prev, cur = cur, prev

    encoded = int(prev[-1])
    if sign > 0:
        lcs_len, matched = divmod(encoded, scale)
    else:
        lcs_len = -((-encoded) // scale)
        matched = lcs_len * scale - encoded
    return BlockGapStats(
        lcs_len=lcs_len, gaps=block.length - matched, matched_in_block=matched
    )


def gaps_of_alignment(a: Alignment, block: BlockSpec) -> int:
    """Block positions not matched to any symbol under a given alignment."""
    matched = sum(1 for i, _ in a.pairs if block.start <= i < block.stop)
    return block.length - matched


def _maximal_runs(xa: np.ndarray) -> list[tuple[int, int]]:
    """(start, length) of each maximal constant run, left to right."""
    runs = []
    start = 0
    for i in range(1, xa.size + 1):
        if i == xa.size or xa[i] != xa[start]:
            runs.append((start, i - start))
            start = i
    return runs


def find_natural_block(
    x: SymbolSequence, target_len: int, *, accept_longer: bool = False
) -> BlockSpec | None:
    """The length-target_len constant block whose midpoint is nearest |x|/2.

    Candidates are maximal constant runs of exactly target_len symbols; with
    accept_longer, runs of at least target_len qualify and the block is the
    target-length window inside the run placed nearest the middle.  Ties go to
    the leftmost candidate; returns None when no run qualifies.
    """
    if target_len < 1:
        raise InputError("target_len must be positive")
    if len(x) == 0:
        return None
    middle = len(x) / 2.0
    best: tuple[float, int] | None = None
    for start, length in _maximal_runs(x.symbols):
        if length == target_len or (accept_longer and length > target_len):
            lo = start
            hi = start + length - target_len
            # Window start bringing the window midpoint closest to the middle;
            # on an exact half-way tie the leftmost placement wins.
            ideal = middle - target_len / 2.0
            s = min(max(math.floor(ideal), lo), hi)
            if s < hi and abs(s + 1 + target_len / 2.0 - middle) < abs(
                s + target_len / 2.0 - middle
            ):
                s += 1
            dist = abs(s + target_len / 2.0 - middle)
            if best is None or dist < best[0]:
                best = (dist, s)
    if best is None:
        return None
    return BlockSpec(start=best[1], length=target_len)
