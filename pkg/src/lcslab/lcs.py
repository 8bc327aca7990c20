"""Exact longest-common-subsequence kernels.

Four routes to the same quantity, kept deliberately independent so they can
cross-check each other: the quadratic dynamic program (reference), a
word-parallel length-only fast path, a deterministic traceback producing one
optimal alignment, and small-instance oracles (memoized recursion, full
enumeration of optimal alignments).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .sequences import Alignment, SymbolSequence, require_same_alphabet

_BRUTE_FORCE_MAX_TOTAL = 30
_ENUMERATE_MAX_LEN = 14


def _dp_last_row(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Last row of the LCS length table, two-row memory.

    Row update: new[j] = max(prev[j], new[j-1], prev[j-1] + eq(i,j)), realized
    as a running maximum so the whole row is a handful of vector operations.
    """
    n = cols.size
    prev = np.zeros(n + 1, dtype=np.int64)
    cur = np.zeros(n + 1, dtype=np.int64)
    for s in rows:
        cand = np.where(cols == s, prev[:-1] + 1, 0)
        np.maximum(cand, prev[1:], out=cand)
        np.maximum.accumulate(cand, out=cand)
        cur[1:] = cand
        prev, cur = cur, prev
    return prev


def lcs_length(x: SymbolSequence, y: SymbolSequence) -> int:
    """Length of a longest common subsequence, by quadratic DP."""
    require_same_alphabet(x, y)
    if len(x) == 0 or len(y) == 0:
        return 0
    # Iterate over the shorter string; the function is symmetric.
    if len(x) <= len(y):
        return int(_dp_last_row(x.symbols, y.symbols)[-1])
    return int(_dp_last_row(y.symbols, x.symbols)[-1])


def _occurrence_masks(xa: np.ndarray) -> dict[int, int]:
    masks: dict[int, int] = {}
    for s in np.unique(xa):
        bits = np.packbits(xa == s, bitorder="little")
        masks[int(s)] = int.from_bytes(bits.tobytes(), "little")
    return masks


def _lcs_length_bitparallel_arrays(xa: np.ndarray, ya: np.ndarray) -> int:
    m = int(xa.size)
    if m == 0 or ya.size == 0:
        return 0
    masks = _occurrence_masks(xa)
    full = (1 << m) - 1
    v = full
    for s in ya.tolist():
        t = v & masks.get(s, 0)
        v = ((v + t) | (v - t)) & full
    return m - v.bit_count()


def lcs_length_bitparallel(x: SymbolSequence, y: SymbolSequence) -> int:
    """LCS length via per-symbol occurrence masks, one word row per y symbol.

    Exactly equivalent to lcs_length on every input; the row of DP increments
    is carried in a single arbitrary-precision integer.
    """
    require_same_alphabet(x, y)
    return _lcs_length_bitparallel_arrays(x.symbols, y.symbols)


def _full_table(xa: np.ndarray, ya: np.ndarray) -> np.ndarray:
    m, n = xa.size, ya.size
    dtype = np.uint16 if min(m, n) < 0xFFFF else np.uint32
    table = np.zeros((m + 1, n + 1), dtype=dtype)
    for i, s in enumerate(xa, start=1):
        prev = table[i - 1]
        cand = np.where(ya == s, prev[:-1].astype(np.int64) + 1, 0)
        np.maximum(cand, prev[1:], out=cand)
        np.maximum.accumulate(cand, out=cand)
        table[i, 1:] = cand
    return table


def one_optimal_alignment(x: SymbolSequence, y: SymbolSequence) -> Alignment:
    """One optimal alignment, deterministic for fixed inputs.

    Traceback preference: diagonal (match) over skipping an x symbol over
    skipping a y symbol.
    """
    require_same_alphabet(x, y)
    xa, ya = x.symbols, y.symbols
    if xa.size == 0 or ya.size == 0:
        return Alignment(())
    table = _full_table(xa, ya)
    pairs: list[tuple[int, int]] = []
    i, j = xa.size, ya.size
    while i > 0 and j > 0:
        if xa[i - 1] == ya[j - 1] and table[i, j] == table[i - 1, j - 1] + 1:
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif table[i, j] == table[i - 1, j]:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return Alignment(tuple(pairs))


def brute_force_lcs(x: SymbolSequence, y: SymbolSequence) -> int:
    """Memoized top-down recursion; test oracle for small instances."""
    require_same_alphabet(x, y)
    if len(x) + len(y) > _BRUTE_FORCE_MAX_TOTAL:
        raise InputError(
            f"brute_force_lcs limited to |x|+|y| <= {_BRUTE_FORCE_MAX_TOTAL}"
        )
    xs = x.symbols.tolist()
    ys = y.symbols.tolist()
    memo: dict[tuple[int, int], int] = {}

    def rec(i: int, j: int) -> int:
        if i == len(xs) or j == len(ys):
            return 0
        key = (i, j)
        if key in memo:
            return memo[key]
        if xs[i] == ys[j]:
            best = 1 + rec(i + 1, j + 1)
        else:
            best = max(rec(i + 1, j), rec(i, j + 1))
        memo[key] = best
        return best

    return rec(0, 0)


@dataclass(frozen=True)
class AlignmentEnumeration:
    """All optimal alignments of an instance, possibly truncated at a cap."""

    alignments: tuple[Alignment, ...]
    truncated: bool


def enumerate_optimal_alignments(
    x: SymbolSequence, y: SymbolSequence, cap: int = 100_000
) -> AlignmentEnumeration:
    """Every optimal alignment, each matched-pair set exactly once.

    Enumeration walks backwards over possible last matched pairs: (a, b) can
    end an optimal alignment of the prefixes (i, j) iff x[a] == y[b] and the
    prefix table value at (a, b) is one less than the current score.  Test
    oracle; capped and restricted to short strings.
    """
    require_same_alphabet(x, y)
    if cap < 1:
        raise InputError("cap must be positive")
    if len(x) > _ENUMERATE_MAX_LEN or len(y) > _ENUMERATE_MAX_LEN:
        raise InputError(
            f"enumerate_optimal_alignments limited to lengths <= {_ENUMERATE_MAX_LEN}"
        )
    xa, ya = x.symbols, y.symbols
    table = _full_table(xa, ya) if xa.size and ya.size else None
    total = int(table[-1, -1]) if table is not None else 0
    if total == 0:
        return AlignmentEnumeration((Alignment(()),), False)

    # Match cells grouped by the score of the strict prefix ending there.
    by_score: dict[int, list[tuple[int, int]]] = {}
    for a in range(xa.size):
        for b in range(ya.size):
            if xa[a] == ya[b]:
                by_score.setdefault(int(table[a, b]), []).append((a, b))

    results: list[Alignment] = []
    truncated = False

    def rec(i: int, j: int, s: int, suffix: list[tuple[int, int]]) -> None:
        nonlocal truncated
        if truncated:
            return
        if s == 0:
            if len(results) >= cap:
                truncated = True
                return
            results.append(Alignment(tuple(reversed(suffix))))
            return
        for a, b in by_score.get(s - 1, ()):
            if a < i and b < j:
                suffix.append((a, b))
                rec(a, b, s - 1, suffix)
                suffix.pop()
                if truncated:
                    return

    rec(xa.size, ya.size, total, [])
    return AlignmentEnumeration(tuple(results), truncated)
