"""On-demand oracle equivalence suites.

Runs the fast kernels against the independent small-instance oracles on
seeded random inputs: the quadratic DP, word-parallel path, and traceback
against the memoized recursion, and the extremal-gap DP against exhaustive
enumeration of optimal alignments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import MAXIMIZE_GAPS, MINIMIZE_GAPS, BlockSpec, extremal_block_gaps, gaps_of_alignment
from .generators import generator
from .lcs import (
    brute_force_lcs,
    enumerate_optimal_alignments,
    lcs_length,
    lcs_length_bitparallel,
    one_optimal_alignment,
)
from .sequences import Alphabet, SymbolSequence


@dataclass(frozen=True)
class OracleSuiteReport:
    name: str
    checked: int
    mismatches: int


def _random_instance(rng: np.random.Generator, max_len: int) -> tuple[SymbolSequence, SymbolSequence]:
    k = int(rng.integers(2, 5))
    alphabet = Alphabet(k)
    lx = int(rng.integers(1, max_len + 1))
    ly = int(rng.integers(1, max_len + 1))
    x = SymbolSequence(rng.integers(0, k, size=lx), alphabet)
    y = SymbolSequence(rng.integers(0, k, size=ly), alphabet)
    return x, y


def check_length_oracles(instances: int, seed: int) -> OracleSuiteReport:
    """brute force == DP == word-parallel == traceback score, tiny instances."""
    rng = generator(seed, 0)
    mismatches = 0
    for _ in range(instances):
        x, y = _random_instance(rng, 12)
        ref = brute_force_lcs(x, y)
        alignment = one_optimal_alignment(x, y)
        same = (
            lcs_length(x, y) == ref
            and lcs_length_bitparallel(x, y) == ref
            and alignment.score == ref
            and alignment.is_valid_for(x, y)
        )
        mismatches += 0 if same else 1
    return OracleSuiteReport("length-kernels-vs-brute-force", instances, mismatches)


def check_extremal_gap_oracle(instances: int, seed: int) -> OracleSuiteReport:
    """Extremal-gap DP == extrema over enumerated optimal alignments."""
    rng = generator(seed, 1)
    mismatches = 0
    for _ in range(instances):
        x, y = _random_instance(rng, 12)
        length = int(rng.integers(1, len(x) + 1))
        start = int(rng.integers(0, len(x) - length + 1))
        block = BlockSpec(start, length)
        enum = enumerate_optimal_alignments(x, y, cap=500_000)
        if enum.truncated:
            mismatches += 1
            continue
        per_alignment = [gaps_of_alignment(a, block) for a in enum.alignments]
        got_max = extremal_block_gaps(x, y, block, MAXIMIZE_GAPS)
        got_min = extremal_block_gaps(x, y, block, MINIMIZE_GAPS)
        expected_score = enum.alignments[0].score
        same = (
            got_max.gaps == max(per_alignment)
            and got_min.gaps == min(per_alignment)
            and got_max.lcs_len == expected_score
            and got_min.lcs_len == expected_score
        )
        mismatches += 0 if same else 1
    return OracleSuiteReport("extremal-gaps-vs-enumeration", instances, mismatches)


def run_oracle_suites(instances: int = 200, seed: int = 0) -> tuple[OracleSuiteReport, ...]:
    return (
        check_length_oracles(instances, seed),
        check_extremal_gap_oracle(instances, seed),
    )
