import numpy as np
import pytest

from lcslab import (
    MAXIMIZE_GAPS,
    MINIMIZE_GAPS,
    Alignment,
    Alphabet,
    BlockSpec,
    InputError,
    SymbolSequence,
    enumerate_optimal_alignments,
    extremal_block_gaps,
    find_natural_block,
    gaps_of_alignment,
    lcs_length,
)

def S(text, k=2):
    return SymbolSequence.from_text(text, k)


class TestGapsOfAlignment:
    def test_worked_alignment_one_gap(self):
        # 0001100 realized by matching everything except the block's last one.
        x, y = S("00011100"), S("00011001")
        a = Alignment(((0, 0), (1, 1), (2, 2), (3, 3), (4, 4), (6, 5), (7, 6)))
        assert a.is_valid_for(x, y)
        assert a.score == lcs_length(x, y) == 7
        assert gaps_of_alignment(a, BlockSpec(3, 3)) == 1

    def test_empty_alignment(self):
        assert gaps_of_alignment(Alignment(()), BlockSpec(0, 5)) == 5

    def test_identity_alignment(self):
        a = Alignment(tuple((i, i) for i in range(8)))
        assert gaps_of_alignment(a, BlockSpec(2, 4)) == 0


class TestExtremalBlockGaps:
    def test_ones_block_example(self):
        x, y = S("00011100"), S("00011001")
        stats = extremal_block_gaps(x, y, BlockSpec(3, 3), MAXIMIZE_GAPS)
        assert stats.lcs_len == 7
        assert stats.gaps >= 1
        assert stats.gaps + stats.matched_in_block == 3

    def test_constant_strings_whole_block(self):
        x = S("0000")
        for objective in (MAXIMIZE_GAPS, MINIMIZE_GAPS):
            stats = extremal_block_gaps(x, x, BlockSpec(0, 4), objective)
            assert stats == type(stats)(lcs_len=4, gaps=0, matched_in_block=4)

    def test_disjoint_symbols(self):
        x, y = S("0000"), S("1111")
        stats = extremal_block_gaps(x, y, BlockSpec(0, 4), MINIMIZE_GAPS)
        assert stats.lcs_len == 0
        assert stats.gaps == 4

    def test_five_zero_block_fully_matched(self):
        # 23-symbol binary instance whose five-zero block admits a gap-free
        # optimal alignment; cross-checked by explicit forced-match scoring.
        x = S("10010111100000101101101")
        y = S("01111001011011011101001")
        block = BlockSpec(9, 5)
        total = lcs_length(x, y)
        assert total == 17
        stats = extremal_block_gaps(x, y, block, MINIMIZE_GAPS)
        assert stats.lcs_len == total
        assert stats.gaps == 0

        # Independent check: the best score among alignments matching all
        # five block zeros to zeros of y equals the unconstrained optimum.
        head = SymbolSequence(x.symbols[:9], x.alphabet)
        tail = SymbolSequence(x.symbols[14:], x.alphabet)
        zeros = [j for j in range(len(y)) if y[j] == 0]
        best = -1
        for a in range(len(zeros)):
            for b in range(a + 4, len(zeros)):
                pre = SymbolSequence(y.symbols[: zeros[a]], y.alphabet)
                post = SymbolSequence(y.symbols[zeros[b] + 1 :], y.alphabet)
                score = lcs_length(head, pre) + 5 + lcs_length(tail, post)
                best = max(best, score)
        assert best == total

    def test_invalid_block(self):
        with pytest.raises(InputError):
            extremal_block_gaps(S("0101"), S("0101"), BlockSpec(2, 3))
        with pytest.raises(InputError):
            BlockSpec(0, 0)
        with pytest.raises(InputError):
            extremal_block_gaps(S("01"), S("10"), BlockSpec(0, 1), "most-gaps")

    def test_against_enumeration(self):
        rng = np.random.default_rng(17)
        for _ in range(150):
            k = int(rng.integers(2, 5))
            alphabet = Alphabet(k)
            x = SymbolSequence(rng.integers(0, k, int(rng.integers(1, 13))), alphabet)
            y = SymbolSequence(rng.integers(0, k, int(rng.integers(1, 13))), alphabet)
            length = int(rng.integers(1, len(x) + 1))
            start = int(rng.integers(0, len(x) - length + 1))
            block = BlockSpec(start, length)
            enum = enumerate_optimal_alignments(x, y, cap=500_000)
            assert not enum.truncated
            per = [gaps_of_alignment(a, block) for a in enum.alignments]
            got_max = extremal_block_gaps(x, y, block, MAXIMIZE_GAPS)
            got_min = extremal_block_gaps(x, y, block, MINIMIZE_GAPS)
            assert got_max.gaps == max(per)
            assert got_min.gaps == min(per)
            assert got_max.lcs_len == got_min.lcs_len == lcs_length(x, y)

    def test_objective_ordering_and_deletion_bound(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            k = int(rng.integers(2, 4))
            alphabet = Alphabet(k)
            x = SymbolSequence(rng.integers(0, k, int(rng.integers(2, 25))), alphabet)
            y = SymbolSequence(rng.integers(0, k, int(rng.integers(1, 25))), alphabet)
            length = int(rng.integers(1, len(x) + 1))
            start = int(rng.integers(0, len(x) - length + 1))
            block = BlockSpec(start, length)
            lo = extremal_block_gaps(x, y, block, MINIMIZE_GAPS).gaps
            hi = extremal_block_gaps(x, y, block, MAXIMIZE_GAPS).gaps
            assert 0 <= lo <= hi <= block.length
            excised = SymbolSequence(
                np.concatenate([x.symbols[: block.start], x.symbols[block.stop :]]),
                alphabet,
            )
            drop = lcs_length(x, y) - lcs_length(excised, y)
            assert 0 <= drop <= block.length


class TestFindNaturalBlock:
    def test_unique_run(self):
        assert find_natural_block(S("0011100"), 3) == BlockSpec(2, 3)

    def test_absent(self):
        assert find_natural_block(S("0101"), 2) is None
        assert find_natural_block(S(""), 1) is None

    def test_midpoint_selection(self):
        assert find_natural_block(S("110011"), 2) == BlockSpec(2, 2)

    def test_midpoint_tie_breaks_leftmost(self):
        # Runs at 0 and 2 are equidistant from the middle; the left one wins.
        assert find_natural_block(S("0011"), 2) == BlockSpec(0, 2)

    def test_exact_length_only_by_default(self):
        x = S("0111100")
        assert find_natural_block(x, 3) is None
        assert find_natural_block(x, 3, accept_longer=True) == BlockSpec(2, 3)

    def test_accept_longer_window_near_middle(self):
        x = S("1000000001")
        got = find_natural_block(x, 4, accept_longer=True)
        assert got == BlockSpec(3, 4)

    def test_target_len_validation(self):
        with pytest.raises(InputError):
            find_natural_block(S("00"), 0)
