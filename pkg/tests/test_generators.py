import numpy as np
import pytest

from lcslab import (
    BlockSpec,
    InputError,
    RngSeed,
    SymbolSequence,
    block_length_for,
    excise_block,
    excise_block_prefix,
    gen_iid,
    make_model_instance,
    round_half_up,
)

S = SymbolSequence.from_text


class TestRoundHalfUp:
    @pytest.mark.parametrize(
        "value,expected",
        [(0.0, 0), (0.4, 0), (0.5, 1), (1.5, 2), (2.5, 3), (105.737 / 2, 53), (41.63, 42)],
    )
    def test_values(self, value, expected):
        assert round_half_up(value) == expected


class TestGenIid:
    def test_deterministic(self):
        a = gen_iid(3, 100, RngSeed(42, 1))
        b = gen_iid(3, 100, RngSeed(42, 1))
        assert np.array_equal(a.symbols, b.symbols)

    def test_streams_differ(self):
        a = gen_iid(3, 100, RngSeed(42, 1))
        b = gen_iid(3, 100, RngSeed(42, 2))
        assert not np.array_equal(a.symbols, b.symbols)

    def test_single_symbol_alphabet(self):
        assert gen_iid(1, 5, 0).to_text() == "00000"

    def test_empty(self):
        assert len(gen_iid(2, 0, 0)) == 0

    def test_law_of_large_numbers(self):
        x = gen_iid(2, 100_000, RngSeed(7))
        frac = float(np.mean(x.symbols == 0))
        assert abs(frac - 0.5) < 0.01

    def test_stream_pair_uniformity(self):
        from scipy.stats import chisquare

        k, n = 3, 100_000
        a = gen_iid(k, n, RngSeed(1234, 0)).symbols
        b = gen_iid(k, n, RngSeed(1234, 1)).symbols
        counts = np.bincount(a * k + b, minlength=k * k)
        assert chisquare(counts).pvalue > 0.001

    def test_validation(self):
        with pytest.raises(InputError):
            gen_iid(0, 5, 0)
        with pytest.raises(InputError):
            gen_iid(2, -1, 0)
        with pytest.raises(InputError):
            RngSeed(-1)


class TestMakeModelInstance:
    def test_block_length_rounding(self):
        mi = make_model_instance(k=2, d=500, beta=0.75, seed=3)
        assert mi.block.length == 106
        assert block_length_for(500, 0.75) == 106

    def test_block_position_and_constancy(self):
        mi = make_model_instance(k=4, d=50, beta=0.8, block_symbol=2, seed=9)
        ell = mi.block.length
        assert mi.block.start == 50 - ell // 2
        assert ell % 2 == 0
        segment = mi.x.symbols[mi.block.start : mi.block.stop]
        assert np.all(segment == 2)

    def test_star_agrees_outside_block(self):
        mi = make_model_instance(k=3, d=60, beta=0.7, seed=11)
        diffs = np.nonzero(mi.x.symbols != mi.x_star.symbols)[0]
        assert len(diffs) <= mi.block.length
        assert np.all(diffs >= mi.block.start)
        assert np.all(diffs < mi.block.stop)

    def test_random_block_symbol_when_none(self):
        mi = make_model_instance(k=6, d=40, beta=0.8, block_symbol=None, seed=5)
        segment = mi.x.symbols[mi.block.start : mi.block.stop]
        assert len(set(segment.tolist())) == 1
        assert 0 <= segment[0] < 6

    def test_validation(self):
        with pytest.raises(InputError):
            make_model_instance(k=1, d=50, beta=0.8)
        with pytest.raises(InputError):
            make_model_instance(k=2, d=3, beta=0.8)
        for beta in (0.5, 1.0, 1.2, 0.2):
            with pytest.raises(InputError):
                make_model_instance(k=2, d=50, beta=beta)
        with pytest.raises(InputError):
            make_model_instance(k=2, d=50, beta=0.8, block_symbol=2)


class TestExcision:
    def test_splice(self):
        assert excise_block(S("01000001"), BlockSpec(2, 5)).to_text() == "011"

    def test_whole_string(self):
        assert excise_block(S("0101"), BlockSpec(0, 4)).to_text() == ""

    def test_zero_length_block_rejected(self):
        with pytest.raises(InputError):
            BlockSpec(2, 0)

    def test_invalid_block(self):
        with pytest.raises(InputError):
            excise_block(S("0101"), BlockSpec(2, 3))

    def test_prefix_splice(self):
        x = S("aa000bb", 12)
        assert excise_block_prefix(x, BlockSpec(2, 3), 2).to_text() == "aa0bb"

    def test_prefix_full_equals_excise(self):
        x = S("0100101")
        block = BlockSpec(1, 4)
        full = excise_block_prefix(x, block, 4)
        assert np.array_equal(full.symbols, excise_block(x, block).symbols)

    def test_prefix_m_validation(self):
        x = S("0100101")
        with pytest.raises(InputError):
            excise_block_prefix(x, BlockSpec(1, 4), 5)
        with pytest.raises(InputError):
            excise_block_prefix(x, BlockSpec(1, 4), 0)


class TestSerialization:
    def test_roundtrip(self):
        x = gen_iid(36, 50, 1)
        assert np.array_equal(SymbolSequence.from_text(x.to_text(), 36).symbols, x.symbols)

    def test_unsupported_character(self):
        with pytest.raises(InputError):
            SymbolSequence.from_text("01#")

    def test_symbol_out_of_range(self):
        with pytest.raises(InputError):
            SymbolSequence.from_text("012", k=2)
