"""Seeded construction of the random-string ensembles.

All randomness flows through NumPy's Philox4x64-10 counter-based generator
keyed by SeedSequence((master, ...path)), so any (master seed, stream path)
pair fully determines its output, independent of evaluation order and
platform.  Trials can therefore be generated concurrently and reproduced
bit-for-bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import BlockSpec
from .errors import InputError
from .sequences import Alphabet, SymbolSequence

_MAX_UINT64 = 2**64 - 1


def round_half_up(value: float) -> int:
    """Round a non-negative real to the nearest integer, halves up.

    The rule applied everywhere a real-valued length (d**beta, d**alpha,
    n*p) is used as an index or count.
    """
    return math.floor(value + 0.5)


@dataclass(frozen=True)
class RngSeed:
    """Master seed plus a stream index (normally the trial number)."""

    master: int
    stream: int = 0

    def __post_init__(self) -> None:
        for name in ("master", "stream"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v <= _MAX_UINT64:
                raise InputError(f"{name} must be an unsigned 64-bit integer, got {v!r}")


def _as_seed(seed: RngSeed | int) -> RngSeed:
    if isinstance(seed, RngSeed):
        return seed
    return RngSeed(master=int(seed))


def generator(*entropy: int) -> np.random.Generator:
    """Philox generator keyed by an entropy path of non-negative integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def gen_iid(k: int, n: int, seed: RngSeed | int) -> SymbolSequence:
    """An iid uniform string of length n over symbols 0..k-1."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if n < 0:
        raise InputError(f"n must be >= 0, got {n}")
    s = _as_seed(seed)
    symbols = generator(s.master, s.stream).integers(0, k, size=n, dtype=np.int64)
    return SymbolSequence(symbols, Alphabet(k))


@dataclass(frozen=True)
class ModelInstance:
    """Two length-2d strings, x carrying a centered constant block.

    x_star is x with the block resampled iid; x and x_star agree outside the
    block.
    """

    x: SymbolSequence
    y: SymbolSequence
    block: BlockSpec
    x_star: SymbolSequence


def block_length_for(d: int, beta: float) -> int:
    """Even block length: twice the rounded half of d**beta."""
    return 2 * round_half_up(d**beta / 2.0)


def make_model_instance(
    k: int,
    d: int,
    beta: float,
    block_symbol: int | None = 0,
    seed: RngSeed | int = 0,
) -> ModelInstance:
    """Draw the block-insertion model: x, y of length 2d, block of length
    2*round(d**beta / 2) occupying x[d - ell/2 : d + ell/2].

    x, y, the block resample, and (when block_symbol is None) the block
    symbol come from disjoint streams of the same seed.
    """
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    if d < 4:
        raise InputError(f"d must be >= 4, got {d}")
    if not 0.5 < beta < 1.0:
        raise InputError(f"beta must lie in (1/2, 1), got {beta}")
    ell = block_length_for(d, beta)
    if ell > 2 * d:
        raise InputError(f"block length {ell} exceeds string length {2 * d}")
    s = _as_seed(seed)
    block = BlockSpec(start=d - ell // 2, length=ell)

    x_syms = generator(s.master, s.stream, 0).integers(0, k, size=2 * d, dtype=np.int64)
    y_syms = generator(s.master, s.stream, 1).integers(0, k, size=2 * d, dtype=np.int64)
    fill = generator(s.master, s.stream, 2).integers(0, k, size=ell, dtype=np.int64)
    if block_symbol is None:
        block_symbol = int(generator(s.master, s.stream, 3).integers(0, k))
    if not 0 <= block_symbol < k:
        raise InputError(f"block_symbol must lie in [0, {k}), got {block_symbol}")

    x_star_syms = x_syms.copy()
    x_star_syms[block.start : block.stop] = fill
    x_syms[block.start : block.stop] = block_symbol

    alphabet = Alphabet(k)
    return ModelInstance(
        x=SymbolSequence(x_syms, alphabet),
        y=SymbolSequence(y_syms, alphabet),
        block=block,
        x_star=SymbolSequence(x_star_syms, alphabet),
    )


def excise_block(x: SymbolSequence, block: BlockSpec) -> SymbolSequence:
    """x with the whole block spliced out."""
    block.validate_for(x)
    symbols = np.concatenate([x.symbols[: block.start], x.symbols[block.stop :]])
    return SymbolSequence(symbols, x.alphabet)


def excise_block_prefix(x: SymbolSequence, block: BlockSpec, m: int) -> SymbolSequence:
    """x with only the first m symbols of the block spliced out."""
    block.validate_for(x)
    if not 0 < m <= block.length:
        raise InputError(
            f"m must lie in [1, {block.length}] (the block length), got {m}"
        )
    symbols = np.concatenate(
        [x.symbols[: block.start], x.symbols[block.start + m :]]
    )
    return SymbolSequence(symbols, x.alphabet)
