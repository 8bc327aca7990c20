"""Symbol sequences over small integer alphabets, and match alignments.

Symbols are integers 0..k-1.  Textual I/O maps the characters
'0'..'9','a'..'z' to the symbol values 0..35, one character per symbol,
so sequences serialize as single-line strings.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
_CHAR_TO_SYMBOL = {c: i for i, c in enumerate(_DIGITS)}


@dataclass(frozen=True)
class Alphabet:
    """An alphabet of k equiprobable symbols 0..k-1."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InputError(f"alphabet size must be a positive integer, got {self.k!r}")


@dataclass(frozen=True)
class SymbolSequence:
    """A finite string of symbols drawn from a fixed alphabet."""

    symbols: np.ndarray
    alphabet: Alphabet

    def __post_init__(self) -> None:
        arr = np.asarray(self.symbols, dtype=np.int64)
        object.__setattr__(self, "symbols", arr)
        if arr.ndim != 1:
            raise InputError("symbols must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= self.alphabet.k):
            raise InputError(
                f"symbols must lie in [0, {self.alphabet.k}) for alphabet k={self.alphabet.k}"
            )

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __getitem__(self, i: int) -> int:
        return int(self.symbols[i])

    @property
    def k(self) -> int:
        return self.alphabet.k

    @classmethod
    def from_text(cls, text: str, k: int | None = None) -> "SymbolSequence":
        """Parse a single-line string, e.g. "0120" or "ab3".

        When k is omitted the alphabet is sized to the largest symbol present
        (at least 1).
        """
        try:
            values = [_CHAR_TO_SYMBOL[c] for c in text]
        except KeyError as exc:
            raise InputError(f"unsupported symbol character {exc.args[0]!r}") from None
        if k is None:
            k = max(values, default=0) + 1
        return cls(np.asarray(values, dtype=np.int64), Alphabet(k))

    def to_text(self) -> str:
        if self.alphabet.k > len(_DIGITS):
            raise InputError(f"text serialization supports k <= {len(_DIGITS)}")
        return "".join(_DIGITS[s] for s in self.symbols.tolist())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.alphabet.k <= len(_DIGITS):
            return f"SymbolSequence({self.to_text()!r}, k={self.alphabet.k})"
        return f"SymbolSequence(len={len(self)}, k={self.alphabet.k})"


@dataclass(frozen=True)
class Alignment:
    """An ordered set of matched index pairs (i, j) into two sequences.

    Pairs are strictly increasing in both coordinates and only join equal
    symbols; the score of the alignment is the number of pairs.
    """

    pairs: tuple[tuple[int, int], ...] = field(default=())

    @property
    def score(self) -> int:
        return len(self.pairs)

    def is_valid_for(self, x: SymbolSequence, y: SymbolSequence) -> bool:
        prev_i, prev_j = -1, -1
        for i, j in self.pairs:
            if not (prev_i < i < len(x) and prev_j < j < len(y)):
                return False
            if x[i] != y[j]:
                return False
            prev_i, prev_j = i, j
        return True

    def matched_x_positions(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.pairs)


def require_same_alphabet(x: SymbolSequence, y: SymbolSequence) -> None:
    if x.alphabet.k != y.alphabet.k:
        raise InputError(
            f"alphabet mismatch: k={x.alphabet.k} vs k={y.alphabet.k}"
        )
