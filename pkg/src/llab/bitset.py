"""Fixed-universe bit-sets over {1, ..., N-1} stored in 64-bit words.

Set identities reduce to word-wise XOR and equality, so they are exact and
branch-free; cardinality is a popcount.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument


def _pack(mask: np.ndarray) -> np.ndarray:
    raw = np.packbits(mask.astype(bool), bitorder="little")
    pad = (-raw.size) % 8
    if pad:
        raw = np.concatenate([raw, np.zeros(pad, dtype=np.uint8)])
    return raw.view("<u8").copy()


@dataclass(frozen=True, eq=False)
class ExceptionalSet:
    """A subset of {1, ..., N-1} tagged with the dilation index that built it.

    Attributes:
        N: Modulus; bit ``n`` for ``0 <= n < N`` (bit 0 is always clear).
        d: Dilation index; ``d = 1`` marks the base set E(N).
        words: Packed little-endian uint64 words.
        eta: Agreement sign for the base set, ``None`` otherwise.
    """

    N: int
    d: int
    words: np.ndarray = field(repr=False)
    eta: int | None = None

    def __post_init__(self):
        self.words.setflags(write=False)

    @classmethod
    def from_mask(cls, N: int, d: int, mask, eta=None) -> "ExceptionalSet":
        mask = np.asarray(mask)
        if mask.shape != (N,):
            raise InvalidArgument("mask must have length N")
        if N > 0 and mask[0]:
            raise InvalidArgument("0 is not in the universe {1..N-1}")
        return cls(int(N), int(d), _pack(mask), eta)

    @classmethod
    def from_members(cls, N: int, members, d: int = 0, eta=None) -> "ExceptionalSet":
        mask = np.zeros(N, dtype=bool)
        idx = np.asarray(list(members), dtype=np.int64)
        if idx.size and (idx.min() < 1 or idx.max() >= N):
            raise InvalidArgument("members must lie in [1, N-1]")
        mask[idx] = True
        return cls.from_mask(N, d, mask, eta)

    @property
    def card(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def __len__(self) -> int:
        return self.card

    def mask(self) -> np.ndarray:
        """Boolean membership array of length N."""
        bits = np.unpackbits(self.words.view(np.uint8), count=self.N, bitorder="little")
        return bits.astype(bool)

    def members(self) -> np.ndarray:
        return np.nonzero(self.mask())[0].astype(np.int64)

    def __contains__(self, n) -> bool:
        n = int(n)
        if not 0 <= n < self.N:
            return False
        return bool((int(self.words[n >> 6]) >> (n & 63)) & 1)

    def _check(self, other: "ExceptionalSet") -> None:
        if self.N != other.N:
            raise InvalidArgument("sets live in different universes")

    def __xor__(self, other: "ExceptionalSet") -> "ExceptionalSet":
        self._check(other)
        return ExceptionalSet(self.N, 0, self.words ^ other.words)

    symmetric_difference = __xor__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExceptionalSet):
            return NotImplemented
        return self.N == other.N and bool(np.array_equal(self.words, other.words))

    __hash__ = None

    def preimage(self, a: int) -> "ExceptionalSet":
        """``{n : a*n mod N in self}``, the pull-back under the dilation by ``a``."""
        n = np.arange(self.N, dtype=np.int64)
        out = self.mask()[(a * n) % self.N]
        out[0] = False
        return ExceptionalSet.from_mask(self.N, 0, out)

    def image(self, a: int) -> "ExceptionalSet":
        """``{a*n mod N : n in self}``."""
        out = np.zeros(self.N, dtype=bool)
        out[(a * self.members()) % self.N] = True
        out[0] = False
        return ExceptionalSet.from_mask(self.N, 0, out)

    def count_below(self, x: float) -> int:
        """Number of members strictly below ``x``."""
        return int(np.count_nonzero(self.members() < x))
