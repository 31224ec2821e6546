"""Sieve-backed arithmetic tables: Liouville signs, Omega and largest prime factor.

The table is built once by a smallest-prime-factor sieve (compiled kernel when
available) and then treated as immutable, so one instance can be shared by
any number of reader threads.

Examples
--------
>>> t = build_table(40)
>>> arith_query(t, 40)
(1, 4, 5)
>>> friable_enumerate(t, 10, 3).members
(1, 2, 3, 4, 6, 8, 9)
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .errors import InvalidArgument, TableTooSmall

#: Largest table size supported; beyond this the uint32 P+ column and the
#: int64 index arithmetic in the kernels stop being safe.
MAX_N = 2**31

CACHE_MAGIC = b"LLAB"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


@dataclass(frozen=True, eq=False)
class ArithTable:
    """Arrays of lambda(n), Omega(n) and P+(n) for 0 <= n <= n_max.

    Index 0 is padding (lambda = 0, Omega = 0, P+ = 0); index 1 carries the
    empty-factorization values (+1, 0, 1). All arrays are read-only.

    Attributes:
        n_max: Largest index covered.
        lam: int8 Liouville signs.
        omega_big: uint8 prime-factor counts with multiplicity.
        pplus: uint32 largest prime factor.
    """

    n_max: int
    lam: np.ndarray = field(repr=False)
    omega_big: np.ndarray = field(repr=False)
    pplus: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.lam, self.omega_big, self.pplus):
            if arr.shape != (self.n_max + 1,):
                raise InvalidArgument("table arrays must have length n_max + 1")
            arr.setflags(write=False)

    def require(self, n: int) -> None:
        """Raise :class:`TableTooSmall` unless index ``n`` is covered."""
        if n > self.n_max:
            raise TableTooSmall(n, self.n_max)

    def is_prime(self, n: int) -> bool:
        self.require(n)
        return n >= 2 and int(self.pplus[n]) == n

    def primes_upto(self, x: int) -> np.ndarray:
        """All primes p <= x as an int64 array."""
        self.require(x)
        idx = np.nonzero(self.omega_big[: x + 1] == 1)[0]
        return idx.astype(np.int64)


def _validate_size(n_max) -> int:
    n_max = int(n_max)
    if n_max < 1:
        raise InvalidArgument(f"n_max must be >= 1, got {n_max}")
    if n_max > MAX_N:
        raise InvalidArgument(f"n_max {n_max} exceeds the supported bound 2**31")
    return n_max


def build_table(n_max: int, cache_dir: str | os.PathLike | None = None) -> ArithTable:
    """Sieve lambda, Omega and P+ up to ``n_max``.

    Args:
        n_max: Table size, 1 <= n_max <= 2**31.
        cache_dir: Optional directory holding binary table caches. A cached
            table of the same size is loaded if present, otherwise the fresh
            table is written there.

    Raises:
        InvalidArgument: ``n_max`` out of range.
    """
    n_max = _validate_size(n_max)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"arith_{n_max}.llab"
        if path.exists():
            try:
                return load_table(path)
            except (OSError, ValueError):
                pass  # stale or corrupt cache: rebuild below
    lam, omega, pplus = _backend.kernels.sieve(n_max)
    table = ArithTable(n_max, lam, omega, pplus)
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_table(table, path)
        except OSError:
            pass  # a cache is an optimisation, never a requirement
    return table


def save_table(table: ArithTable, path: str | os.PathLike) -> None:
    """Write ``table`` in the packed little-endian cache format.

    Layout: header ``(b"LLAB", version u32, n_max u64)``, then lambda as one
    bit per index 0..n_max (bit set means lambda = -1, little-endian bit
    order), then Omega as bytes, then P+ as uint32.
    """
    n = table.n_max
    bits = np.packbits(table.lam < 0, bitorder="little")
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, n))
        fh.write(bits.tobytes())
        fh.write(table.omega_big.astype(np.uint8).tobytes())
        fh.write(table.pplus.astype("<u4").tobytes())
    os.replace(tmp, path)


def load_table(path: str | os.PathLike) -> ArithTable:
    """Read a table written by :func:`save_table`, validating the header."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError("truncated table cache")
    magic, version, n = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise ValueError("not an llab table cache")
    n = _validate_size(n)
    nbits = (n + 1 + 7) // 8
    expected = _HEADER.size + nbits + (n + 1) + 4 * (n + 1)
    if len(data) != expected:
        raise ValueError("table cache has the wrong length")
    off = _HEADER.size
    bits = np.frombuffer(data, dtype=np.uint8, count=nbits, offset=off)
    neg = np.unpackbits(bits, count=n + 1, bitorder="little").astype(bool)
    off += nbits
    omega = np.frombuffer(data, dtype=np.uint8, count=n + 1, offset=off).copy()
    off += n + 1
    pplus = np.frombuffer(data, dtype="<u4", count=n + 1, offset=off).astype(np.uint32)
    lam = np.where(neg, -1, 1).astype(np.int8)
    lam[0] = 0
    return ArithTable(n, lam, omega, pplus)


def arith_query(table: ArithTable, n: int) -> tuple[int, int, int]:
    """Return ``(lambda(n), Omega(n), P+(n))`` for 1 <= n <= n_max."""
    if not 1 <= n <= table.n_max:
        raise InvalidArgument(f"n={n} outside [1, {table.n_max}]")
    return int(table.lam[n]), int(table.omega_big[n]), int(table.pplus[n])


@dataclass(frozen=True)
class FriableSet:
    """The q-friable integers ``S(T, q) = {n <= T : P+(n) <= q}``."""

    T: int
    q: int
    members: tuple

    @property
    def psi(self) -> int:
        return len(self.members)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)


def friable_enumerate(table: ArithTable, T: int, q: int) -> FriableSet:
    """Enumerate ``S(T, q)`` in ascending order (1 is always a member)."""
    if T < 1 or q < 1:
        raise InvalidArgument("T and q must be >= 1")
    if T > table.n_max:
        raise InvalidArgument(f"T={T} exceeds table n_max={table.n_max}")
    idx = np.nonzero(table.pplus[1 : T + 1] <= q)[0] + 1
    return FriableSet(int(T), int(q), tuple(int(v) for v in idx))


def primes_between(table: ArithTable, P: int) -> list[int]:
    """Primes p with P < p <= 2P."""
    if P < 1:
        raise InvalidArgument("P must be >= 1")
    if 2 * P > table.n_max:
        raise InvalidArgument(f"2P={2 * P} exceeds table n_max={table.n_max}")
    seg = table.omega_big[P + 1 : 2 * P + 1]
    return [int(v) for v in np.nonzero(seg == 1)[0] + P + 1]


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for table-free callers."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: k}`` by trial division."""
    out: dict[int, int] = {}
    n = int(n)
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
