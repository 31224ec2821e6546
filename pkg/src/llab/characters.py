"""Dirichlet characters modulo a prime via discrete logarithms.

With ``g`` a primitive root and ``ind[g^k mod N] = k`` the characters are
``chi_j(n) = e(j * ind[n] / (N-1))``. The twisted sums
``T_j = sum_n lambda(n) chi_j(n)`` are one length-(N-1) transform of the
sequence ``lambda(g^k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .arith import ArithTable, factorize, is_prime, primes_between
from .dilation import DilationContext
from .errors import InvalidArgument, TableTooSmall
from .report import VerificationReport, timed_check
from .spectral import dft, unit_roots


def primitive_root(N: int) -> int:
    """Smallest generator of the multiplicative group modulo prime ``N``."""
    if N == 2:
        return 1
    qs = list(factorize(N - 1))
    for g in range(2, N):
        if all(pow(g, (N - 1) // q, N) != 1 for q in qs):
            return g
    raise InvalidArgument(f"no primitive root modulo {N}")  # unreachable for prime N


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Discrete-log data for the characters modulo a prime ``N``.

    Attributes:
        N: Prime modulus.
        root: Smallest primitive root.
        ind: ``ind[n]`` for ``1 <= n < N`` (``ind[0] = -1`` as a sentinel).
        powers: ``powers[k] = root^k mod N`` for ``0 <= k < N - 1``.
    """

    N: int
    root: int
    ind: np.ndarray = field(repr=False)
    powers: np.ndarray = field(repr=False)

    @cached_property
    def _roots(self) -> np.ndarray:
        return unit_roots(self.N - 1)

    def chi(self, j: int, n: int) -> complex:
        """``chi_j(n)``; zero when ``N | n``."""
        n %= self.N
        if n == 0:
            return 0j
        return complex(self._roots[(j * int(self.ind[n])) % (self.N - 1)])


def build_characters(N: int) -> CharacterTable:
    """Character table for prime ``N``.

    Raises:
        InvalidArgument: ``N`` is not prime.
    """
    if not is_prime(N):
        raise InvalidArgument(f"N={N} is not prime")
    g = primitive_root(N)
    powers = np.empty(N - 1, dtype=np.int64)
    x = 1
    for k in range(N - 1):
        powers[k] = x
        x = x * g % N
    ind = np.full(N, -1, dtype=np.int64)
    ind[powers] = np.arange(N - 1, dtype=np.int64)
    powers.setflags(write=False)
    ind.setflags(write=False)
    return CharacterTable(N, g, ind, powers)


def twisted_sum(ct: CharacterTable, table: ArithTable, j: int) -> complex:
    """``sum_{n<N} lambda(n) chi_j(n)`` by direct summation."""
    if not 0 <= j <= ct.N - 2:
        raise InvalidArgument(f"character index {j} outside [0, {ct.N - 2}]")
    table.require(ct.N - 1)
    k = np.arange(ct.N - 1, dtype=np.int64)
    vals = table.lam[ct.powers].astype(np.float64)
    return complex(np.sum(vals * ct._roots[(j * k) % (ct.N - 1)]))


def twisted_sums(ct: CharacterTable, table: ArithTable) -> np.ndarray:
    """All ``T_j`` for ``j = 0..N-2`` via one transform of ``lambda(g^k)``."""
    table.require(ct.N - 1)
    coeffs, _ = dft(table.lam[ct.powers].astype(np.float64))
    return coeffs


def character_terms(ct: CharacterTable, table: ArithTable, primes) -> np.ndarray:
    """Per-character terms ``(1/(N-1)) * [avg_p lambda(p) chi_j(p)] * |T_j|^2``."""
    N = ct.N
    primes = np.asarray(primes, dtype=np.int64)
    T = twisted_sums(ct, table)
    j = np.arange(N - 1, dtype=np.int64)
    lam_p = table.lam[primes].astype(np.float64)
    ind_p = ct.ind[primes % N]
    # avg over p of lambda(p) e(j ind(p) / (N-1)), for all j at once
    avg = (lam_p[None, :] * ct._roots[np.outer(j, ind_p) % (N - 1)]).mean(axis=1)
    return avg * (T.real**2 + T.imag**2) / (N - 1)


@timed_check
def verify_ep_decomposition(ct: CharacterTable, table: ArithTable, P: int,
                            ctx: DilationContext | None = None) -> VerificationReport:
    """Average of ``|E_p(N)|`` over primes ``P < p <= 2P`` against its character expansion.

    Writing ``1[Lambda_p(n) = -1] = (1 - Lambda_p(n)) / 2`` and expanding the
    congruence ``pn = m (mod N)`` over characters gives, per prime p,

        |E_p| = (N-1)/2 - (1/2) * (1/(N-1)) * sum_j lambda(p) chi_j(p) |T_j|^2,

    which is averaged over p. The right-hand side is real up to rounding
    because conjugate characters pair up; its imaginary part is reported.

    Raises:
        InvalidArgument: no prime coprime to N in ``(P, 2P]``.
        TableTooSmall: ``lambda`` not known up to ``2P (N-1)``.
    """
    N = ct.N
    primes = [p for p in primes_between(table, P) if p % N]
    if not primes:
        raise InvalidArgument(f"no primes coprime to {N} in ({P}, {2 * P}]")
    d_max = max(primes)
    if ctx is None or ctx.d_max < d_max:
        need = d_max * (N - 1)
        if need > table.n_max:
            raise TableTooSmall(need, table.n_max)
        ctx = DilationContext(table, N, d_max)
    lhs = float(np.mean([ctx.card(p) for p in primes]))
    terms = character_terms(ct, table, primes)
    total = complex(terms.sum())
    rhs_c = 0.5 * (N - 1) - 0.5 * total
    tol = 1e-6 * N
    return VerificationReport(
        "ep_decomposition", {"N": N, "P": P}, lhs, rhs_c.real,
        abs(lhs - rhs_c.real) <= tol and abs(rhs_c.imag) <= 1e-9 * N, tol,
        details={"primes": tuple(primes), "rhs_imag": rhs_c.imag,
                 "principal_term": float(terms[0].real)},
    )
