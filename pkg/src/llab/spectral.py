"""Exponential sums ``S(a/N) = sum_{n<N} lambda(n) e(na/N)`` and the dilation defect.

Lengths are usually prime, which defeats plain radix-2 transforms. Up to
``DIRECT_MAX`` the sums are evaluated directly from a root table indexed by the
exact integer ``n*a mod N``; above it a chirp-z (Bluestein) convolution maps the
transform onto a power-of-two FFT. Every twiddle, including the chirp, is
looked up from an integer-reduced index so no phase drift accumulates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import _backend
from .arith import ArithTable
from .errors import InvalidArgument
from .report import VerificationReport, timed_check

DIRECT_MAX = 2**14


def unit_roots(M: int) -> np.ndarray:
    """``roots[k] = e(k/M)`` for ``0 <= k < M``.

    Angles are reduced to ``|k/M| <= 1/2`` before scaling by 2*pi and the upper
    half is filled by exact conjugation, so the table is conjugate-symmetric
    to the last bit.
    """
    k = np.arange(M, dtype=np.int64)
    half = k[: M // 2 + 1]
    ang = (2.0 * np.pi) * (half / M)
    out = np.empty(M, dtype=np.complex128)
    out[: half.size] = np.cos(ang) + 1j * np.sin(ang)
    if M % 2 == 0:
        out[M // 2] = -1.0  # sin(pi) is not exactly zero in floating point
    # e((M-k)/M) = conj(e(k/M))
    tail = k[half.size:]
    out[tail] = np.conj(out[M - tail])
    return out


def chirp_z(x) -> np.ndarray:
    """``out[a] = sum_n x[n] e(na/M)`` for any length M, in O(M log M).

    Uses ``na = (n^2 + a^2 - (a-n)^2) / 2``; the half-integer phases
    ``e(k^2 / 2M)`` are read from a table of ``2M``-th roots at index
    ``k^2 mod 2M`` computed in exact integer arithmetic.
    """
    x = np.asarray(x, dtype=np.complex128)
    M = x.size
    if M == 0:
        return x.copy()
    roots2 = unit_roots(2 * M)
    k = np.arange(M, dtype=np.int64)
    # k^2 mod 2M without overflow: (k mod 2M)^2 fits for M < 2**31
    idx = (k * k) % (2 * M)
    w = roots2[idx]                      # e(k^2 / 2M)
    L = 1 << int(2 * M - 1).bit_length()
    u = np.zeros(L, dtype=np.complex128)
    u[:M] = x * w
    v = np.zeros(L, dtype=np.complex128)
    wc = np.conj(w)                      # e(-k^2 / 2M)
    v[:M] = wc
    v[L - M + 1 :] = wc[1:][::-1]
    conv = np.fft.ifft(np.fft.fft(u) * np.fft.fft(v))[:M]
    return w * conv


def dft(x, method: str | None = None) -> tuple[np.ndarray, str]:
    """``out[a] = sum_n x[n] e(na/M)`` with the method chosen by length.

    Returns ``(coeffs, method)`` where method is ``"direct"`` or ``"chirp-z"``.
    """
    x = np.asarray(x, dtype=np.float64)
    M = x.size
    if method is None:
        method = "direct" if M <= DIRECT_MAX else "chirp-z"
    if method == "direct":
        return _backend.kernels.dft_direct(x, unit_roots(M)), method
    if method == "chirp-z":
        return chirp_z(x), method
    raise InvalidArgument(f"unknown transform method {method!r}")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``coeffs[a] = S(a/N)`` for ``a = 0..N-1`` and the method that produced it."""

    N: int
    coeffs: np.ndarray = field(repr=False)
    method: str = "direct"

    def plancherel(self) -> float:
        """``(1/N) sum_a |S(a/N)|^2``; equals ``N - 1`` exactly in real arithmetic."""
        return float(np.sum(self.coeffs.real**2 + self.coeffs.imag**2) / self.N)


def spectrum(table: ArithTable, N: int, method: str | None = None) -> Spectrum:
    """All N Liouville exponential sums modulo N."""
    if N < 2:
        raise InvalidArgument(f"N must be >= 2, got {N}")
    table.require(N - 1)
    x = np.zeros(N, dtype=np.float64)
    x[1:] = table.lam[1:N]
    coeffs, used = dft(x, method)
    coeffs.setflags(write=False)
    return Spectrum(N, coeffs, used)


def dilation_defect(spec: Spectrum, table: ArithTable, d: int) -> float:
    """``(1/N) sum_a |S(da/N) - lambda(d) S(a/N)|^2``.

    Raises:
        InvalidArgument: ``gcd(d, N) > 1`` (then ``a -> da`` is not a permutation).
    """
    N = spec.N
    if d < 1 or gcd(d, N) != 1:
        raise InvalidArgument(f"need d >= 1 with gcd(d, N) = 1 (d={d}, N={N})")
    table.require(d)
    a = np.arange(N, dtype=np.int64)
    diff = spec.coeffs[(d * a) % N] - int(table.lam[d]) * spec.coeffs
    return float(np.sum(diff.real**2 + diff.imag**2) / N)


def defect_tolerance(N: int) -> float:
    return 1e-6 * N


@timed_check
def verify_plancherel(spec: Spectrum) -> VerificationReport:
    lhs = spec.plancherel()
    rhs = spec.N - 1
    tol = defect_tolerance(spec.N)
    return VerificationReport(
        "plancherel", {"N": spec.N}, lhs, rhs, abs(lhs - rhs) <= tol, tol,
        details={"method": spec.method},
    )


@timed_check
def verify_dilation_defect(spec: Spectrum, table: ArithTable, d: int, card: int) -> VerificationReport:
    """Compare the defect with ``4 |E_d(N)|`` given the (independently built) cardinality."""
    lhs = dilation_defect(spec, table, d)
    rhs = 4 * int(card)
    tol = defect_tolerance(spec.N)
    return VerificationReport(
        "dilation_defect", {"N": spec.N, "d": d}, lhs, rhs, abs(lhs - rhs) <= tol, tol,
        details={"method": spec.method},
    )

