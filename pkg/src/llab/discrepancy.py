"""Equidistribution of exceptional sets: exponential sums, discrepancy, Erdős–Turán.

Points are ``x = n/N`` for members ``n`` of a set; all discrepancy
computations are carried out on the integers ``i*N - n_i*M`` so that the
closed-form values are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import FriableSet, friable_enumerate
from .bitset import ExceptionalSet
from .dilation import DilationContext
from .errors import InvalidArgument, TableTooSmall, UndefinedDiscrepancy
from .report import VerificationReport, timed_check

#: Explicit constant used with the Erdős–Turán inequality.
C_ET = 3.0


def _e(k, n, N) -> np.ndarray:
    """``e(k n / N)`` from the exact residue ``k*n mod N``."""
    idx = (np.asarray(k, dtype=np.int64) * np.asarray(n, dtype=np.int64)) % N
    return np.exp(2j * np.pi * (idx / N))


def exp_sum_over_set(S: ExceptionalSet, k: int) -> complex:
    """``sum_{n in S} e(kn/N)``."""
    return complex(_e(k % S.N, S.members(), S.N).sum())


def exp_sums(S: ExceptionalSet, K: int) -> np.ndarray:
    """``[sum_{n in S} e(kn/N) for k = 1..K]`` (k reduced modulo N)."""
    ks = np.arange(1, K + 1, dtype=np.int64) % S.N
    n = S.members()
    out = np.empty(K, dtype=np.complex128)
    step = max(1, (1 << 20) // max(n.size, 1))
    for lo in range(0, K, step):
        out[lo : lo + step] = _e(ks[lo : lo + step, None], n[None, :], S.N).sum(axis=1)
    return out


def _nonempty(S: ExceptionalSet) -> np.ndarray:
    n = S.members()
    if n.size == 0:
        raise UndefinedDiscrepancy("discrepancy of an empty set is undefined")
    return n


def star_discrepancy(S: ExceptionalSet, exact: bool = False):
    """Anchored discrepancy ``sup_t |#{x < t}/M - t|`` of the points ``n/N``.

    Closed form over the sorted points: ``max_i max(i/M - x_i, x_i - (i-1)/M)``.
    A single point at 1/2 gives 1/2.

    Raises:
        UndefinedDiscrepancy: ``S`` is empty.
    """
    n = _nonempty(S)
    M, N = n.size, S.N
    i = np.arange(1, M + 1, dtype=np.int64)
    # scaled by M*N: i*N - n_i*M and n_i*M - (i-1)*N
    top = int(max((i * N - n * M).max(), (n * M - (i - 1) * N).max()))
    val = Fraction(top, M * N)
    return val if exact else float(val)


def interval_discrepancy(S: ExceptionalSet, exact: bool = False):
    """Extreme discrepancy: sup over every subinterval of [0, 1], open or closed.

    With ``U_i = i/M - x_i`` (and sentinels ``U_0 = 0`` at ``x = 0``,
    ``U_{M+1} = 1/M`` at ``x = 1``) a closed interval ``[x_i, x_j]`` deviates by
    ``1/M + U_j - U_i`` and an open one ``(x_i, x_j)`` by ``1/M + U_i - U_j``.
    A single point gives 1 (the degenerate closed interval around it).

    Raises:
        UndefinedDiscrepancy: ``S`` is empty.
    """
    n = _nonempty(S)
    M, N = n.size, S.N
    i = np.arange(1, M + 1, dtype=np.int64)
    U = i * N - n * M                      # scaled by M*N
    # closed: max over i <= j of U_j - U_i
    closed = int((U - np.minimum.accumulate(U)).max())
    Us = np.concatenate([[0], U, [N]])     # sentinels at x = 0 and x = 1
    # open: max over i < j of U_i - U_j
    opened = int((np.maximum.accumulate(Us)[:-1] - Us[1:]).max())
    val = Fraction(N + max(closed, opened), M * N)
    return val if exact else float(val)


def erdos_turan_bound(S: ExceptionalSet, K: int, C: float = C_ET) -> float:
    """``C * (M/K + sum_{k<=K} |sum_{n in S} e(kn/N)| / k) / M`` with ``M = |S|``."""
    if K < 1:
        raise InvalidArgument("K must be >= 1")
    M = _nonempty(S).size
    mags = np.abs(exp_sums(S, K))
    ks = np.arange(1, K + 1, dtype=np.float64)
    return float(C * (M / K + np.sum(mags / ks)) / M)


@dataclass(frozen=True, eq=False)
class DiscrepancyReport:
    N: int
    set_id: str
    b: int
    card: int
    star: float
    interval: float
    et_bound: float
    K: int
    exp_sums: np.ndarray = field(repr=False)

    @property
    def dominated(self) -> bool:
        return self.star <= self.et_bound

    def to_row(self) -> dict:
        return {"set_id": self.set_id, "N": self.N, "b": self.b, "card": self.card,
                "star": self.star, "et_bound": self.et_bound, "K": self.K}


def discrepancy_report(S: ExceptionalSet, K: int, set_id: str | None = None) -> DiscrepancyReport:
    sums = exp_sums(S, K)
    return DiscrepancyReport(
        S.N, set_id or f"E_{S.d}({S.N})", S.d, S.card,
        star_discrepancy(S), interval_discrepancy(S), erdos_turan_bound(S, K), K,
        np.abs(sums),
    )


@timed_check
def verify_erdos_turan(S: ExceptionalSet, K: int) -> VerificationReport:
    rep = discrepancy_report(S, K)
    return VerificationReport(
        "erdos_turan", {"N": S.N, "b": S.d, "K": K}, rep.star, rep.et_bound, rep.dominated,
        details={"interval": rep.interval, "interval_dominated": rep.interval <= rep.et_bound,
                 "card": rep.card},
    )


@timed_check
def verify_initial_gap_discrepancy(S: ExceptionalSet, b: int) -> VerificationReport:
    """A nonempty set with no point below ``N/b`` has star discrepancy at least ``~1/b``.

    Exactly: the interval ``[0, t)`` with ``t`` the least member over N holds
    no point, so the discrepancy is at least ``t >= ceil(N/b)/N``.
    """
    n = _nonempty(S)
    lower = Fraction(int(n.min()), S.N)
    star = star_discrepancy(S, exact=True)
    return VerificationReport(
        "gap_discrepancy", {"N": S.N, "b": b}, float(star), float(lower),
        star >= lower and lower >= Fraction(-(-S.N // b), S.N),
    )


@timed_check
def friable_average_check(ctx: DilationContext, b: int, T: int, q: int, k: int) -> VerificationReport:
    """Per-a bound ``|sum_{E_b} e(kn/N) - sum_{E_b} e(kan/N)| <= 2|E_a|`` for a in S(T, q).

    The right side comes from ``|E_b ^ phi_a^{-1}(E_b)| <= 2|E_a|``; the left is a
    difference of two sums of unit-modulus terms, compared with a rounding
    slack of ``1e-9 * N``. The report carries the worst ratio and the
    distance between ``sum_{E_b} e(kn/N)`` and its friable average.

    Raises:
        TableTooSmall: ``ctx`` cannot evaluate ``E_a`` for ``a <= T`` or ``E_b``.
    """
    N = ctx.N
    if max(T, b) > ctx.d_max:
        raise TableTooSmall(max(T, b) * (N - 1), ctx.table.n_max)
    if not 1 <= k:
        raise InvalidArgument("k must be >= 1")
    fs = friable_enumerate(ctx.table, T, q)
    Eb = ctx.exceptional_set(b)
    members = Eb.members()
    base = complex(_e(k, members, N).sum())
    tol = 1e-9 * N
    worst_ratio, worst_a, ok = 0.0, 1, True
    shifted = []
    for a in fs.members:
        s = complex(_e(k * a % N, members, N).sum())
        shifted.append(s)
        diff = abs(base - s)
        cap = 2 * ctx.card(a)
        if diff > cap + tol:
            ok = False
        ratio = diff / cap if cap else (0.0 if diff <= tol else float("inf"))
        if ratio > worst_ratio:
            worst_ratio, worst_a = ratio, a
    avg_gap = abs(base - np.mean(shifted))
    return VerificationReport(
        "friable_average", {"N": N, "b": b, "T": T, "q": q, "k": k},
        worst_ratio, 1.0, ok, tol,
        details={"worst_a": worst_a, "psi": fs.psi, "average_gap": avg_gap},
    )


def friable_exp_sum_profile(fs: FriableSet, N: int, sample) -> list[tuple[int, int, float]]:
    """``(k, n, |(1/Psi) sum_{a in S(T,q)} e(kan/N)|)`` for each sampled ``(k, n)``.

    Report only: these magnitudes are compared with asymptotic decay rates,
    never asserted.
    """
    if N < 3:
        raise InvalidArgument("N must be >= 3")
    a = fs.as_array()
    out = []
    for k, n in sample:
        kn = (int(k) % N) * (int(n) % N) % N
        mag = float(abs(_e(kn, a, N).mean()))
        out.append((int(k), int(n), mag))
    return out
