"""Sign patterns of (lambda(n), lambda(N-n)), the base exceptional set, and
Goldbach-type witnesses a + b = N with lambda(a) = lambda(b) = -1.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _backend, _pykernels as _k
from .arith import ArithTable
from .bitset import ExceptionalSet
from .errors import InvalidArgument, TableTooSmall, TheoremViolation
from .report import VerificationReport, timed_check

CASE_NAMES = {
    _k.TAG_ANOMALY: "anomaly",
    _k.TAG_NONE: "none",
    _k.TAG_BRUTE: "brute",
    _k.TAG_II: "ii",
    _k.TAG_III: "iii",
    _k.TAG_IV: "iv",
}


@dataclass(frozen=True)
class PatternReport:
    """Correlation and sign-pattern counts for one N.

    ``counts`` maps ``(eta1, eta2)`` to ``#{n < N : (lambda(n), lambda(N-n)) = (eta1, eta2)}``.
    """

    N: int
    corr: int
    counts: dict
    eta_min: int
    e_size: int

    def agreement(self, eta: int) -> int:
        """``#{n < N : lambda(n) lambda(N-n) = eta}``."""
        if eta == 1:
            return self.counts[(1, 1)] + self.counts[(-1, -1)]
        return self.counts[(1, -1)] + self.counts[(-1, 1)]

    def identity_holds(self) -> bool:
        """Check ``N - 1 + eta*corr == 2 * agreement(eta)`` for both signs."""
        return all(self.N - 1 + eta * self.corr == 2 * self.agreement(eta) for eta in (1, -1))

    def to_row(self) -> dict:
        c = self.counts
        return {
            "N": self.N, "corr": self.corr,
            "c_pp": c[(1, 1)], "c_pm": c[(1, -1)], "c_mp": c[(-1, 1)], "c_mm": c[(-1, -1)],
            "eta": self.eta_min, "e_size": self.e_size,
        }


def _check_N(table: ArithTable, N: int) -> None:
    if N < 3:
        raise InvalidArgument(f"N must be >= 3, got {N}")
    if N > table.n_max:
        raise TableTooSmall(N, table.n_max)


def pattern_report(table: ArithTable, N: int) -> PatternReport:
    """Correlation sum, the four pattern counts and the size of E(N)."""
    _check_N(table, N)
    pp, pm, mp, mm = _backend.kernels.pattern_counts(table.lam, N)
    counts = {(1, 1): pp, (1, -1): pm, (-1, 1): mp, (-1, -1): mm}
    agree_plus, agree_minus = pp + mm, pm + mp
    eta = 1 if agree_plus <= agree_minus else -1
    return PatternReport(N, agree_plus - agree_minus, counts, eta, min(agree_plus, agree_minus))


def exceptional_set_base(table: ArithTable, N: int) -> tuple[int, ExceptionalSet]:
    """The smaller agreement set ``E(N)``, ties broken towards ``eta = +1``."""
    _check_N(table, N)
    lam = table.lam
    prod = np.zeros(N, dtype=np.int8)
    prod[1:] = lam[1:N] * lam[N - 1 : 0 : -1]
    plus = prod == 1
    n_plus = int(np.count_nonzero(plus))
    eta = 1 if n_plus <= (N - 1) - n_plus else -1
    mask = plus if eta == 1 else prod == -1
    return eta, ExceptionalSet.from_mask(N, 1, mask, eta=eta)


@timed_check
def verify_pattern_identity(table: ArithTable, N: int) -> VerificationReport:
    """Exact check of the agreement-count identity for both signs."""
    rep = pattern_report(table, N)
    lhs = rep.N - 1 + rep.eta_min * rep.corr
    rhs = 2 * rep.e_size
    ok = rep.identity_holds() and lhs == rhs
    return VerificationReport(
        "pattern_identity", {"N": N}, lhs, rhs, ok,
        details={"corr": rep.corr, "eta": rep.eta_min},
    )


@timed_check
def verify_correlation_bound(table: ArithTable, N: int) -> VerificationReport:
    """``|corr| < N - 1``: both agreement sets are nonempty."""
    rep = pattern_report(table, N)
    return VerificationReport(
        "corr_bound", {"N": N}, abs(rep.corr), N - 1, abs(rep.corr) < N - 1,
    )


@dataclass(frozen=True)
class Witness:
    """A pair ``a + b = N`` with ``lambda(a) = lambda(b) = -1`` and how it was found.

    ``case`` is one of ``"ii"``, ``"iii"``, ``"iv"``, ``"brute"``; ``"none"``
    means no pair exists (a reportable result, ``a = b = 0``).
    """

    N: int
    a: int
    b: int
    case: str

    @property
    def found(self) -> bool:
        return self.case not in ("none", "anomaly")

    def to_row(self) -> dict:
        return {"N": self.N, "witness_a": self.a if self.found else "",
                "witness_b": self.b if self.found else "", "case_tag": self.case}


def square_pattern_witness(table: ArithTable, M: int) -> int:
    """Odd ``d = M - 2n`` for the least ``1 <= n <= (M-1)/2`` with ``lambda(n) = lambda(M-n)``.

    Then ``lambda(M^2 - d^2) = lambda(2n) lambda(2(M-n)) = +1``.

    Raises:
        TheoremViolation: no such ``n`` exists (impossible for ``M >= 11``).
    """
    if M < 11 or M % 2 == 0:
        raise InvalidArgument(f"M must be odd and >= 11, got {M}")
    if M * M > table.n_max:
        raise TableTooSmall(M * M, table.n_max)
    d = _k._square_witness(table.lam, M)
    if not d:
        raise TheoremViolation(f"no n < M/2 with lambda(n) = lambda(M-n) for M={M}")
    return int(d)


def shusterman_witness(table: ArithTable, N: int) -> Witness:
    """Witness for even N, tried in order: 8|N lift, N/2 + N/2, odd-square split, scan.

    Raises:
        TheoremViolation: the odd-square step found no usable ``d`` for ``M >= 11``.
    """
    if N < 4 or N % 2:
        raise InvalidArgument(f"N must be even and >= 4, got {N}")
    if N > table.n_max:
        raise TableTooSmall(N, table.n_max)
    a, b, tag = _backend.kernels.shusterman_one(table.lam, table.pplus, N)
    if tag == _k.TAG_ANOMALY:
        raise TheoremViolation(f"odd-square step failed for N={N}")
    return Witness(N, int(a), int(b), CASE_NAMES[int(tag)])


@dataclass
class SweepResult:
    """Witnesses for every even N in a range, as parallel arrays."""

    Ns: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tags: np.ndarray

    def case_counts(self) -> dict:
        c = Counter(int(t) for t in self.tags)
        return {CASE_NAMES[t]: c[t] for t in sorted(c)}

    def missing(self) -> list[int]:
        """Even N with no witness, or where the odd-square step misfired."""
        bad = (self.tags == _k.TAG_NONE) | (self.tags == _k.TAG_ANOMALY)
        return [int(n) for n in self.Ns[bad]]

    def witnesses(self):
        for N, a, b, t in zip(self.Ns.tolist(), self.a.tolist(), self.b.tolist(), self.tags.tolist()):
            yield Witness(N, a, b, CASE_NAMES[t])


def shusterman_sweep(table: ArithTable, n_lo: int, n_hi: int) -> SweepResult:
    """Witnesses for all even ``n_lo <= N <= n_hi`` (anomalies recorded, not raised)."""
    n_lo = max(int(n_lo), 4)
    if n_hi > table.n_max:
        raise TableTooSmall(n_hi, table.n_max)
    Ns, a, b, t = _backend.kernels.shusterman_sweep(table.lam, table.pplus, n_lo, int(n_hi))
    return SweepResult(np.asarray(Ns), np.asarray(a), np.asarray(b), np.asarray(t))


def verify_witness(table: ArithTable, w: Witness) -> bool:
    """Independent check that a witness is a genuine (-, -) pair summing to N."""
    if not w.found:
        return False
    return (w.a + w.b == w.N and 1 <= w.a and 1 <= w.b
            and table.lam[w.a] == -1 and table.lam[w.b] == -1)
