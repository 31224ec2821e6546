"""Pierce expansions of n/N, truncated signatures and the preimage counts nu_r.

The step map is ``theta(n) = N - n*floor(N/n)`` (so ``n/N = 1/r - theta(n)/(rN)``
with ``r = floor(N/n)``). Iterating it from ``n`` produces strictly increasing
digits ``r_1 < r_2 < ...``; the p-signature keeps the digits below ``p``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import log

import numpy as np

from . import _backend
from .arith import is_prime
from .dilation import DilationContext
from .errors import InvalidArgument, TableTooSmall, UnsupportedMode
from .report import VerificationReport, timed_check

#: Largest digit for which the subset enumeration (2^(r-1) subsets) is allowed.
SUBSET_MAX_R = 22

#: Bound on ``moment * r / (N log r)`` frozen from the calibration sweep at
#: N = 1009, r = 2..50 (see ``calibrate_nu_constant``). The maximum sits at
#: r = 50 (moment 252, a single m in range); recomputing it must reproduce
#: this value exactly.
NU_CALIBRATION_N = 1009
NU_CALIBRATION_RMAX = 50
NU_RATIO_BOUND = 3.192110956199382

_INT64_SAFE = 2**62


def theta(n: int, N: int) -> int:
    """``N - n*floor(N/n)`` for ``1 <= n < N``."""
    if not 1 <= n < N:
        raise InvalidArgument(f"need 1 <= n < N (n={n}, N={N})")
    return N - n * (N // n)


@dataclass(frozen=True)
class PierceSignature:
    """Digits below ``p`` of the Pierce expansion of ``n/N`` and the visited points.

    ``trajectory[j] = theta^j(n)`` for ``0 <= j <= k`` and
    ``digits[j] = floor(N / trajectory[j])``. The walk stops at the first
    point with ``floor(N/x) >= p``, i.e. ``x < N/p``.
    """

    N: int
    n: int
    p: int
    digits: tuple
    trajectory: tuple

    @property
    def k(self) -> int:
        return len(self.digits)

    @property
    def residual(self) -> int:
        return self.trajectory[-1]


def _check_prime_pair(N: int, p: int) -> None:
    if not is_prime(N):
        raise InvalidArgument(f"N={N} must be prime")
    if not (is_prime(p) and p < N):
        raise InvalidArgument(f"p={p} must be a prime below N={N}")


def p_signature(n: int, N: int, p: int) -> PierceSignature:
    """Truncated signature of ``n/N``; empty when ``n < N/p``."""
    _check_prime_pair(N, p)
    if not 1 <= n < N:
        raise InvalidArgument(f"need 1 <= n < N (n={n}, N={N})")
    digits, traj = [], [n]
    x = n
    while x > 0 and N // x < p:
        r = N // x
        digits.append(r)
        x = N - r * x
        traj.append(x)
    return PierceSignature(N, n, p, tuple(digits), tuple(traj))


@dataclass(frozen=True)
class Reconstruction:
    value: Fraction
    in_range: bool  # value is an integer in (0, N)


def reconstruct(digits, residual: int, N: int) -> Reconstruction:
    """Evaluate ``N * sum_j (-1)^(j-1)/(r_1...r_j) + (-1)^k residual/(r_1...r_k)`` exactly.

    With no digits the value is ``residual`` itself.
    """
    digits = tuple(int(r) for r in digits)
    if any(r < 1 for r in digits) or any(b <= a for a, b in zip(digits, digits[1:])):
        raise InvalidArgument("digits must be strictly increasing positive integers")
    if not 0 <= residual < N:
        raise InvalidArgument(f"residual must lie in [0, N), got {residual}")
    # common denominator P_k; numerator accumulated digit by digit
    num, den = 0, 1
    for j, r in enumerate(digits, 1):
        den *= r
        num = num * r + (N if j % 2 == 1 else -N)
    sign = -1 if len(digits) % 2 else 1
    value = Fraction(num + sign * residual, den)
    ok = value.denominator == 1 and 0 < value < N
    return Reconstruction(value, ok)


@timed_check
def verify_roundtrip(N: int, p: int) -> VerificationReport:
    """Reconstruct every ``n < N`` from its p-signature; zero mismatches allowed."""
    _check_prime_pair(N, p)
    checked, bad, wide = _backend.kernels.pierce_roundtrip(N, p)
    return VerificationReport(
        "pierce_roundtrip", {"N": N, "p": p}, bad, 0, bad == 0,
        details={"checked": checked, "wide_rows": wide},
    )


@timed_check
def verify_product_formula(ctx: DilationContext, p: int, diagnose: bool = True,
                           sample: int = 10) -> VerificationReport:
    """Count ``n`` where ``Lambda_p(n)`` differs from the product over the signature.

    The product is ``prod_j Lambda_{r_j}(phi_p(n_{j-1}))``; the failure count F
    must satisfy ``F <= 2p |E(N)|``. With ``diagnose`` the report also counts
    failures whose trajectory never meets ``E(N)`` via ``r_j n_{j-1}`` or
    ``phi_p(n_j)`` (these would be unexplained and are expected to be zero).
    """
    N = ctx.N
    _check_prime_pair(N, p)
    if p > ctx.d_max:
        raise TableTooSmall(p * (N - 1), ctx.table.n_max)
    E = ctx.base()[1]
    fail, explained = _backend.kernels.product_formula_scan(
        ctx.table.lam, N, p, E.mask().view(np.uint8))
    fail = fail.view(bool)
    F = int(np.count_nonzero(fail))
    budget = 2 * p * E.card
    details = {"e_size": E.card, "failing_sample": tuple(int(n) for n in np.nonzero(fail)[0][:sample])}
    if diagnose:
        details["unexplained"] = int(np.count_nonzero(fail & ~explained.view(bool)))
    return VerificationReport("product_formula", {"N": N, "p": p}, F, budget, F <= budget, details=details)


# --------------------------------------------------------------------------
# nu_r(m): how many n < N have m on their theta-trajectory (with digit r at m)
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NuStats:
    """``values[i] = nu_r(ms[i])`` for every m with ``floor(N/m) = r``."""

    N: int
    r: int
    ms: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    mode: str = "trajectory-scan"

    @property
    def moment(self) -> int:
        return int(self.values.sum())

    @property
    def max_value(self) -> int:
        return int(self.values.max()) if self.values.size else 0

    def as_dict(self) -> dict:
        return {int(m): int(v) for m, v in zip(self.ms, self.values)}


def digit_range(N: int, r: int) -> np.ndarray:
    """All m in ``[1, N)`` with ``floor(N/m) = r``, i.e. ``N/(r+1) < m <= N/r``."""
    lo = N // (r + 1) + 1
    hi = min(N // r, N - 1)
    return np.arange(lo, hi + 1, dtype=np.int64)


def _subset_data(r: int, N: int):
    """For each R subset of {1..r-1}: (A, D, sign) with n*D = N*A + sign*m."""
    out = []
    for size in range(r):
        for R in itertools.combinations(range(1, r), size):
            A, D = 0, 1
            for j, x in enumerate(R, 1):
                D *= x
                A = A * x + (1 if j % 2 == 1 else -1)
            out.append((R, A, D, -1 if size % 2 else 1))
    return out


def _signature_prefix_ok(n: int, N: int, R, m: int) -> bool:
    x = n
    for r in R:
        if x <= 0 or N // x != r:
            return False
        x = N - r * x
    return x == m


def _nu_subset(N: int, r: int, ms: np.ndarray) -> np.ndarray:
    vals = np.zeros(ms.size, dtype=np.int64)
    if not ms.size:
        return vals
    data = _subset_data(r, N)
    big = max(D + abs(A) for _, A, D, _ in data)
    candidates = []  # (subset index, m index, n)
    if N * (big + 1) < _INT64_SAFE:
        # every subset against every m at once, in bounded chunks
        A = np.array([t[1] for t in data], dtype=np.int64)
        D = np.array([t[2] for t in data], dtype=np.int64)
        S = np.array([t[3] for t in data], dtype=np.int64)
        step = max(1, (1 << 22) // ms.size)
        for lo in range(0, len(data), step):
            sl = slice(lo, lo + step)
            top = N * A[sl, None] + S[sl, None] * ms[None, :]
            ok = top % D[sl, None] == 0
            n = np.where(ok, top // D[sl, None], 0)
            si, mi = np.nonzero(ok & (n > 0) & (n < N))
            candidates.extend(zip((si + lo).tolist(), mi.tolist(), n[si, mi].tolist()))
    else:
        for k, (_, A, D, sign) in enumerate(data):
            for i, m in enumerate(ms.tolist()):
                top = N * A + sign * m
                if top % D == 0 and 0 < top // D < N:
                    candidates.append((k, i, top // D))
    for k, i, n in candidates:
        # the formula only yields potential preimages: confirm forward
        if _signature_prefix_ok(int(n), N, data[k][0], int(ms[i])):
            vals[i] += 1
    return vals


def nu_compute(N: int, r: int, mode: str = "trajectory-scan") -> NuStats:
    """``nu_r(m)`` for every m in the digit-r range.

    Modes:
        ``"trajectory-scan"``: walk every trajectory and count visits.
        ``"subset-oracle"``: enumerate candidate digit prefixes
        ``R subset {1..r-1}``, solve the reconstruction for n, and keep the
        integer solutions whose forward signature really passes through m.

    Raises:
        UnsupportedMode: subset mode with ``r > 22``, or an unknown mode.
    """
    if not is_prime(N):
        raise InvalidArgument(f"N={N} must be prime")
    if r < 1:
        raise InvalidArgument("r must be >= 1")
    ms = digit_range(N, r)
    if mode == "trajectory-scan":
        nu = _backend.kernels.nu_scan(N, r)
        vals = np.asarray(nu[ms], dtype=np.int64)
    elif mode == "subset-oracle":
        if r > SUBSET_MAX_R:
            raise UnsupportedMode(f"subset enumeration needs r <= {SUBSET_MAX_R}, got {r}")
        vals = _nu_subset(N, r, ms)
    else:
        raise UnsupportedMode(f"unknown mode {mode!r}")
    return NuStats(N, r, ms, vals, mode)


@timed_check
def verify_nu_bounds(N: int, r: int) -> VerificationReport:
    """Both modes agree exactly and ``max_m nu_r(m) <= 2^(r-1)``."""
    scan = nu_compute(N, r, "trajectory-scan")
    sub = nu_compute(N, r, "subset-oracle")
    agree = bool(np.array_equal(scan.values, sub.values))
    lhs, rhs = scan.max_value, 2 ** (r - 1)
    return VerificationReport(
        "nu_pointwise", {"N": N, "r": r}, lhs, rhs, agree and lhs <= rhs,
        details={"modes_agree": agree, "moment": scan.moment},
    )


@dataclass(frozen=True)
class NuMomentRow:
    N: int
    r: int
    moment: int
    ratio: float
    exceeds: bool

    def to_row(self) -> dict:
        return {"N": self.N, "r": self.r, "moment": self.moment, "ratio": self.ratio}


def nu_moment_sweep(N: int, r_max: int, bound: float | None = None) -> list[NuMomentRow]:
    """Rows ``(r, sum_m nu_r(m), moment * r / (N log r))`` for ``r = 2..r_max``.

    One trajectory scan serves every r. ``exceeds`` flags ratios above
    ``bound`` (default: the frozen calibration constant).
    """
    if r_max < 2:
        raise InvalidArgument("r_max must be >= 2")
    if not is_prime(N):
        raise InvalidArgument(f"N={N} must be prime")
    bound = NU_RATIO_BOUND if bound is None else bound
    nu = _backend.kernels.nu_scan(N, r_max)
    rows = []
    for r in range(2, r_max + 1):
        ms = digit_range(N, r)
        moment = int(nu[ms].sum())
        ratio = moment * r / (N * log(r))
        rows.append(NuMomentRow(N, r, moment, ratio, ratio > bound))
    return rows


def calibrate_nu_constant(N: int = NU_CALIBRATION_N, r_max: int = NU_CALIBRATION_RMAX) -> float:
    """Largest normalized moment over ``r = 2..r_max`` at ``N``."""
    return max(row.ratio for row in nu_moment_sweep(N, r_max, bound=float("inf")))
