"""Dilations n -> d*n mod N, the sign products Lambda_d and their exceptional sets.

``E_d(N) = {n < N : lambda(dn) lambda(phi_d(n)) = -1}`` with ``phi_d(n)`` the
representative of ``d*n`` in ``(0, N)``. The ratio ``g(d) = |E_d| / |E|``
and the set identities relating different ``d`` are checked exactly on bit-sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from . import _backend
from .arith import ArithTable, factorize
from .bitset import ExceptionalSet
from .errors import InvalidArgument, TableTooSmall, UndefinedRatio
from .patterns import exceptional_set_base
from .report import VerificationReport, timed_check


def phi(d: int, n: int, N: int) -> int:
    """Representative of ``d*n mod N`` in ``(0, N)``.

    Raises:
        InvalidArgument: ``n`` outside ``[1, N)`` or ``d*n`` divisible by N.
    """
    if not 1 <= n < N or d < 1:
        raise InvalidArgument(f"need 1 <= n < N and d >= 1 (d={d}, n={n}, N={N})")
    r = (d * n) % N
    if r == 0:
        raise InvalidArgument(f"d*n = {d * n} is divisible by N={N}")
    return r


@dataclass(eq=False)
class DilationContext:
    """Shared table and modulus for every dilation up to ``d_max``.

    The table size contract (``lambda`` known up to ``d_max*(N-1)``) is
    validated once at construction. Sets are cached per ``d``; the cache is
    only ever filled with deterministic values so concurrent readers are safe.
    """

    table: ArithTable
    N: int
    d_max: int = 2
    _cache: dict = field(default_factory=dict, repr=False)
    _base: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.N < 2:
            raise InvalidArgument(f"N must be >= 2, got {self.N}")
        if self.d_max < 1:
            raise InvalidArgument("d_max must be >= 1")
        need = self.d_max * (self.N - 1)
        if need > self.table.n_max:
            raise TableTooSmall(need, self.table.n_max)

    def _check_d(self, d: int) -> None:
        if d < 1:
            raise InvalidArgument(f"d must be >= 1, got {d}")
        if d > self.d_max:
            raise TableTooSmall(d * (self.N - 1), self.d_max * (self.N - 1))
        if gcd(d, self.N) != 1:
            raise InvalidArgument(f"gcd({d}, {self.N}) != 1")

    def lambda_pair(self, d: int, n: int) -> int:
        """``Lambda_d(n) = lambda(dn) lambda(phi_d(n))``."""
        self._check_d(d)
        lam = self.table.lam
        return int(lam[d * n]) * int(lam[phi(d, n, self.N)])

    def base(self) -> tuple[int, ExceptionalSet]:
        """``(eta, E(N))``."""
        if self._base is None:
            self._base = exceptional_set_base(self.table, self.N)
        return self._base

    def exceptional_set(self, d: int) -> ExceptionalSet:
        self._check_d(d)
        s = self._cache.get(d)
        if s is None:
            mask = _backend.kernels.dilation_mask(self.table.lam, self.N, d)
            s = ExceptionalSet.from_mask(self.N, d, mask.view(bool))
            self._cache[d] = s
        return s

    def card(self, d: int) -> int:
        return self.exceptional_set(d).card


def exceptional_set_d(ctx: DilationContext, d: int) -> ExceptionalSet:
    """``E_d(N)`` as a bit-set."""
    return ctx.exceptional_set(d)


def lambda_pair(ctx: DilationContext, d: int, n: int) -> int:
    return ctx.lambda_pair(d, n)


@dataclass(frozen=True)
class GRatio:
    """``g(d) = num / den`` kept as an exact integer pair."""

    d: int
    num: int
    den: int

    @property
    def value(self) -> float:
        return self.num / self.den

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


def g_ratio(ctx: DilationContext, d: int) -> GRatio:
    """``|E_d(N)| / |E(N)|``.

    Raises:
        UndefinedRatio: ``E(N)`` is empty (only possible for N < 11).
    """
    den = ctx.base()[1].card
    if den == 0:
        raise UndefinedRatio(f"E({ctx.N}) is empty")
    return GRatio(d, ctx.card(d), den)


@timed_check
def verify_symdiff(ctx: DilationContext, a: int, b: int) -> VerificationReport:
    """Check the three set relations between ``E_a``, ``E_b`` and ``E_ab``.

    (i)   ``E_ab = E_b ^ phi_b^{-1}(E_a)``
    (ii)  ``E_a ^ phi_a^{-1}(E_b) = E_b ^ phi_b^{-1}(E_a)``
    (iii) ``|E_b ^ phi_a^{-1}(E_b)| <= 2 |E_a|``

    ``lhs``/``rhs`` carry the two sides of (iii); (i) and (ii) are exact
    equalities recorded in ``details``.
    """
    if a < 2 or b < 2:
        raise InvalidArgument("a, b must be >= 2")
    Ea, Eb, Eab = ctx.exceptional_set(a), ctx.exceptional_set(b), ctx.exceptional_set(a * b)
    right = Eb ^ Ea.preimage(b)
    left = Ea ^ Eb.preimage(a)
    drift = Eb ^ Eb.preimage(a)
    composition = Eab == right
    reciprocity = left == right
    bound = drift.card <= 2 * Ea.card
    return VerificationReport(
        "symdiff", {"N": ctx.N, "a": a, "b": b}, drift.card, 2 * Ea.card,
        composition and reciprocity and bound,
        details={
            "composition": composition, "reciprocity": reciprocity, "drift_bound": bound,
            "card_a": Ea.card, "card_b": Eb.card, "card_ab": Eab.card,
            "card_left": left.card, "card_right": right.card,
        },
    )


@timed_check
def verify_subadditivity(ctx: DilationContext, factors) -> VerificationReport:
    """``|E_{m1...mk}| <= k * sum |E_mi|`` (the ratio inequality scaled by |E|)."""
    factors = [int(m) for m in factors]
    if not factors or any(m < 2 for m in factors):
        raise InvalidArgument("factors must be a nonempty list of integers >= 2")
    d = prod(factors)
    lhs = ctx.card(d)
    rhs = len(factors) * sum(ctx.card(m) for m in factors)
    return VerificationReport(
        "subadditivity", {"N": ctx.N, "factors": tuple(factors)}, lhs, rhs, lhs <= rhs,
    )


@timed_check
def verify_composite_bound(ctx: DilationContext, d: int) -> VerificationReport:
    """``|E_d| <= Omega(d) * sum_{p^k || d} k |E_p|``."""
    fac = factorize(d)
    omega = sum(fac.values())
    lhs = ctx.card(d)
    rhs = omega * sum(k * ctx.card(p) for p, k in fac.items())
    return VerificationReport("composite_bound", {"N": ctx.N, "d": d}, lhs, rhs, lhs <= rhs)


@timed_check
def verify_ratio_bound(ctx: DilationContext, d: int, bound: int, check_id: str = "g_bound") -> VerificationReport:
    """``|E_d| <= bound * |E|``, i.e. ``g(d) <= bound`` without dividing."""
    lhs = ctx.card(d)
    rhs = int(bound) * ctx.base()[1].card
    return VerificationReport(check_id, {"N": ctx.N, "d": d, "bound": bound}, lhs, rhs, lhs <= rhs)


@timed_check
def verify_small_ratios(ctx: DilationContext) -> list[VerificationReport]:
    """``g(2) <= 2`` and ``g(3) <= 6``; only meaningful when ``gcd(N, 6) = 1``."""
    if gcd(ctx.N, 6) != 1:
        raise InvalidArgument("the g(2), g(3) bounds are stated for gcd(N, 6) = 1")
    return [verify_ratio_bound(ctx, 2, 2, "g2_bound"), verify_ratio_bound(ctx, 3, 6, "g3_bound")]


@timed_check
def verify_exponential_bound(ctx: DilationContext, d: int) -> VerificationReport:
    """``g(d) <= 2^(d^2)``."""
    return verify_ratio_bound(ctx, d, 2 ** (d * d), "g_exp_bound")


@timed_check
def verify_initial_gap(ctx: DilationContext, d: int) -> VerificationReport:
    """``E_d`` has no member below ``N/d``."""
    below = ctx.exceptional_set(d).count_below(ctx.N / d)
    return VerificationReport("initial_gap", {"N": ctx.N, "d": d}, below, 0, below == 0)
