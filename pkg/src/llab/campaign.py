"""Batch verification campaigns over ranges of N.

A campaign validates its configuration, sizes one shared arithmetic table
for the largest multiplier it will need, fans the N values out to a thread
pool and merges the per-N records back in ascending N order, so output is
identical whatever the completion order or thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import gcd

import numpy as np

from . import characters, dilation, discrepancy, patterns, pierce, spectral
from .arith import ArithTable, build_table, factorize, is_prime
from .errors import InvalidArgument, LlabError, TableTooSmall, TheoremViolation
from .report import VERIFICATION_HEADER, VerificationReport

PATTERN_HEADER = ("N", "corr", "c_pp", "c_pm", "c_mp", "c_mm", "eta", "e_size",
                  "witness_a", "witness_b", "case_tag")
NU_HEADER = ("N", "r", "moment", "ratio")
DISCREPANCY_HEADER = ("set_id", "N", "b", "card", "star", "et_bound", "K")

COMMANDS = ("patterns", "shusterman", "dilation", "spectral", "characters",
            "pierce", "nu-moment", "discrepancy", "full-suite")

HEADERS = {
    "patterns": PATTERN_HEADER,
    "shusterman": PATTERN_HEADER,
    "nu-moment": NU_HEADER,
    "discrepancy": DISCREPANCY_HEADER,
}

# Per-command parameter defaults.
DEFAULTS = {
    "patterns": {},
    "shusterman": {},
    "dilation": {"d": 8},
    "spectral": {"d": 20},
    "characters": {"P": 3},
    "pierce": {"p": 5, "r": 8},
    "nu-moment": {"r": 50},
    "discrepancy": {"d": 10, "K": 10},
    "full-suite": {"d": 4, "p": 5, "r": 6, "T": 4, "q": 2, "K": 10, "P": 3},
}

PRIME_ONLY = {"characters", "pierce", "nu-moment"}


@dataclass
class CampaignConfig:
    """Everything needed to reproduce one campaign.

    Attributes:
        command: One of :data:`COMMANDS`.
        n_start, n_end, step: Inclusive range of N values.
        primes_only: Keep only prime N.
        params: Command parameters (``d, p, r, T, q, K, P``); missing ones
            take the per-command defaults.
        fmt: ``"csv"`` or ``"json"``.
        out: Output path, or ``None`` for standard output.
        seed: Seed for sampled sub-selections.
        threads: Worker count.
    """

    command: str
    n_start: int
    n_end: int
    step: int = 1
    primes_only: bool = False
    params: dict = field(default_factory=dict)
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    threads: int = 1

    def param(self, name: str) -> int:
        v = self.params.get(name)
        return DEFAULTS[self.command].get(name) if v is None else int(v)

    def n_values(self) -> list[int]:
        """The N values the command will actually visit (may be empty)."""
        Ns = range(self.n_start, self.n_end + 1, self.step)
        keep_prime = self.primes_only or self.command in PRIME_ONLY
        out = []
        for N in Ns:
            if N < 3:
                continue
            if self.command == "shusterman" and N % 2:
                continue
            if keep_prime and not is_prime(N):
                continue
            out.append(N)
        return out

    def validate(self) -> list[int]:
        """Check the configuration; return the N values.

        Raises:
            InvalidArgument: unknown command/format, bad range, bad params.
        """
        if self.command not in COMMANDS:
            raise InvalidArgument(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise InvalidArgument(f"unknown format {self.fmt!r}")
        if self.step < 1:
            raise InvalidArgument("--step must be >= 1")
        if self.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        for k, v in self.params.items():
            if v is not None and int(v) < 1:
                raise InvalidArgument(f"--{k} must be >= 1")
        if self.command in ("pierce", "full-suite") and not is_prime(self.param("p")):
            raise InvalidArgument("--p must be prime")
        if self.command == "pierce" and self.param("r") > pierce.SUBSET_MAX_R:
            raise InvalidArgument(f"--r must be <= {pierce.SUBSET_MAX_R} for the pierce checks")
        if self.command == "nu-moment" and self.param("r") < 2:
            raise InvalidArgument("--r must be >= 2 for nu-moment")
        Ns = self.n_values()
        if not Ns:
            raise InvalidArgument("empty N range for this command")
        return Ns

    def multiplier(self) -> int:
        """Largest factor m such that lambda is needed up to m*(N-1)."""
        c = self.command
        if c == "dilation":
            return max(2, self.param("d")) ** 2
        if c == "spectral":
            return max(2, self.param("d"))
        if c == "characters":
            return 2 * self.param("P")
        if c == "pierce":
            return self.param("p")
        if c == "discrepancy":
            return max(2, self.param("d"))
        if c == "full-suite":
            return max(6, self.param("d"), 2 * self.param("P"), self.param("p"), self.param("T"))
        return 1

    def header(self) -> tuple:
        return HEADERS.get(self.command, VERIFICATION_HEADER)


@dataclass
class CampaignResult:
    """Records in (N, check) order plus one pass flag per record.

    ``rows`` holds plain dicts for the tabular commands and
    :class:`VerificationReport` objects for the verification commands.
    """

    config: CampaignConfig
    header: tuple
    rows: list
    passed: list

    def records(self, fmt: str) -> list[dict]:
        """Rows ready for :func:`llab.report.emit` in the given format."""
        out = []
        for r in self.rows:
            if isinstance(r, VerificationReport):
                out.append(r.to_json() if fmt == "json" else r.to_row())
            else:
                out.append(r)
        return out

    @property
    def failures(self) -> int:
        return sum(1 for p in self.passed if not p)

    @property
    def status(self) -> int:
        return 0 if all(self.passed) else 1


def required_n_max(config: CampaignConfig, Ns: list[int]) -> int:
    return max(max(Ns), config.multiplier() * (max(Ns) - 1))


# ---------------------------------------------------------------- per-N work

def _reports(reps) -> tuple[list, list]:
    return list(reps), [bool(r.passed) for r in reps]


def _coprime_range(N, lo, hi):
    return [d for d in range(lo, hi + 1) if gcd(d, N) == 1]


def _patterns_one(cfg, table, N):
    rep = patterns.pattern_report(table, N)
    row = rep.to_row()
    ok = rep.identity_holds() and (N < 11 or abs(rep.corr) < N - 1)
    row.update({"witness_a": "", "witness_b": "", "case_tag": ""})
    if N % 2 == 0 and N >= 4:
        w = _witness(table, N)
        row.update(w.to_row())
        ok = ok and patterns.verify_witness(table, w)
    return [row], [ok]


def _witness(table, N):
    try:
        return patterns.shusterman_witness(table, N)
    except TheoremViolation:
        return patterns.Witness(N, 0, 0, "anomaly")


def _dilation_one(cfg, table, N):
    D = max(2, cfg.param("d"))
    ctx = dilation.DilationContext(table, N, D * D)
    reps = []
    ds = _coprime_range(N, 2, D)
    for d in ds:
        reps.append(dilation.verify_initial_gap(ctx, d))
        reps.append(dilation.verify_exponential_bound(ctx, d))
        if sum(factorize(d).values()) > 1:  # composite d
            reps.append(dilation.verify_composite_bound(ctx, d))
    for a, b in combinations_with_replacement(ds, 2):
        reps.append(dilation.verify_symdiff(ctx, a, b))
    if gcd(N, 6) == 1:
        reps.extend(dilation.verify_small_ratios(ctx))
    return _reports(reps)


def _spectral_one(cfg, table, N):
    D = max(2, cfg.param("d"))
    ctx = dilation.DilationContext(table, N, D)
    spec = spectral.spectrum(table, N)
    reps = [spectral.verify_plancherel(spec)]
    for d in _coprime_range(N, 2, D):
        reps.append(spectral.verify_dilation_defect(spec, table, d, ctx.card(d)))
    return _reports(reps)


def _characters_one(cfg, table, N):
    ct = characters.build_characters(N)
    return _reports([characters.verify_ep_decomposition(ct, table, cfg.param("P"))])


def _pierce_one(cfg, table, N):
    p = cfg.param("p")
    reps = []
    if p < N:
        reps.append(pierce.verify_roundtrip(N, p))
        ctx = dilation.DilationContext(table, N, p)
        reps.append(pierce.verify_product_formula(ctx, p))
    for r in range(1, cfg.param("r") + 1):
        reps.append(pierce.verify_nu_bounds(N, r))
    return _reports(reps)


def _nu_one(cfg, table, N):
    rows = pierce.nu_moment_sweep(N, cfg.param("r"))
    return [r.to_row() for r in rows], [not r.exceeds for r in rows]


def _discrepancy_one(cfg, table, N):
    D = max(2, cfg.param("d"))
    K = cfg.param("K")
    ctx = dilation.DilationContext(table, N, D)
    rows, ok = [], []
    for b in _coprime_range(N, 2, D):
        S = ctx.exceptional_set(b)
        if S.card == 0:
            continue
        rep = discrepancy.discrepancy_report(S, K, f"E_{b}({N})")
        rows.append(rep.to_row())
        ok.append(rep.dominated)
    return rows, ok


def _full_one(cfg, table, N):
    D, p, r, T, q, K, P = (cfg.param(k) for k in ("d", "p", "r", "T", "q", "K", "P"))
    rng = np.random.default_rng([cfg.seed, N])
    reps = [patterns.verify_pattern_identity(table, N)]
    if N >= 11:
        reps.append(patterns.verify_correlation_bound(table, N))
    if N % 2 == 0:
        w = _witness(table, N)
        reps.append(VerificationReport(
            "shusterman_witness", {"N": N}, w.a + w.b, N, patterns.verify_witness(table, w),
            details={"case": w.case}))
    ctx = dilation.DilationContext(table, N, cfg.multiplier())
    if gcd(N, 6) == 1:
        reps.append(dilation.verify_symdiff(ctx, 2, 3))
        reps.extend(dilation.verify_small_ratios(ctx))
    if N % 2:
        reps.append(dilation.verify_subadditivity(ctx, (2, 2)))
        reps.append(dilation.verify_composite_bound(ctx, 4))
    ds = _coprime_range(N, 2, D)
    for d in ds:
        reps.append(dilation.verify_initial_gap(ctx, d))
        reps.append(dilation.verify_exponential_bound(ctx, d))
    spec = spectral.spectrum(table, N)
    reps.append(spectral.verify_plancherel(spec))
    for d in ds:
        reps.append(spectral.verify_dilation_defect(spec, table, d, ctx.card(d)))
    if gcd(N, 2) == 1:
        E2 = ctx.exceptional_set(2)
        if E2.card:
            reps.append(discrepancy.verify_erdos_turan(E2, K))
            reps.append(discrepancy.verify_initial_gap_discrepancy(E2, 2))
    if is_prime(N):
        if any(x % N for x in range(P + 1, 2 * P + 1) if is_prime(x)):
            ct = characters.build_characters(N)
            reps.append(characters.verify_ep_decomposition(ct, table, P, ctx))
        if p < N:
            reps.append(pierce.verify_roundtrip(N, p))
            reps.append(pierce.verify_product_formula(ctx, p))
        for rr in range(1, r + 1):
            reps.append(pierce.verify_nu_bounds(N, rr))
        if T < N:
            k = int(rng.integers(1, N))
            reps.append(discrepancy.friable_average_check(ctx, 2, T, q, k))
    return _reports(reps)


WORKERS = {
    "patterns": _patterns_one,
    "dilation": _dilation_one,
    "spectral": _spectral_one,
    "characters": _characters_one,
    "pierce": _pierce_one,
    "nu-moment": _nu_one,
    "discrepancy": _discrepancy_one,
    "full-suite": _full_one,
}


def _shusterman_all(cfg, table, Ns):
    res = patterns.shusterman_sweep(table, min(Ns), max(Ns))
    wanted = set(Ns)
    rows, ok = [], []
    for w in res.witnesses():
        if w.N not in wanted:
            continue
        row = {k: "" for k in PATTERN_HEADER}
        row.update(w.to_row())
        rows.append(row)
        ok.append(w.found)
    return rows, ok


def cache_dir_from_env() -> str | None:
    return os.environ.get("LLAB_TABLE_CACHE") or None


def run_campaign(config: CampaignConfig, table: ArithTable | None = None) -> CampaignResult:
    """Run every check the command implies for every N; records merged by N.

    Raises:
        InvalidArgument: invalid configuration (including an empty range).
        TableTooSmall: a supplied ``table`` is smaller than the campaign needs.
    """
    Ns = config.validate()
    need = required_n_max(config, Ns)
    if table is None:
        table = build_table(need, cache_dir_from_env())
    elif table.n_max < need:
        raise TableTooSmall(need, table.n_max)
    if config.command == "shusterman":
        rows, ok = _shusterman_all(config, table, Ns)
        return CampaignResult(config, config.header(), rows, ok)
    work = WORKERS[config.command]
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(lambda N: work(config, table, N), Ns))
    else:
        parts = [work(config, table, N) for N in Ns]
    rows, ok = [], []
    for r, o in parts:
        rows.extend(r)
        ok.extend(o)
    return CampaignResult(config, config.header(), rows, ok)


__all__ = ["CampaignConfig", "CampaignResult", "run_campaign", "COMMANDS", "LlabError"]
