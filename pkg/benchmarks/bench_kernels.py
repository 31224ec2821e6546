"""Time every hot kernel under the numpy fallback and the compiled backend.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Prints one row per kernel with the best-of-``repeat`` wall time for each
backend and the speed-up. Both backends are also checked to return equal
results on each workload before timing.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from llab import _backend
from llab.arith import build_table
from llab.spectral import unit_roots


def workloads(table, scale: float):
    s = lambda n: max(11, int(n * scale))  # noqa: E731
    lam, pplus = table.lam, table.pplus
    N_mid = 10_007 if scale >= 1 else 1009
    N_dft = 4099 if scale >= 1 else 409
    x = np.random.default_rng(0).choice([-1.0, 1.0], N_dft)
    roots = unit_roots(N_dft)
    in_e = np.zeros(N_mid, dtype=np.uint8)
    in_e[np.random.default_rng(1).integers(1, N_mid, N_mid // 10)] = 1
    return [
        ("sieve(1e6)", lambda k: k.sieve(s(1_000_000))),
        ("dilation_mask(N=1e5+3, d=7)", lambda k: k.dilation_mask(lam, 100_003, 7)),
        ("pattern_counts(N=1e5+3)", lambda k: k.pattern_counts(lam, 100_003)),
        (f"dft_direct(N={N_dft})", lambda k: k.dft_direct(x, roots)),
        (f"pierce_roundtrip(N={N_mid}, p=31)", lambda k: k.pierce_roundtrip(N_mid, 31)),
        (f"product_formula_scan(N={N_mid}, p=13)",
         lambda k: k.product_formula_scan(lam, N_mid, 13, in_e)),
        ("nu_scan(N=1e5+3, r=50)", lambda k: k.nu_scan(100_003, 50)),
        ("shusterman_sweep(4..2e5)", lambda k: k.shusterman_sweep(lam, pplus, 4, s(200_000))),
    ]


def _equal(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_equal(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind == "c":
        return np.allclose(a, b, atol=1e-9 * a.size)
    return np.array_equal(a, b)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="shrink workloads for a quick run")
    args = ap.parse_args(argv)
    if not _backend.COMPILED_AVAILABLE:
        print("compiled kernels are not built; only the numpy fallback is available")
        return 1
    py, cy = _backend.get("python"), _backend.get("cython")
    table = build_table(1_000_000)
    print(f"{'kernel':<40} {'python [s]':>11} {'cython [s]':>11} {'speed-up':>9}")
    for name, fn in workloads(table, args.scale):
        if not _equal(fn(py), fn(cy)):
            print(f"{name:<40} backends disagree")
            return 2
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:<40} {t_py:>11.4f} {t_cy:>11.4f} {t_py / t_cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
