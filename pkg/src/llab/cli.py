"""Command-line entry point: ``llab <command> --n-start A --n-end B [options]``.

Exit status: 0 when every assertable check passed, 1 when at least one
failed, 2 for usage errors (including an empty range or a table that would
be too small), 3 when the output cannot be written.
"""
from __future__ import annotations

import argparse
import sys
import time
from collections import Counter

from . import __version__, _backend
from .campaign import COMMANDS, CampaignConfig, run_campaign
from .errors import InvalidArgument, TableTooSmall, UnsupportedMode
from .report import emit

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's default exit status is already 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="llab", description="Liouville sign-pattern verification laboratory")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--n-start", type=int, required=True)
    ap.add_argument("--n-end", type=int, required=True)
    ap.add_argument("--step", type=int, default=1)
    ap.add_argument("--primes-only", action="store_true")
    for name, helptext in (("d", "largest dilation / set index"), ("p", "prime cutoff"),
                           ("r", "largest digit"), ("T", "friable range"),
                           ("q", "friability bound"), ("K", "Erdős–Turán cutoff"),
                           ("P", "dyadic prime range (P, 2P]")):
        ap.add_argument(f"--{name}", type=int, default=None, help=helptext)
    ap.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default=None, help="output path (default: standard output)")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--version", action="version", version=f"llab {__version__}")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = {k: getattr(args, k) for k in ("d", "p", "r", "T", "q", "K", "P")}
    cfg = CampaignConfig(
        command=args.command, n_start=args.n_start, n_end=args.n_end, step=args.step,
        primes_only=args.primes_only, params={k: v for k, v in params.items() if v is not None},
        fmt=args.fmt, out=args.out, seed=args.seed, threads=args.threads,
    )
    t0 = time.perf_counter()
    try:
        result = run_campaign(cfg)
    except TableTooSmall as exc:
        print(f"llab: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArgument, UnsupportedMode) as exc:
        print(f"llab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit(result.records(cfg.fmt), cfg.fmt, result.header, path=cfg.out,
             stream=None if cfg.out else sys.stdout)
    except OSError as exc:
        print(f"llab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    summary = (f"llab {cfg.command}: {len(result.rows)} rows, {result.failures} failed, "
               f"{time.perf_counter() - t0:.2f}s [{_backend.NAME} kernels]")
    if cfg.command == "shusterman":
        tags = Counter(row["case_tag"] for row in result.rows)
        summary += " cases " + ",".join(f"{k}={tags[k]}" for k in sorted(tags))
    print(summary, file=sys.stderr)
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
