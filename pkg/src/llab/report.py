"""Verification records and their CSV / JSON serialization."""
from __future__ import annotations

import csv
import functools
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

VERIFICATION_HEADER = ("check_id", "N", "params", "lhs", "rhs", "passed", "tolerance")


@dataclass
class VerificationReport:
    """Outcome of one identity or inequality check.

    ``passed`` is computed by the producing function from its own stated
    comparison (``lhs <= rhs`` or ``|lhs - rhs| <= tolerance``); the record
    itself never re-derives it. ``elapsed`` is wall time in seconds and is
    deliberately left out of CSV output so that reruns are byte-identical.
    """

    check_id: str
    inputs: dict
    lhs: Any
    rhs: Any
    passed: bool
    tolerance: float = 0.0
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.inputs.get("N", "")

    def params(self) -> str:
        return ";".join(f"{k}={fmt_value(v)}" for k, v in sorted(self.inputs.items()) if k != "N")

    def to_row(self) -> dict:
        return {
            "check_id": self.check_id,
            "N": self.N,
            "params": self.params(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "tolerance": self.tolerance,
        }

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "passed": bool(self.passed),
            "tolerance": float(self.tolerance),
            "elapsed": float(self.elapsed),
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def timed_check(fn):
    """Decorator: record wall time on the VerificationReport(s) ``fn`` returns."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        dt = time.perf_counter() - t0
        for rep in out if isinstance(out, list) else [out]:
            rep.elapsed = dt
        return out

    return wrapper


def fmt_value(v) -> str:
    """Render a scalar for CSV: integers verbatim, floats with 17 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return format(v, ".17g")
    if isinstance(v, complex):
        return f"{format(v.real, '.17g')}{format(v.imag, '+.17g')}j"
    if hasattr(v, "item"):  # numpy scalar
        return fmt_value(v.item())
    if isinstance(v, (tuple, list)):
        return " ".join(fmt_value(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item") and not hasattr(v, "__len__"):
        return v.item()
    if hasattr(v, "tolist"):
        return v.tolist()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return v


def render_csv(rows: Iterable[dict], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_value(row.get(col)) for col in header])
    return buf.getvalue()


def render_json(rows: Iterable[dict]) -> str:
    # blank CSV cells become JSON nulls
    objs = [{k: None if v == "" else _jsonable(v) for k, v in r.items()} for r in rows]
    return json.dumps(objs, indent=1) + "\n"


def emit(rows: Iterable[dict], fmt: str, header: Sequence[str], path=None, stream=None) -> str:
    """Serialize ``rows`` as CSV (fixed ``header``) or a JSON array.

    Writes UTF-8 text to ``path`` when given, else to ``stream`` when given,
    and always returns the rendered text.

    Raises:
        OSError: the output path is not writable.
        ValueError: unknown format.
    """
    rows = list(rows)
    if fmt == "csv":
        text = render_csv(rows, header)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text
