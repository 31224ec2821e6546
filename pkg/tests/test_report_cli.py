import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from llab.campaign import CampaignConfig, run_campaign
from llab.cli import main
from llab.errors import InvalidArgument, TableTooSmall
from llab.report import VerificationReport, emit, fmt_value, render_csv, timed_check


def _run(argv, tmp_path, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else None


# ------------------------------------------------------------- serialization

def test_fmt_value():
    assert fmt_value(0.1) == "0.10000000000000001"
    assert fmt_value(True) == "true"
    assert fmt_value(None) == ""
    assert fmt_value(Fraction(1, 3)) == format(1 / 3, ".17g")
    assert fmt_value((1, 2)) == "1 2"
    assert float(fmt_value(2 / 3)) == 2 / 3


def test_report_json_round_trip():
    rep = VerificationReport("x", {"N": 11, "d": 2}, 16.0, 16, True, 1.1e-5,
                             details={"t": (1, 2), "z": 1 + 2j})
    back = json.loads(emit([rep.to_json()], "json", ()))
    assert back == [{"check_id": "x", "inputs": {"N": 11, "d": 2}, "lhs": 16.0, "rhs": 16,
                     "passed": True, "tolerance": 1.1e-5, "elapsed": 0.0,
                     "details": {"t": [1, 2], "z": [1.0, 2.0]}}]


def test_verification_csv_row():
    rep = VerificationReport("x", {"N": 11, "b": 2, "a": 3}, 1, 2, False)
    text = render_csv([rep.to_row()], ("check_id", "N", "params", "lhs", "rhs", "passed", "tolerance"))
    assert text.splitlines()[1] == "x,11,a=3;b=2,1,2,false,0"


def test_timed_check_sets_elapsed():
    @timed_check
    def f():
        return [VerificationReport("a", {}, 0, 0, True), VerificationReport("b", {}, 0, 0, True)]

    assert all(r.elapsed >= 0 for r in f())


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit([], "xml", ())


# ----------------------------------------------------------------- campaigns

def test_patterns_at_11(table):
    res = run_campaign(CampaignConfig("patterns", 11, 11), table)
    assert len(res.rows) == 1 and res.rows[0]["corr"] == -2 and res.status == 0


def test_shusterman_4_to_100(table):
    res = run_campaign(CampaignConfig("shusterman", 4, 100), table)
    assert len(res.rows) == 49
    assert all(r["case_tag"] not in ("none", "anomaly") for r in res.rows)
    assert res.status == 0


def test_campaign_validation(table):
    with pytest.raises(InvalidArgument):
        run_campaign(CampaignConfig("patterns", 20, 10), table)
    with pytest.raises(InvalidArgument):
        run_campaign(CampaignConfig("bogus", 11, 11), table)
    with pytest.raises(TableTooSmall):
        run_campaign(CampaignConfig("dilation", 100_000, 100_003, params={"d": 8}), table)


def test_threads_do_not_change_output(table):
    a = run_campaign(CampaignConfig("dilation", 11, 60, primes_only=True), table)
    b = run_campaign(CampaignConfig("dilation", 11, 60, primes_only=True, threads=4), table)
    assert render_csv(a.records("csv"), a.header) == render_csv(b.records("csv"), b.header)


# ----------------------------------------------------------------------- CLI

def test_cli_nu_moment_header(tmp_path):
    code, text = _run(["nu-moment", "--n-start", "101", "--n-end", "101", "--r", "5"], tmp_path)
    assert code == 0
    assert text.splitlines()[0] == "N,r,moment,ratio"
    assert len(text.splitlines()) == 1 + 4


def test_cli_patterns_json(tmp_path):
    code, text = _run(["patterns", "--n-start", "11", "--n-end", "12", "--format", "json"], tmp_path)
    rows = json.loads(text)
    assert code == 0 and rows[0]["corr"] == -2 and rows[0]["witness_a"] is None
    assert rows[1]["N"] == 12 and rows[1]["case_tag"] is not None


def test_cli_empty_range_is_usage_error(tmp_path, capsys):
    code, _ = _run(["patterns", "--n-start", "20", "--n-end", "10"], tmp_path)
    assert code == 2
    assert "usage error" in capsys.readouterr().err


def test_cli_bad_argument_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["patterns", "--n-start", "x", "--n-end", "3"])
    assert exc.value.code == 2


def test_cli_unwritable_path(tmp_path):
    bad = tmp_path / "missing-dir" / "out.csv"
    assert main(["patterns", "--n-start", "11", "--n-end", "11", "--out", str(bad)]) == 3


def test_cli_full_suite_distinct_checks(tmp_path):
    code, text = _run(["full-suite", "--n-start", "11", "--n-end", "11"], tmp_path)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0
    assert len({r["check_id"] for r in rows}) >= 8
    assert all(r["passed"] == "true" for r in rows)


@pytest.mark.parametrize("argv", [
    ["full-suite", "--n-start", "11", "--n-end", "40", "--primes-only"],
    ["discrepancy", "--n-start", "11", "--n-end", "60", "--primes-only", "--seed", "7"],
    ["pierce", "--n-start", "11", "--n-end", "80"],
])
def test_cli_reruns_are_byte_identical(tmp_path, argv):
    _, first = _run(argv, tmp_path, "a")
    _, second = _run(argv, tmp_path, "b")
    _, threaded = _run([*argv, "--threads", "3"], tmp_path, "c")
    assert first == second == threaded


def test_cli_uses_table_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("LLAB_TABLE_CACHE", str(tmp_path))
    code, _ = _run(["spectral", "--n-start", "11", "--n-end", "30", "--primes-only"], tmp_path)
    assert code == 0
    assert any(p.name.endswith(".llab") for p in tmp_path.iterdir())


def test_console_entry_point(tmp_path):
    env = dict(os.environ, LLAB_PURE="1")
    proc = subprocess.run([sys.executable, "-m", "llab.cli", "patterns", "--n-start", "11",
                           "--n-end", "11"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("11,-2,")
    assert "python kernels" in proc.stderr
