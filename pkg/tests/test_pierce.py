from fractions import Fraction
from math import log

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from llab import _pykernels
from llab.dilation import DilationContext
from llab.errors import InvalidArgument, TableTooSmall, UnsupportedMode
from llab.pierce import (NU_CALIBRATION_N, NU_CALIBRATION_RMAX, NU_RATIO_BOUND, SUBSET_MAX_R,
                         calibrate_nu_constant, digit_range, nu_compute, nu_moment_sweep,
                         p_signature, reconstruct, theta, verify_nu_bounds,
                         verify_product_formula, verify_roundtrip)

primes = [p for p in range(17, 700) if oracles.is_prime(p)]
small_p = [2, 3, 5, 7, 11, 13]


def test_theta_examples():
    assert theta(4, 11) == 3
    assert all(theta(1, N) == 0 for N in (11, 13, 101))
    assert all(theta(n, 101) == 101 - n for n in range(51, 101))
    with pytest.raises(InvalidArgument):
        theta(0, 11)


def test_signature_example():
    sig = p_signature(7, 11, 5)
    assert sig.digits == (1, 2, 3)
    assert sig.trajectory == (7, 4, 3, 2)
    assert sig.k == 3 and sig.residual == 2


def test_signature_empty_below_N_over_p():
    for n in range(1, 101 // 7 + 1):
        sig = p_signature(n, 101, 7)
        assert sig.k == 0 and sig.residual == n


def test_signature_validation():
    with pytest.raises(InvalidArgument):
        p_signature(3, 12, 5)
    with pytest.raises(InvalidArgument):
        p_signature(3, 11, 13)
    with pytest.raises(InvalidArgument):
        p_signature(0, 11, 5)


@given(st.sampled_from(primes), st.sampled_from(small_p), st.data())
def test_signature_matches_oracle(N, p, data):
    n = data.draw(st.integers(1, N - 1))
    sig = p_signature(n, N, p)
    digits, traj = oracles.signature(n, N, p)
    assert sig.digits == tuple(digits) and sig.trajectory == tuple(traj)
    assert all(a < b for a, b in zip(sig.digits, sig.digits[1:]))
    assert all(r < p for r in sig.digits)


def test_reconstruct_examples():
    assert reconstruct((1, 2, 3), 2, 11).value == 7
    assert reconstruct((), 5, 11).value == 5
    # k = 1: n = (N - t) / r1
    for n in range(4, 6):
        t = theta(n, 11)
        rec = reconstruct((11 // n,), t, 11)
        assert rec.value == Fraction(11 - t, 11 // n) == n and rec.in_range
    assert not reconstruct((2,), 0, 11).in_range
    with pytest.raises(InvalidArgument):
        reconstruct((2, 2), 1, 11)


@given(st.sampled_from(primes), st.sampled_from(small_p), st.data())
def test_reconstruct_roundtrip_property(N, p, data):
    n = data.draw(st.integers(1, N - 1))
    sig = p_signature(n, N, p)
    rec = reconstruct(sig.digits, sig.residual, N)
    assert rec.value == n == oracles.pierce_value(sig.digits, sig.residual, N)
    assert rec.in_range


@pytest.mark.parametrize("N, p", [(11, 5), (101, 7), (1009, 31), (9973, 13)])
def test_verify_roundtrip(N, p):
    rep = verify_roundtrip(N, p)
    assert rep.passed and rep.lhs == 0 and rep.details["checked"] == N - 1


def test_roundtrip_wide_path(monkeypatch):
    # force every row with a digit product above 2 through the big-integer route
    monkeypatch.setattr(_pykernels, "_INT64_SAFE", 4 * 1009)
    checked, bad, wide = _pykernels.pierce_roundtrip(1009, 31)
    assert (checked, bad) == (1008, 0)
    assert wide > 0


def test_product_formula_examples(table):
    rep = verify_product_formula(DilationContext(table, 11, 5), 5)
    assert rep.rhs == 2 * 5 * len(oracles.base_set(11)[1]) == 40
    assert rep.passed
    rep = verify_product_formula(DilationContext(table, 101, 7), 7)
    assert rep.rhs == 14 * len(oracles.base_set(101)[1])
    assert rep.passed and rep.details["unexplained"] == 0


def test_product_formula_failure_count_matches_oracle(table):
    N, p = 101, 7
    lam = oracles.liouville
    fails = []
    for n in range(1, N):
        digits, traj = oracles.signature(n, N, p)
        prod = 1
        for r, x in zip(digits, traj):
            y = (p * x) % N
            prod *= lam(r * y) * lam((r * y) % N)
        if prod != lam(p * n) * lam((p * n) % N):
            fails.append(n)
    rep = verify_product_formula(DilationContext(table, N, p), p, sample=len(fails) + 1)
    assert rep.lhs == len(fails)
    assert list(rep.details["failing_sample"]) == fails


def test_product_formula_table_too_small(table):
    with pytest.raises(TableTooSmall):
        verify_product_formula(DilationContext(table, 101, 5), 7)


@given(st.sampled_from(primes), st.sampled_from([5, 7, 11, 13]))
def test_product_formula_property(table, N, p):
    if p >= N:
        return
    rep = verify_product_formula(DilationContext(table, N, p), p)
    assert rep.passed and rep.details["unexplained"] == 0


def test_nu_examples():
    st2 = nu_compute(11, 2)
    assert st2.as_dict()[4] == 2
    assert nu_compute(11, 2, "subset-oracle").as_dict() == st2.as_dict()
    assert st2.moment == st2.as_dict()[4] + st2.as_dict()[5]
    one = nu_compute(101, 1)
    assert one.ms.tolist() == list(range(51, 101)) and set(one.values.tolist()) == {1}


def test_digit_range():
    assert digit_range(11, 2).tolist() == [4, 5]
    assert digit_range(11, 1).tolist() == [6, 7, 8, 9, 10]


def test_nu_errors():
    with pytest.raises(UnsupportedMode):
        nu_compute(101, SUBSET_MAX_R + 1, "subset-oracle")
    with pytest.raises(UnsupportedMode):
        nu_compute(101, 3, "guess")
    with pytest.raises(InvalidArgument):
        nu_compute(100, 3)


@given(st.sampled_from([p for p in primes if p < 300]), st.integers(1, 10))
def test_nu_modes_agree_with_brute_force(N, r):
    scan = nu_compute(N, r)
    sub = nu_compute(N, r, "subset-oracle")
    assert np.array_equal(scan.values, sub.values)
    assert scan.values.tolist() == [oracles.nu_brute(N, int(m)) for m in scan.ms]
    assert scan.max_value <= 2 ** (r - 1)


def test_verify_nu_bounds():
    rep = verify_nu_bounds(1009, 12)
    assert rep.passed and rep.details["modes_agree"]


def test_nu_subset_big_integer_path(monkeypatch):
    import llab.pierce as pierce
    ref = nu_compute(409, 9).values
    monkeypatch.setattr(pierce, "_INT64_SAFE", 1)
    assert np.array_equal(nu_compute(409, 9, "subset-oracle").values, ref)


def test_moment_sweep_rows():
    rows = nu_moment_sweep(101, 10)
    assert [r.r for r in rows] == list(range(2, 11))
    for row in rows:
        assert row.moment == nu_compute(101, row.r).moment
        assert row.ratio == pytest.approx(row.moment * row.r / (101 * log(row.r)))
    assert list(rows[0].to_row()) == ["N", "r", "moment", "ratio"]
    with pytest.raises(InvalidArgument):
        nu_moment_sweep(101, 1)


def test_calibration_reproduces_frozen_constant():
    assert calibrate_nu_constant(NU_CALIBRATION_N, NU_CALIBRATION_RMAX) == NU_RATIO_BOUND
    assert not any(r.exceeds for r in nu_moment_sweep(NU_CALIBRATION_N, NU_CALIBRATION_RMAX))
