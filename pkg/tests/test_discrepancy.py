from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from llab.arith import friable_enumerate
from llab.bitset import ExceptionalSet
from llab.dilation import DilationContext
from llab.discrepancy import (C_ET, discrepancy_report, erdos_turan_bound, exp_sum_over_set,
                              exp_sums, friable_average_check, friable_exp_sum_profile,
                              interval_discrepancy, star_discrepancy, verify_erdos_turan,
                              verify_initial_gap_discrepancy)
from llab.errors import InvalidArgument, TableTooSmall, UndefinedDiscrepancy

primes = [p for p in range(11, 500) if oracles.is_prime(p)]


def _points(S):
    return [Fraction(int(n), S.N) for n in S.members()]


def test_exp_sum_trivial_sets():
    assert exp_sum_over_set(ExceptionalSet.from_members(11, []), 3) == 0
    full = ExceptionalSet.from_members(11, range(1, 11))
    for k in range(1, 11):
        assert exp_sum_over_set(full, k) == pytest.approx(-1, abs=1e-12)


def test_exp_sum_e2_11(table):
    S = DilationContext(table, 11, 2).exceptional_set(2)
    assert S.members().tolist() == [6, 7, 8, 10]
    ref = sum(oracles.e(n / 11) for n in (6, 7, 8, 10))
    assert exp_sum_over_set(S, 1) == pytest.approx(ref, abs=1e-12)


def test_exp_sums_vector_matches_scalar(table):
    S = DilationContext(table, 101, 7).exceptional_set(7)
    v = exp_sums(S, 250)
    for k in (1, 50, 100, 101, 102, 250):
        assert v[k - 1] == pytest.approx(exp_sum_over_set(S, k), abs=1e-10)


def test_single_point_values():
    S = ExceptionalSet.from_members(10, [5])
    assert star_discrepancy(S, exact=True) == Fraction(1, 2)
    assert interval_discrepancy(S, exact=True) == 1


def test_empty_set_is_undefined():
    S = ExceptionalSet.from_members(11, [])
    for fn in (star_discrepancy, interval_discrepancy):
        with pytest.raises(UndefinedDiscrepancy):
            fn(S)
    with pytest.raises(UndefinedDiscrepancy):
        erdos_turan_bound(S, 10)


def test_full_grid_discrepancy():
    N = 101
    S = ExceptionalSet.from_members(N, range(1, N))
    assert star_discrepancy(S) <= 1 / (N - 1) + 1 / N


def test_e2_11_matches_scan(table):
    S = DilationContext(table, 11, 2).exceptional_set(2)
    assert star_discrepancy(S, exact=True) == oracles.star_disc_brute(_points(S))
    assert interval_discrepancy(S, exact=True) == oracles.interval_disc_brute(_points(S))


@given(st.integers(3, 120), st.data())
def test_discrepancies_match_oracles(N, data):
    members = data.draw(st.sets(st.integers(1, N - 1), min_size=1, max_size=40))
    S = ExceptionalSet.from_members(N, members)
    pts = _points(S)
    assert star_discrepancy(S, exact=True) == oracles.star_disc_brute(pts)
    assert interval_discrepancy(S, exact=True) == oracles.interval_disc_brute(pts)
    assert star_discrepancy(S) <= interval_discrepancy(S) <= 2 * star_discrepancy(S)


def test_et_bound_validation_and_scale():
    S = ExceptionalSet.from_members(11, range(1, 11))
    with pytest.raises(InvalidArgument):
        erdos_turan_bound(S, 0)
    # uniform set: every |sum| is 1, so the bound is C (1/K + H_K / M)
    K = 10
    expected = C_ET * (1 / K + sum(1 / k for k in range(1, K + 1)) / 10)
    assert erdos_turan_bound(S, K) == pytest.approx(expected)


@given(st.sampled_from(primes), st.integers(2, 10), st.sampled_from([1, 10, 100]))
def test_erdos_turan_domination(table, N, b, K):
    assume(gcd(b, N) == 1)
    ctx = DilationContext(table, N, 10)
    S = ctx.exceptional_set(b)
    assume(S.card > 0)
    rep = verify_erdos_turan(S, K)
    assert rep.passed, rep
    assert rep.details["interval_dominated"]


@given(st.sampled_from(primes), st.integers(2, 10))
def test_initial_gap_forces_discrepancy(table, N, b):
    assume(gcd(b, N) == 1)
    S = DilationContext(table, N, 10).exceptional_set(b)
    assume(S.card > 0)
    rep = verify_initial_gap_discrepancy(S, b)
    assert rep.passed
    assert rep.lhs >= 1 / b - 1 / N


def test_report_row(table):
    S = DilationContext(table, 101, 3).exceptional_set(3)
    rep = discrepancy_report(S, 10)
    assert rep.set_id == "E_3(101)"
    assert rep.dominated
    assert list(rep.to_row()) == ["set_id", "N", "b", "card", "star", "et_bound", "K"]


def test_friable_check_example(table):
    ctx = DilationContext(table, 11, 4)
    rep = friable_average_check(ctx, 2, 4, 2, 1)
    assert rep.passed and rep.lhs <= 1
    assert rep.details["psi"] == 3  # {1, 2, 4}


def test_friable_check_identity_term_is_zero(table):
    ctx = DilationContext(table, 101, 1)
    rep = friable_average_check(ctx, 1, 1, 2, 5)
    assert rep.passed and rep.lhs == 0


def test_friable_check_table_too_small(table):
    with pytest.raises(TableTooSmall):
        friable_average_check(DilationContext(table, 11, 3), 2, 4, 2, 1)


@given(st.sampled_from(primes), st.integers(2, 10), st.integers(2, 12),
       st.sampled_from([2, 3, 5]), st.integers(1, 1000))
def test_friable_check_property(table, N, b, T, q, k):
    assume(gcd(b, N) == 1)
    ctx = DilationContext(table, N, 12)
    assert friable_average_check(ctx, b, T, q, k).passed


def test_friable_profile_examples(table):
    fs = friable_enumerate(table, 10, 3)
    assert fs.members == (1, 2, 3, 4, 6, 8, 9)
    ((k, n, mag),) = friable_exp_sum_profile(fs, 11, [(1, 1)])
    ref = abs(sum(oracles.e(a / 11) for a in fs.members)) / 7
    assert (k, n) == (1, 1) and mag == pytest.approx(ref, abs=1e-14)
    rows = friable_exp_sum_profile(fs, 11, [(11, 3), (2, 0), (5, 11)])
    assert [m for *_, m in rows] == pytest.approx([1.0, 1.0, 1.0])
    with pytest.raises(InvalidArgument):
        friable_exp_sum_profile(fs, 2, [(1, 1)])
