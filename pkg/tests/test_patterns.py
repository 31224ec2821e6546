import pytest
from hypothesis import given, strategies as st

import oracles
from llab.errors import InvalidArgument, TheoremViolation
from llab.patterns import (exceptional_set_base, pattern_report, shusterman_sweep,
                           shusterman_witness, square_pattern_witness, verify_correlation_bound,
                           verify_pattern_identity, verify_witness)


def test_correlation_n3(table):
    assert pattern_report(table, 3).corr == -2


def test_pattern_report_n11(table):
    rep = pattern_report(table, 11)
    assert rep.corr == -2
    assert rep.counts == {(1, 1): 2, (-1, -1): 2, (1, -1): 3, (-1, 1): 3}
    assert rep.eta_min == 1 and rep.e_size == 4


def test_base_set_n11(table):
    eta, E = exceptional_set_base(table, 11)
    assert eta == 1 and E.members().tolist() == [1, 3, 8, 10] and E.card == 4
    assert 10 + eta * pattern_report(table, 11).corr == 2 * E.card


@given(st.integers(3, 3000))
def test_pattern_invariants(table, N):
    rep = pattern_report(table, N)
    c = rep.counts
    assert sum(c.values()) == N - 1
    assert c[(1, -1)] == c[(-1, 1)]
    assert rep.identity_holds()
    assert rep.e_size == min(rep.agreement(1), rep.agreement(-1))


@given(st.integers(3, 150))
def test_base_set_matches_oracle(table, N):
    eta, E = exceptional_set_base(table, N)
    o_eta, o_set = oracles.base_set(N)
    assert eta == o_eta and set(E.members().tolist()) == o_set


def test_correlation_strictly_inside_for_n_at_least_11(table):
    for N in range(11, 20_001):
        rep = pattern_report(table, N)
        assert abs(rep.corr) < N - 1 and rep.e_size >= 1


def test_pattern_report_range_checks(table):
    with pytest.raises(InvalidArgument):
        pattern_report(table, 2)
    assert verify_pattern_identity(table, 101).passed
    assert verify_correlation_bound(table, 101).passed


@pytest.mark.parametrize("N, pair", [(4, (2, 2)), (8, (3, 5)), (6, (3, 3))])
def test_witness_examples(table, N, pair):
    w = shusterman_witness(table, N)
    assert (w.a, w.b) == pair and verify_witness(table, w)


def test_witness_case_labels(table):
    assert shusterman_witness(table, 8).case == "ii"
    assert shusterman_witness(table, 6).case == "iii"


def test_witness_odd_square_case(table):
    # N = 2 * 11^2 * 1: 8 does not divide, lambda(242) = -1, M = 11
    N = 242
    assert table.lam[N] == -1
    w = shusterman_witness(table, N)
    assert w.case == "iv" and verify_witness(table, w)
    d = square_pattern_witness(table, 11)
    assert (w.a, w.b) == (2 * (121 - d * d), 2 * d * d)


def test_square_witness_m11(table):
    assert square_pattern_witness(table, 11) == 9


@given(st.integers(5, 250).map(lambda k: 2 * k + 1))
def test_square_witness_properties(table, M):
    d = square_pattern_witness(table, M)
    assert d % 2 == 1 and 1 <= d < M
    assert table.lam[d * d] == 1
    assert table.lam[M - d] * table.lam[M + d] == 1
    assert table.lam[M * M - d * d] == 1


def test_square_witness_validation(table):
    with pytest.raises(InvalidArgument):
        square_pattern_witness(table, 9)
    with pytest.raises(InvalidArgument):
        square_pattern_witness(table, 12)


def test_square_witness_failure_is_loud(monkeypatch, table):
    from llab import _pykernels
    monkeypatch.setattr(_pykernels, "_square_witness", lambda lam, M: 0)
    with pytest.raises(TheoremViolation):
        square_pattern_witness(table, 11)


def test_witness_rejects_odd(table):
    with pytest.raises(InvalidArgument):
        shusterman_witness(table, 9)


def test_sweep_small_range_matches_brute_force(table):
    res = shusterman_sweep(table, 4, 100)
    assert res.Ns.size == 49 and not res.missing()
    for w in res.witnesses():
        assert verify_witness(table, w)
        exists = any(oracles.liouville(a) == -1 and oracles.liouville(w.N - a) == -1
                     for a in range(1, w.N))
        assert exists


def test_sweep_agrees_with_single_calls(table):
    res = shusterman_sweep(table, 4, 3000)
    for w in res.witnesses():
        assert w == shusterman_witness(table, w.N)
    assert sum(res.case_counts().values()) == res.Ns.size
