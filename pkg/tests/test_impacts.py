import datetime as dt
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from cricket_glicko.data_model import MarginType, MatchRecord, Outcome
from cricket_glicko.impacts import (
    HeadToHeadTally, HomeCell, ImpactTables, TossPrior, binomial_sign_test, chi_square_1df, home_impact,
    inverse_tan_transform, ks_logistic_test, rational_seed, tan_transform, toss_impact, update_tallies,
)

D = dt.date(2022, 1, 1)


def match(a="A", b="B", host="A", toss="A", outcome=Outcome.DRAW):
    mt = MarginType.NONE if outcome is Outcome.DRAW else MarginType.RUNS
    return MatchRecord(D, a, b, host, toss, outcome, mt, margin_runs=None if mt is MarginType.NONE else 10)


def test_no_history_is_zero():
    t = HeadToHeadTally()
    assert home_impact(t, "A", "B") == 0
    assert toss_impact(t, "A", "A", True) == 0 and toss_impact(t, "A", "A", False) == 0


def test_home_impact_counts():
    t = HeadToHeadTally(home={("ENG", "IND"): HomeCell(played=5, won=4, lost=1),
                              ("AUS", "IND"): HomeCell(played=4, won=1, lost=2)})
    assert home_impact(t, "ENG", "IND") == pytest.approx(0.6)
    assert home_impact(t, "AUS", "IND") == pytest.approx(-0.25)


def test_snapshot_seeds(snap0):
    imp = snap0.impacts
    assert imp.home("ENG", "IND") == 0.6
    assert imp.home("AUS", "IND") == -0.25
    assert imp.toss_win("PAK", "PAK") == 0.5714 and imp.toss_lose("PAK", "PAK") == -0.5714
    assert imp.toss_win("AUS", "IND") == -0.15


def test_draw_counts_played_only():
    t = update_tallies(HeadToHeadTally(), match())
    cell = t.home[("A", "B")]
    assert (cell.played, cell.won, cell.lost) == (1, 0, 0)
    assert t.toss[("A", "A")].won_toss_drawn == 1 and t.toss[("B", "A")].lost_toss_drawn == 1


def test_update_returns_new_value():
    t0 = HeadToHeadTally()
    update_tallies(t0, match())
    assert t0.home == {}


def test_home_win_lowers_away_impact():
    t = HeadToHeadTally()
    for o in (Outcome.A_WINS, Outcome.B_WINS, Outcome.DRAW):
        t = update_tallies(t, match(outcome=o))
    before = ImpactTables(t).away("B", "A")
    after = ImpactTables(update_tallies(t, match(outcome=Outcome.A_WINS))).away("B", "A")
    assert before == 0 and after == pytest.approx(-0.25)


def test_not_idempotent():
    m = match(outcome=Outcome.A_WINS)
    t = update_tallies(update_tallies(HeadToHeadTally(), m), m)
    assert t.home[("A", "B")].played == 2 and t.home[("A", "B")].won == 2


def test_toss_impacts_follow_results():
    t = HeadToHeadTally()
    t = update_tallies(t, match(toss="A", outcome=Outcome.A_WINS))
    t = update_tallies(t, match(toss="A", outcome=Outcome.A_WINS))
    t = update_tallies(t, match(toss="B", outcome=Outcome.A_WINS))
    assert toss_impact(t, "A", "A", True) == 1.0
    assert toss_impact(t, "B", "A", True) == -1.0
    assert toss_impact(t, "B", "A", False) == 1.0


def test_prior_blends_with_new_counts():
    t = HeadToHeadTally(home={("A", "B"): HomeCell(prior_value=1 / 3, prior_weight=3)},
                        toss_prior={"A": TossPrior(0.5, 4)})
    assert home_impact(t, "A", "B") == pytest.approx(1 / 3)
    t = update_tallies(t, match(outcome=Outcome.B_WINS))
    assert home_impact(t, "A", "B") == pytest.approx(0.0)
    assert toss_impact(t, "A", "A", True) == pytest.approx((2 - 1) / 5)


@pytest.mark.parametrize("value,weight", [(0.3333, 3), (0.6, 5), (-0.25, 4), (0.5714, 7), (1.0, 1)])
def test_rational_seed(value, weight):
    assert rational_seed(value) == (value, weight)


outcome_st = st.sampled_from(list(Outcome))


@given(st.lists(st.tuples(st.sampled_from(["A", "B", "C"]), st.sampled_from(["A", "B", "C"]), st.booleans(),
                          outcome_st), max_size=30))
def test_impacts_bounded_and_antisymmetric(plays):
    t = HeadToHeadTally()
    for a, b, toss_a, o in plays:
        if a == b:
            continue
        t = update_tallies(t, match(a, b, a, a if toss_a else b, o))
    imp = ImpactTables(t)
    for i in "ABC":
        for j in "ABC":
            if i == j:
                continue
            h = imp.home(i, j)
            assert -1 <= h <= 1
            assert imp.away(j, i) == -h
            cell = t.home.get((i, j))
            if cell and cell.won + cell.lost == cell.played > 0:
                assert (h == 1) == (cell.lost == 0)
                assert (h == -1) == (cell.won == 0)
            assert imp.toss_lose(i, j) == -imp.toss_win(i, j)


def test_binomial_examples():
    assert binomial_sign_test(4, 4) == 1.0
    assert binomial_sign_test(13, 0) == pytest.approx(2 * 0.5 ** 13, rel=1e-9)
    assert binomial_sign_test(9, 1) == pytest.approx(2 * (1 + 10) / 2 ** 10, rel=1e-9)
    with pytest.raises(ValueError):
        binomial_sign_test(0, 0)


@given(st.integers(0, 60), st.integers(0, 60))
def test_binomial_symmetric(w, l):
    if w + l:
        assert binomial_sign_test(w, l) == pytest.approx(binomial_sign_test(l, w), abs=1e-15)


def test_chi_square_examples():
    assert chi_square_1df([10, 10]) == (0.0, 1.0)
    stat, p = chi_square_1df([82, 41])
    assert stat == pytest.approx(2 * 20.5 ** 2 / 61.5, abs=1e-9) and p == pytest.approx(2.2e-4, rel=0.05)
    stat, p = chi_square_1df([75, 50])
    assert stat == pytest.approx(5.0, abs=1e-12) and p == pytest.approx(0.0253, abs=1e-4)
    with pytest.raises(ValueError):
        chi_square_1df([[0, 0], [3, 4]])


def test_chi_square_table_matches_scipy():
    table = [[30, 12], [18, 25]]
    stat, p = chi_square_1df(table)
    ref = stats.chi2_contingency(table, correction=False)
    assert stat == pytest.approx(ref.statistic) and p == pytest.approx(ref.pvalue)


@given(st.integers(1, 200), st.integers(1, 200))
def test_chi_square_swap_invariant(a, b):
    assert chi_square_1df([a, b])[0] == pytest.approx(chi_square_1df([b, a])[0], abs=1e-12)


def test_ks_at_logistic_quantiles():
    n = 1000
    x = stats.logistic.ppf(np.arange(1, n + 1) / (n + 1), loc=0.2, scale=0.3)
    stat, p = ks_logistic_test(x)
    assert stat < 0.01 and p > 0.99


def test_ks_rejects_degenerate():
    with pytest.raises(ValueError):
        ks_logistic_test([0.2] * 10)
    with pytest.raises(ValueError):
        ks_logistic_test([0.1, 0.2])


def test_tan_transform_examples():
    assert tan_transform(0) == 0
    assert tan_transform(0.5) == pytest.approx(1, abs=1e-15)
    assert tan_transform(-0.5) == pytest.approx(-1, abs=1e-15)
    for bad in (1, -1, 1.5):
        with pytest.raises(ValueError):
            tan_transform(bad)


def test_tan_inverse_round_trip():
    grid = np.linspace(-0.999, 0.999, 1000)
    back = np.array([inverse_tan_transform(tan_transform(x)) for x in grid])
    assert np.max(np.abs(back - grid)) < 1e-12


@given(st.floats(-0.99, 0.99), st.floats(1e-4, 0.5))
def test_tan_increasing_and_odd(x, dx):
    if x + dx < 1:
        assert tan_transform(x + dx) > tan_transform(x)
    assert tan_transform(-x) == -tan_transform(x)
