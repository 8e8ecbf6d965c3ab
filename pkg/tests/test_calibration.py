import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cricket_glicko.calibration import (
    DEFAULT_CANDIDATES, GridSearchError, LossTable, PredictionRecord, basic_evaluator, brier, ece,
    grid_search_scale, log_loss, mae, simulate_matches,
)

P = PredictionRecord
records_st = st.lists(st.builds(P, st.floats(0, 1), st.sampled_from([0.0, 0.5, 1.0])), min_size=1, max_size=40)


def test_record_validation():
    with pytest.raises(ValueError):
        P(1.2, 1)
    with pytest.raises(ValueError):
        P(0.5, 0.3)


def test_brier_examples():
    assert brier([P(1, 1), P(0, 0)]) == 0
    assert brier([P(0.5, 1)]) == 0.25
    with pytest.raises(ValueError):
        brier([])


def test_log_loss_examples():
    assert log_loss([P(1 - 1e-12, 1)]) == pytest.approx(0, abs=1e-8)
    assert log_loss([P(0.5, 0.5)]) == pytest.approx(math.log(2), abs=1e-12)
    # a draw charges half of each class
    assert log_loss([P(0.8, 0.5)]) == pytest.approx(-0.5 * (math.log(0.8) + math.log(0.2)), abs=1e-12)


def test_mae_examples():
    assert mae([P(0.3, 0), P(1, 1)]) == pytest.approx(0.15)
    assert mae([P(0.25, 1), P(0.75, 0)]) == 0.75


def test_ece_examples():
    assert ece([P(0.5, 1), P(0.5, 0)]) == 0
    assert ece([P(0.9, 0)] * 7) == pytest.approx(0.9)
    # bins [0.1, 0.2) and [0.8, 0.9): gaps 0.15 and 0.15
    assert ece([P(0.15, 0), P(0.15, 0.5), P(0.85, 1), P(0.85, 0.5)]) == pytest.approx(0.1, abs=1e-12)


@given(records_st, st.randoms(use_true_random=False))
def test_losses_permutation_invariant(recs, rnd):
    shuffled = list(recs)
    rnd.shuffle(shuffled)
    for f in (brier, log_loss, mae, ece):
        assert f(shuffled) == pytest.approx(f(recs), abs=1e-12)


@given(records_st)
def test_loss_bounds(recs):
    assert 0 <= brier(recs) <= 1
    assert 0 <= mae(recs) <= 1
    assert log_loss(recs) >= 0
    assert 0 <= ece(recs) <= 1


@given(st.floats(0, 1), st.lists(st.booleans(), min_size=1, max_size=50))
def test_brier_decomposition(p, outcomes):
    q = sum(outcomes) / len(outcomes)
    recs = [P(p, float(o)) for o in outcomes]
    assert brier(recs) == pytest.approx((p - q) ** 2 + q * (1 - q), abs=1e-12)


def test_default_candidates():
    assert DEFAULT_CANDIDATES == (20, 40, 60, 70, 80, 85, 90, 100, 120, 150, 200, 400)


def test_single_candidate_is_best():
    best, table = grid_search_scale([85], lambda d: [P(0.6, 1)])
    assert best == 85 and len(table.rows) == 1


def test_ties_go_to_smaller_scale():
    best, _ = grid_search_scale([90, 40, 60], lambda d: [P(0.6, 1)])
    assert best == 40


def test_grid_search_errors():
    with pytest.raises(ValueError):
        grid_search_scale([], lambda d: [])
    with pytest.raises(ValueError):
        grid_search_scale([85], lambda d: [P(0.5, 1)], "CRPS")

    def flaky(d):
        if d > 50:
            raise RuntimeError("boom")
        return [P(0.5, 1)]
    with pytest.raises(GridSearchError) as info:
        grid_search_scale([20, 40, 60, 80], flaky)
    assert [r["d"] for r in info.value.partial.rows] == [20, 40]


def test_loss_table_csv():
    t = LossTable([{"d": 85, "brier": 0.16, "logloss": 0.59, "mae": 0.36, "ece": 0.15}])
    assert t.to_csv().splitlines() == ["d,brier,logloss,mae,ece", "85,0.160000,0.590000,0.360000,0.150000"]


def test_grid_search_recovers_true_scale():
    hits = 0
    for seed in range(20):
        data = simulate_matches(2000, 85, np.random.default_rng(seed))
        best, _ = grid_search_scale(DEFAULT_CANDIDATES, basic_evaluator(data), "BRIER")
        hits += best in (80, 85, 90)
    assert hits >= 18
