import math

import pytest
from hypothesis import given, strategies as st

from cricket_glicko import glicko_core as gc
from cricket_glicko.glicko_core import Scale

rd_st = st.floats(0.01, 500, allow_nan=False)
d2_st = st.floats(1e-3, 1e8, allow_nan=False)


def test_g_at_zero_is_one():
    assert gc.g(0.0) == 1.0


@pytest.mark.parametrize("rd,expected", [(11.2, 0.15986), (27.3, 0.06629)])
def test_g_table_rds(rd, expected):
    assert gc.g(rd) == pytest.approx(expected, abs=1e-4)


def test_g_rejects_negative_rd():
    with pytest.raises(ValueError):
        gc.g(-1.0)


@given(st.floats(0, 1e4), st.floats(1e-6, 1e3))
def test_g_strictly_decreasing_in_unit_interval(rd, step):
    assert 0 < gc.g(rd + step) < gc.g(rd) <= 1


def test_scale_must_be_positive():
    with pytest.raises(ValueError):
        Scale(0)
    assert Scale().d == 85


def test_basic_expected_score_examples():
    assert gc.expected_score_basic(100, 100, 30) == 0.5
    assert gc.expected_score_basic(185, 100, 0, Scale(85)) == pytest.approx(10 / 11, abs=1e-12)
    assert gc.expected_score_basic(100, 185, 0, Scale(85)) == pytest.approx(1 / 11, abs=1e-12)


@given(st.floats(-300, 300), st.floats(0.1, 50), rd_st)
def test_basic_expected_score_increasing_in_gap(gap, step, rd):
    assert gc.expected_score_basic(gap + step, 0, rd) >= gc.expected_score_basic(gap, 0, rd)


@given(st.floats(-300, 300), st.floats(-100, 100), rd_st)
def test_basic_expected_score_complement_with_equal_rds(ra, rb, rd):
    total = gc.expected_score_basic(ra, rb, rd) + gc.expected_score_basic(rb, ra, rd)
    assert total == pytest.approx(1.0, abs=1e-12)


@given(st.floats(1, 300), st.floats(1, 1000), st.floats(1, 1000))
def test_larger_scale_pulls_towards_half(gap, d_small, extra):
    lo = gc.expected_score_basic(gap, 0, 0, Scale(d_small))
    hi = gc.expected_score_basic(gap, 0, 0, Scale(d_small + extra))
    assert 0.5 <= hi <= lo


def test_d_squared_examples():
    assert gc.d_squared(1, 0.5) == 4
    assert gc.d_squared(0.5, 0.5) == 16
    assert gc.d_squared(0.15986, 0.21) == pytest.approx(235.9, abs=0.5)


@pytest.mark.parametrize("e", [0.0, 1.0])
def test_d_squared_rejects_certain_outcomes(e):
    with pytest.raises(ValueError):
        gc.d_squared(0.5, e)


@given(st.floats(0.01, 1), st.floats(0.001, 0.999))
def test_d_squared_smallest_at_even_odds(g_opp, e):
    assert gc.d_squared(g_opp, e) >= gc.d_squared(g_opp, 0.5) * (1 - 1e-12)


def test_update_rd_examples():
    assert 0.9999 < gc.update_rd(1, 1e12) < 1
    assert gc.update_rd(2, 4) == pytest.approx(math.sqrt(2), abs=1e-12)


@pytest.mark.parametrize("rd,d2", [(0, 1), (1, 0), (-1, 2)])
def test_update_rd_domain(rd, d2):
    with pytest.raises(ValueError):
        gc.update_rd(rd, d2)


@given(rd_st, d2_st)
def test_update_rd_strictly_shrinks(rd, d2):
    assert gc.update_rd(rd, d2) < rd


def test_update_rating_examples():
    assert gc.update_rating(100, 2, 4, 1, 1, 0.5) == pytest.approx(101, abs=1e-12)
    assert gc.update_rating(100, 2, 4, 1, 0, 0.5) == pytest.approx(99, abs=1e-12)
    assert gc.update_rating(100, 2, 4, 0.7, 0.3, 0.3) == 100


def test_root_step_closed_form():
    # 1/(1/4 + 1/4) = 2 for the variance step, sqrt of it for the root step
    assert gc.update_rating_root(100, 2, 4, 1, 1, 0.5) == pytest.approx(100 + 0.5 * math.sqrt(2), abs=1e-12)
    assert gc.update_rating_root(100, 2, 4, 1, 0.4, 0.4) == 100


@pytest.mark.parametrize("rule", sorted(gc.RATING_STEPS))
@given(r=st.floats(-500, 500), rd=rd_st, d2=d2_st, g_opp=st.floats(0.01, 1), e=st.floats(0.01, 0.99),
       s=st.floats(0, 1.5))
def test_innovation_antisymmetry(rule, r, rd, d2, g_opp, e, s):
    step = gc.RATING_STEPS[rule]
    up = step(r, rd, d2, g_opp, s, e) - r
    down = step(r, rd, d2, g_opp, 2 * e - s, e) - r
    assert up == pytest.approx(-down, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("rule", sorted(gc.RATING_STEPS))
@given(rd=rd_st, d2=d2_st, e=st.floats(0.01, 0.99), s=st.floats(0, 1), ds=st.floats(1e-3, 1))
def test_rating_increasing_in_score(rule, rd, d2, e, s, ds):
    step = gc.RATING_STEPS[rule]
    assert step(0, rd, d2, 0.5, s + ds, e) > step(0, rd, d2, 0.5, s, e)
