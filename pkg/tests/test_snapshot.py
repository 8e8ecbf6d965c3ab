import copy
import json

import pytest

from cricket_glicko import engine
from cricket_glicko.data_model import RatingState, SchemaError
from cricket_glicko.snapshot import (
    EngineSnapshot, dumps_snapshot, load_initial_snapshot, save_snapshot, snapshot_from_dict, snapshot_to_dict,
)
from conftest import SNAPSHOT


@pytest.fixture
def raw():
    return json.loads(SNAPSHOT.read_text())


def test_table_values(snap0):
    assert snap0.ratings["AUS"] == RatingState(124.0, 15.2)
    assert snap0.impacts.home("ENG", "IND") == 0.6
    assert len(snap0.teams) == 9


def test_fixture_round_trip(snap0):
    assert dumps_snapshot(snap0) == SNAPSHOT.read_text()


def test_evolved_snapshot_round_trip(tmp_path, snap0, wtc, wtc_params):
    final = engine.run_season(snap0, wtc, engine.Mode.FINAL, wtc_params).final
    p = tmp_path / "s.json"
    save_snapshot(final, p)
    back = load_initial_snapshot(p)
    assert back.ratings == final.ratings
    assert dumps_snapshot(back) == p.read_text()
    for m in wtc:
        assert engine.match_inputs(back, m) == engine.match_inputs(final, m)


def test_missing_team_row(raw):
    raw["teams"] = [t for t in raw["teams"] if t["code"] != "WI"]
    with pytest.raises(SchemaError, match="WI"):
        snapshot_from_dict(raw)


def test_impact_out_of_range(raw):
    raw["home_impact"]["ENG"]["IND"] = 1.2
    with pytest.raises(SchemaError, match="outside"):
        snapshot_from_dict(raw)


def test_toss_lose_must_negate(raw):
    raw["teams"][0]["toss_lose_impact"] = 0.3
    with pytest.raises(SchemaError, match="negation"):
        snapshot_from_dict(raw)


def test_away_table_must_mirror_home(raw):
    raw["away_impact"] = {"IND": {"ENG": -0.6}}
    snapshot_from_dict(copy.deepcopy(raw))
    raw["away_impact"] = {"IND": {"ENG": 0.6}}
    with pytest.raises(SchemaError, match="h = -a"):
        snapshot_from_dict(raw)


def test_antisymmetry_on_load(snap0):
    imp = snap0.impacts
    for i in snap0.teams:
        for j in snap0.teams:
            if i != j:
                assert imp.away(j, i) == -imp.home(i, j)


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(SchemaError):
        load_initial_snapshot(p)


def test_ranking_ties_alphabetical():
    s = EngineSnapshot({"B": RatingState(10, 1), "A": RatingState(10, 1), "C": RatingState(11, 1)})
    assert s.ranking() == ["C", "A", "B"]


def test_to_dict_has_documented_fields(snap0):
    d = snapshot_to_dict(snap0)
    assert set(d["teams"][0]) == {"code", "rating", "rd", "toss_win_impact", "toss_lose_impact"}
    assert set(d["home_impact"]) == set(snap0.teams)
