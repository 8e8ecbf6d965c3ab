"""Engine state (ratings plus impact tallies) and its JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .data_model import RatingState, SchemaError
from .impacts import HeadToHeadTally, HomeCell, ImpactTables, TossCell, TossPrior, rational_seed

_TOSS_FIELDS = ("won_toss_won", "won_toss_lost", "won_toss_drawn", "lost_toss_won", "lost_toss_lost", "lost_toss_drawn")


@dataclass(frozen=True)
class EngineSnapshot:
    ratings: dict[str, RatingState]
    tally: HeadToHeadTally = field(default_factory=HeadToHeadTally)

    @property
    def teams(self) -> list[str]:
        return sorted(self.ratings)

    @property
    def impacts(self) -> ImpactTables:
        return ImpactTables(self.tally)

    def with_ratings(self, updates: dict[str, RatingState]) -> "EngineSnapshot":
        return replace(self, ratings={**self.ratings, **updates})

    def ranking(self) -> list[str]:
        return sorted(self.ratings, key=lambda t: (-self.ratings[t].rating, t))


def _check_impact(value, where: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{where}: impact is not a number: {value!r}") from None
    if not -1.0 <= v <= 1.0:
        raise SchemaError(f"{where}: impact {v} outside [-1, 1]")
    return v


def snapshot_from_dict(data: dict) -> EngineSnapshot:
    teams = data.get("teams")
    if not isinstance(teams, list) or not teams:
        raise SchemaError("snapshot: 'teams' must be a nonempty array")
    ratings: dict[str, RatingState] = {}
    tally = HeadToHeadTally()
    for row in teams:
        code = row.get("code")
        if not code:
            raise SchemaError("snapshot: team row without 'code'")
        if code in ratings:
            raise SchemaError(f"snapshot: duplicate team {code}")
        try:
            ratings[code] = RatingState(float(row["rating"]), float(row["rd"]))
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"snapshot: team {code}: {exc}") from None
        tw = _check_impact(row.get("toss_win_impact", 0.0), f"team {code} toss_win_impact")
        tl = _check_impact(row.get("toss_lose_impact", -tw), f"team {code} toss_lose_impact")
        if tl != -tw:
            raise SchemaError(f"team {code}: toss_lose_impact {tl} is not the negation of toss_win_impact {tw}")
        tally.toss_prior[code] = TossPrior(*rational_seed(tw))

    home = data.get("home_impact", {})
    for host, row in home.items():
        if host not in ratings:
            raise SchemaError(f"home_impact: host {host} has no team row")
        for opp, value in row.items():
            if opp not in ratings:
                raise SchemaError(f"home_impact[{host}]: opponent {opp} has no team row")
            if opp == host:
                continue
            v = _check_impact(value, f"home_impact[{host}][{opp}]")
            val, w = rational_seed(v)
            if w:
                tally.home[(host, opp)] = HomeCell(prior_value=val, prior_weight=w)
    missing = sorted(set(ratings) - set(home)) if home else []
    if missing:
        raise SchemaError(f"home_impact: missing row(s) for {', '.join(missing)}")

    away = data.get("away_impact")
    if away:
        for team, row in away.items():
            for host, value in row.items():
                a = _check_impact(value, f"away_impact[{team}][{host}]")
                h = float(home.get(host, {}).get(team, 0.0))
                if abs(h + a) > 1e-12:
                    raise SchemaError(f"away_impact[{team}][{host}] = {a} but home_impact[{host}][{team}] = {h}; expected h = -a")

    saved = data.get("tallies")
    if saved:
        for item in saved.get("home", []):
            key = (item["host"], item["opponent"])
            cell = tally.home.get(key, HomeCell(prior_value=float(home.get(key[0], {}).get(key[1], 0.0))))
            cell.prior_weight = float(item["prior_weight"])
            cell.played, cell.won, cell.lost = int(item["played"]), int(item["won"]), int(item["lost"])
            if cell.won + cell.lost > cell.played or min(cell.played, cell.won, cell.lost) < 0:
                raise SchemaError(f"tallies.home {key}: inconsistent counts")
            tally.home[key] = cell
        for team, w in saved.get("toss_prior_weight", {}).items():
            if team not in tally.toss_prior:
                raise SchemaError(f"tallies.toss_prior_weight: unknown team {team}")
            tally.toss_prior[team].weight = float(w)
        for item in saved.get("toss", []):
            tally.toss[(item["team"], item["host"])] = TossCell(*(int(item[f]) for f in _TOSS_FIELDS))
    return EngineSnapshot(ratings=ratings, tally=tally)


def snapshot_to_dict(snap: EngineSnapshot) -> dict:
    teams = []
    for code in snap.teams:
        st = snap.ratings[code]
        prior = snap.tally.toss_prior.get(code, TossPrior())
        teams.append({
            "code": code,
            "rating": st.rating,
            "rd": st.rd,
            "toss_win_impact": prior.value,
            "toss_lose_impact": -prior.value if prior.value else 0.0,
        })
    home = {}
    for host in snap.teams:
        home[host] = {}
        for opp in snap.teams:
            if opp == host:
                continue
            cell = snap.tally.home.get((host, opp))
            home[host][opp] = cell.prior_value if cell else 0.0
    tallies = {
        "home": [
            {"host": h, "opponent": o, "prior_weight": c.prior_weight, "played": c.played, "won": c.won, "lost": c.lost}
            for (h, o), c in sorted(snap.tally.home.items())
        ],
        "toss_prior_weight": {t: p.weight for t, p in sorted(snap.tally.toss_prior.items())},
        "toss": [
            {"team": t, "host": h, **{f: getattr(c, f) for f in _TOSS_FIELDS}}
            for (t, h), c in sorted(snap.tally.toss.items())
        ],
    }
    return {"teams": teams, "home_impact": home, "tallies": tallies}


def dumps_snapshot(snap: EngineSnapshot) -> str:
    return json.dumps(snapshot_to_dict(snap), indent=2) + "\n"


def save_snapshot(snap: EngineSnapshot, path) -> None:
    Path(path).write_text(dumps_snapshot(snap), encoding="utf-8")


def load_initial_snapshot(path) -> EngineSnapshot:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read snapshot {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"snapshot {path}: invalid JSON: {exc}") from None
    return snapshot_from_dict(data)
