"""Chronological season processing, rankings and the ICC baseline."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import glicko_core as gc
from .copula_scores import CopulaParams, ImpactMoments, score_with_ci, spearman_rho
from .data_model import Dataset, MatchRecord, Outcome, RatingState
from .impacts import update_tallies
from .mov import MovConstants, actual_score, compute_mov, refreshed
from .snapshot import EngineSnapshot

NO_PREDICTION_BAND = 1e-9


class Mode(str, enum.Enum):
    IMPROVISED = "improvised"
    FINAL = "final"


@dataclass(frozen=True)
class EngineParams:
    copula: CopulaParams = CopulaParams()
    scale: gc.Scale = gc.Scale()
    mov: Optional[MovConstants] = None
    moments: ImpactMoments = ImpactMoments()
    #: "copula" for the home/toss model, "basic" for the plain logistic score
    expected: str = "copula"
    ci_level: float = 0.95
    refresh_mov: bool = False
    #: "root" divides the innovation by the post-match RD, "variance" by its square
    step: str = "root"

    def __post_init__(self):
        if self.step not in gc.RATING_STEPS:
            raise ValueError(f"step must be one of {sorted(gc.RATING_STEPS)}, got {self.step!r}")
        if self.expected not in ("copula", "basic"):
            raise ValueError(f"unknown expected-score model {self.expected!r}")


@dataclass(frozen=True)
class SideReport:
    team: str
    h: float
    t: float
    e: float
    ci: tuple[float, float]
    s: float
    before: RatingState
    after: RatingState


@dataclass(frozen=True)
class MatchReport:
    match: MatchRecord
    a: SideReport
    b: SideReport
    mov: Optional[float]

    @property
    def match_id(self) -> str:
        return self.match.match_id

    @property
    def predicted_winner(self) -> Optional[str]:
        if abs(self.a.e - self.b.e) < NO_PREDICTION_BAND:
            return None
        return self.a.team if self.a.e > self.b.e else self.b.team


@dataclass
class SeasonTrajectory:
    reports: list[MatchReport] = field(default_factory=list)
    final: Optional[EngineSnapshot] = None

    @property
    def ranking(self) -> list[str]:
        return self.final.ranking()


def match_inputs(snapshot: EngineSnapshot, match: MatchRecord) -> dict[str, tuple[float, float]]:
    """(home-or-away impact, toss impact) faced by each side of ``match``."""
    imp = snapshot.impacts
    host, opp = match.host, match.opponent_of_host
    h_host = imp.home(host, opp)
    toss_w = match.toss_winner
    toss_l = match.team_b if toss_w == match.team_a else match.team_a
    t = {toss_w: imp.toss_win(toss_w, host), toss_l: imp.toss_lose(toss_l, host)}
    return {host: (h_host, t[host]), opp: (-h_host, t[opp])}


def snapshot_impact_pairs(snapshot: EngineSnapshot) -> list[tuple[float, float]]:
    """Every (h, t) input the snapshot can present: all hosts, opponents and toss results."""
    pairs = []
    for host in snapshot.teams:
        for opp in snapshot.teams:
            if opp == host:
                continue
            for toss in (host, opp):
                m = MatchRecord(date=None, team_a=host, team_b=opp, host=host, toss_winner=toss, outcome=Outcome.DRAW)
                inputs = match_inputs(snapshot, m)
                pairs.extend([inputs[host], inputs[opp]])
    return pairs


def _side_score(match: MatchRecord, team: str, mode: Mode, mov: Optional[float]) -> float:
    if match.winner is None:
        return 0.5
    result = "WIN" if match.winner == team else "LOSS"
    if mode is Mode.IMPROVISED:
        return 1.0 if result == "WIN" else 0.0
    return actual_score(result, mov)


def _expected(params: EngineParams, me: RatingState, opp: RatingState, h: float, t: float):
    if params.expected == "basic":
        e = gc.expected_score_basic(me.rating, opp.rating, opp.rd, params.scale)
        e = min(max(e, 1e-9), 1 - 1e-9)
        return e, (e, e)
    sc = score_with_ci(me.rating, opp.rating, opp.rd, h, t, params.copula, params.scale,
                       params.moments, params.ci_level)
    return sc.e, (sc.ci_low, sc.ci_high)


def _updated(me: RatingState, opp: RatingState, e: float, s: float, step: str = "root") -> RatingState:
    g_opp = gc.g(opp.rd)
    d2 = gc.d_squared(g_opp, e)
    rating = gc.RATING_STEPS[step](me.rating, me.rd, d2, g_opp, s, e)
    rd = max(gc.update_rd(me.rd, d2), gc.RD_FLOOR)
    return RatingState(rating, rd)


def process_match(snapshot: EngineSnapshot, match: MatchRecord, mode: Mode,
                  params: EngineParams = EngineParams()) -> tuple[EngineSnapshot, MatchReport]:
    """Update both sides simultaneously from their pre-match states."""
    mode = Mode(mode)
    for team in (match.team_a, match.team_b):
        if team not in snapshot.ratings:
            raise KeyError(f"{match.match_id}: unknown team {team}")
    mov = None
    if mode is Mode.FINAL and match.winner is not None:
        mov = compute_mov(match, params.mov).mov
    elif mode is Mode.FINAL:
        mov = 0.0

    inputs = match_inputs(snapshot, match)
    sides = []
    for me, opp in ((match.team_a, match.team_b), (match.team_b, match.team_a)):
        before, opp_state = snapshot.ratings[me], snapshot.ratings[opp]
        h, t = inputs[me]
        e, ci = _expected(params, before, opp_state, h, t)
        s = _side_score(match, me, mode, mov)
        sides.append(SideReport(me, h, t, e, ci, s, before, _updated(before, opp_state, e, s, params.step)))

    new = snapshot.with_ratings({sd.team: sd.after for sd in sides})
    new = replace(new, tally=update_tallies(snapshot.tally, match))
    return new, MatchReport(match, sides[0], sides[1], mov)


def run_season(snapshot0: EngineSnapshot, matches, mode: Mode,
               params: EngineParams = EngineParams()) -> SeasonTrajectory:
    """Fold :func:`process_match` over ``matches`` in the order given."""
    if isinstance(matches, Dataset):
        matches = matches.matches
    traj = SeasonTrajectory(final=snapshot0)
    snap = snapshot0
    seen: list[MatchRecord] = []
    for m in matches:
        p = params
        if params.refresh_mov and params.mov is not None and seen:
            p = replace(params, mov=refreshed(params.mov, seen))
        snap, report = process_match(snap, m, mode, p)
        traj.reports.append(report)
        seen.append(m)
    traj.final = snap
    return traj


def compare_rankings(rank_x: Sequence[str], rank_y: Sequence[str]) -> float:
    if sorted(rank_x) != sorted(rank_y) or len(set(rank_x)) != len(rank_x):
        raise ValueError("rankings must order the same set of teams")
    pos_y = {t: i for i, t in enumerate(rank_y)}
    return spearman_rho(list(range(len(rank_x))), [pos_y[t] for t in rank_x])


def prediction_accuracy(trajectory: SeasonTrajectory) -> tuple[int, int]:
    """(correct, decisive) counts; a decisive match without a prediction counts as a miss."""
    correct = total = 0
    for r in trajectory.reports:
        winner = r.match.winner
        if winner is None:
            continue
        total += 1
        correct += r.predicted_winner == winner
    return correct, total


# ---------------------------------------------------------------- ICC baseline


def icc_series_update(r_a: float, r_b: float, series_pts_a: float, series_pts_b: float) -> tuple[int, int]:
    """Series-points conversion, normalized by the series total and rounded half up."""
    if series_pts_a < 0 or series_pts_b < 0:
        raise ValueError("series points must be nonnegative")
    total = series_pts_a + series_pts_b
    if total <= 0:
        raise ValueError("series points total must be positive")
    if abs(r_a - r_b) < 40:
        new_a = series_pts_a * (r_b + 50) + series_pts_b * (r_b - 50)
        new_b = series_pts_b * (r_a + 50) + series_pts_a * (r_a - 50)
    elif r_a > r_b:
        new_a = series_pts_a * (r_a + 10) + series_pts_b * (r_a - 90)
        new_b = series_pts_b * (r_b + 90) + series_pts_a * (r_b - 10)
    else:
        new_b, new_a = icc_series_update(r_b, r_a, series_pts_b, series_pts_a)
        return new_a, new_b
    return math.floor(new_a / total + 0.5), math.floor(new_b / total + 0.5)


WTC_POINTS = {"WIN": 12, "TIE": 6, "DRAW": 4, "LOSS": 0}


def wtc_points(outcome: str) -> int:
    try:
        return WTC_POINTS[outcome.upper()]
    except KeyError:
        raise ValueError(f"unknown outcome {outcome!r}") from None


# ---------------------------------------------------------------- export

TRAJECTORY_COLUMNS = (
    "match_index", "date", "team_a", "team_b", "host", "toss", "e_a", "e_a_lo", "e_a_hi",
    "e_b", "e_b_lo", "e_b_hi", "winner", "predicted", "mov", "s_a", "s_b",
    "rating_a", "rating_b", "rd_a", "rd_b",
)


def trajectory_csv(traj: SeasonTrajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for i, r in enumerate(traj.reports, start=1):
        m = r.match
        w.writerow([
            i, m.date.isoformat(), m.team_a, m.team_b, m.host, m.toss_winner,
            f"{r.a.e:.6f}", f"{r.a.ci[0]:.6f}", f"{r.a.ci[1]:.6f}",
            f"{r.b.e:.6f}", f"{r.b.ci[0]:.6f}", f"{r.b.ci[1]:.6f}",
            m.winner or "Draw", r.predicted_winner or "", "" if r.mov is None else f"{r.mov:.6f}",
            f"{r.a.s:.6f}", f"{r.b.s:.6f}",
            f"{r.a.after.rating:.6f}", f"{r.b.after.rating:.6f}", f"{r.a.after.rd:.6f}", f"{r.b.after.rd:.6f}",
        ])
    return buf.getvalue()


def ranking_csv(snapshot: EngineSnapshot) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "team", "rating", "rd"])
    for i, team in enumerate(snapshot.ranking(), start=1):
        st = snapshot.ratings[team]
        w.writerow([i, team, f"{st.rating:.6f}", f"{st.rd:.6f}"])
    return buf.getvalue()


def trend_rows(snapshot0: EngineSnapshot, improvised: SeasonTrajectory, final: SeasonTrajectory) -> list[dict]:
    """Per-team rating paths under both modes; index 0 holds the initial ratings."""
    if len(improvised.reports) != len(final.reports):
        raise ValueError("trajectories cover different matches")
    rows = [{"team": t, "match_index": 0, "date": "", "rating_improvised": s.rating, "rating_final": s.rating}
            for t, s in sorted(snapshot0.ratings.items())]
    for i, (ri, rf) in enumerate(zip(improvised.reports, final.reports), start=1):
        for si, sf in ((ri.a, rf.a), (ri.b, rf.b)):
            rows.append({"team": si.team, "match_index": i, "date": ri.match.date.isoformat(),
                         "rating_improvised": si.after.rating, "rating_final": sf.after.rating})
    return rows


def trend_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["team", "match_index", "date", "rating_improvised", "rating_final"])
    for r in sorted(rows, key=lambda r: (r["team"], r["match_index"])):
        w.writerow([r["team"], r["match_index"], r["date"], f"{r['rating_improvised']:.6f}", f"{r['rating_final']:.6f}"])
    return buf.getvalue()
