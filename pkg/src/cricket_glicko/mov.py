"""Margin of victory and expected fourth-innings scores.

The MOV of a decisive match normalizes the run (or wicket) margin by the range
observed in the rating window and adds an innings-win bonus. The bonus needs
the winner's expected fourth-innings score, which is imputed for truncated
innings as a negative-binomial mean residual life capped at 952 runs.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import optimize, stats

from .data_model import INNINGS_RUN_CAP, ClosedBy, Dataset, InningsRecord, MarginType, MatchRecord, Outcome

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NegBinParams:
    size: float
    prob: float
    innings_index: int = 4

    def __post_init__(self):
        if not self.size > 0:
            raise ValueError(f"size must be positive, got {self.size}")
        if not 0 < self.prob < 1:
            raise ValueError(f"prob must lie in (0, 1), got {self.prob}")
        if not 1 <= self.innings_index <= 4:
            raise ValueError("innings_index must be in 1..4")
        if self.mean > INNINGS_RUN_CAP:
            raise ValueError(f"mean {self.mean:.1f} exceeds the {INNINGS_RUN_CAP}-run cap")

    @property
    def mean(self) -> float:
        return self.size * (1.0 - self.prob) / self.prob


@dataclass(frozen=True)
class NegBinFit:
    params: NegBinParams
    n: int
    neg_loglik: float

    @property
    def neg_loglik_per_obs(self) -> float:
        return self.neg_loglik / self.n

    @property
    def aic(self) -> float:
        return 4.0 + 2.0 * self.neg_loglik

    @property
    def bic(self) -> float:
        return 2.0 * math.log(self.n) + 2.0 * self.neg_loglik


@dataclass(frozen=True)
class MovConstants:
    r_min: int
    r_range: int
    w_min: int
    w_range: int
    e4r: float
    nb: dict[int, NegBinParams] = field(default_factory=dict)

    def __post_init__(self):
        if self.r_min < 0 or self.r_range <= 0:
            raise ValueError("need r_min >= 0 and r_range > 0")
        if self.w_min < 1 or self.w_range <= 0:
            raise ValueError("need w_min >= 1 and w_range > 0")
        if not self.e4r > 0:
            raise ValueError("e4r must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["nb"] = {str(k): {"size": p.size, "prob": p.prob} for k, p in sorted(self.nb.items())}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MovConstants":
        nb = {int(k): NegBinParams(float(v["size"]), float(v["prob"]), int(k)) for k, v in d.get("nb", {}).items()}
        return cls(int(d["r_min"]), int(d["r_range"]), int(d["w_min"]), int(d["w_range"]), float(d["e4r"]), nb)


def dumps_mov_constants(k: MovConstants) -> str:
    return json.dumps(k.to_dict(), indent=2) + "\n"


def save_mov_constants(k: MovConstants, path) -> None:
    Path(path).write_text(dumps_mov_constants(k), encoding="utf-8")


def load_mov_constants(path) -> MovConstants:
    return MovConstants.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class MovResult:
    mov: float
    run_term: float = 0.0
    wicket_term: float = 0.0
    innings_term: float = 0.0


# ---------------------------------------------------------------- negative binomial


def _nb_neg_loglik(x: np.ndarray, size: float, prob: float) -> float:
    return -float(np.sum(stats.nbinom.logpmf(x, size, prob)))


def fit_negative_binomial(scores: Sequence[int], innings_index: int = 4, min_obs: int = 20) -> NegBinFit:
    """Maximum-likelihood fit; the size is profiled, the prob has a closed form given size."""
    x = np.asarray(scores, dtype=float)
    if x.size < min_obs:
        raise ValueError(f"need at least {min_obs} all-out innings, got {x.size}")
    if np.any(x < 0) or np.any(x != np.round(x)):
        raise ValueError("scores must be nonnegative integers")
    mean = float(x.mean())
    if x.var() == 0 or mean == 0:
        raise ValueError("degenerate data: zero variance")

    def profile(log_size):
        size = math.exp(log_size)
        return _nb_neg_loglik(x, size, size / (size + mean))

    res = optimize.minimize_scalar(profile, bounds=(math.log(1e-3), math.log(1e5)), method="bounded",
                                   options={"xatol": 1e-10})
    size = math.exp(res.x)
    params = NegBinParams(size, size / (size + mean), innings_index)
    return NegBinFit(params, int(x.size), float(res.fun))


def mrl(params: NegBinParams, x: int, cap: int = INNINGS_RUN_CAP) -> float:
    """E[X | X >= x] under the negative binomial, summed up to ``cap`` runs."""
    if x < 0 or x >= cap:
        raise ValueError(f"conditioning point must lie in [0, {cap}), got {x}")
    t = np.arange(int(x), cap + 1, dtype=float)
    logf = stats.nbinom.logpmf(t, params.size, params.prob)
    top = np.max(logf)
    if not np.isfinite(top):
        raise ValueError(f"no tail mass above {x} runs")
    w = np.exp(logf - top)
    return float(np.dot(t, w) / np.sum(w))


def capped_mean(params: NegBinParams, cap: int = INNINGS_RUN_CAP) -> float:
    return mrl(params, 0, cap)


def compute_e4r(fourth_innings: Sequence[InningsRecord], params: Optional[NegBinParams] = None,
                cap: int = INNINGS_RUN_CAP, min_records: int = 20) -> float:
    """Average fourth-innings score with truncated innings imputed through the MRL.

    Without explicit ``params`` the negative binomial is fitted to the
    all-out innings in the sample.
    """
    if len(fourth_innings) < min_records:
        raise ValueError(f"need at least {min_records} fourth innings, got {len(fourth_innings)}")
    complete = [r.runs for r in fourth_innings if r.closed_by is ClosedBy.ALL_OUT]
    if len(complete) == len(fourth_innings):
        return float(np.mean(complete))
    if params is None:
        params = fit_negative_binomial(complete, 4).params
    values = []
    for r in fourth_innings:
        if r.closed_by is ClosedBy.ALL_OUT:
            values.append(float(r.runs))
        elif r.closed_by is ClosedBy.NOT_BATTED:
            values.append(mrl(params, 0, cap))
        else:
            values.append(mrl(params, r.runs, cap))
    return float(np.mean(values))


# ---------------------------------------------------------------- MOV


def _clamped(value: float, what: str, match: MatchRecord) -> float:
    if value < 0.0 or value > 1.0:
        log.warning("%s: normalized %s %.4f outside [0, 1]; clamped", match.match_id, what, value)
        return min(max(value, 0.0), 1.0)
    return value


def winner_e4r(match: MatchRecord, k: MovConstants) -> float:
    if match.winner_fourth_innings_expected is not None:
        return match.winner_fourth_innings_expected
    if 4 not in k.nb:
        raise ValueError(f"{match.match_id}: innings win needs e4r_winner or fourth-innings NB parameters")
    # an innings winner never bats a fourth innings
    return mrl(k.nb[4], 0)


def compute_mov(match: MatchRecord, k: Optional[MovConstants]) -> MovResult:
    if match.outcome is Outcome.DRAW:
        raise ValueError(f"{match.match_id}: MOV is defined for decisive matches only")
    if match.mov_override is not None:
        return MovResult(match.mov_override)
    if k is None:
        raise ValueError(f"{match.match_id}: no MOV constants and no mov_override")
    mt = match.margin_type
    if mt is MarginType.RUNS:
        run = _clamped((match.margin_runs - k.r_min) / k.r_range, "run margin", match)
        return MovResult(run, run_term=run)
    if mt is MarginType.WICKETS:
        wk = _clamped((match.margin_wickets - k.w_min) / k.w_range, "wicket margin", match)
        return MovResult(wk, wicket_term=wk)
    if mt is MarginType.INNINGS:
        if match.total_runs is None:
            raise ValueError(f"{match.match_id}: innings win needs total_runs")
        erm = match.innings_excess_runs
        run = _clamped((erm - k.r_min) / k.r_range, "run margin", match)
        e4p = winner_e4r(match, k) / k.e4r
        bonus = (e4p + erm) / match.total_runs
        return MovResult(run + bonus, run_term=run, innings_term=bonus)
    raise ValueError(f"{match.match_id}: margin_type {mt.value} inconsistent with a decisive outcome")


def actual_score(result: str, mov: float) -> float:
    """Outcome code for a team: WIN, LOSS or DRAW, stretched by the MOV."""
    if mov < 0:
        raise ValueError("mov must be nonnegative")
    if result == "WIN":
        return (1.0 + mov) / 2.0
    if result == "LOSS":
        # complement of the winner's score so the pair sums to exactly 1
        return 1.0 - (1.0 + mov) / 2.0
    if result == "DRAW":
        return 0.5
    raise ValueError(f"unknown result {result!r}")


def derive_mov_constants(training: Dataset, e4r: Optional[float] = None, min_obs: int = 20) -> MovConstants:
    runs = [m.margin_runs for m in training.matches if m.margin_type is MarginType.RUNS]
    wkts = [m.margin_wickets for m in training.matches if m.margin_type is MarginType.WICKETS]
    missing = [name for name, xs in (("runs wins", runs), ("wickets wins", wkts)) if not xs]
    if missing:
        raise ValueError(f"training data lacks {' and '.join(missing)}")
    r_range, w_range = max(runs) - min(runs), max(wkts) - min(wkts)
    if r_range <= 0 or w_range <= 0:
        raise ValueError("winning margins span a zero range")

    nb: dict[int, NegBinParams] = {}
    for idx in range(1, 5):
        complete = [r.runs for r in training.innings if r.innings_index == idx and r.closed_by is ClosedBy.ALL_OUT]
        if len(complete) >= min_obs:
            nb[idx] = fit_negative_binomial(complete, idx, min_obs).params
    fourth = [r for r in training.innings if r.innings_index == 4]
    if e4r is None:
        if len(fourth) < min_obs:
            raise ValueError("not enough fourth innings to estimate E4R; pass e4r explicitly")
        e4r = compute_e4r(fourth, nb.get(4), min_records=min_obs)
    return MovConstants(min(runs), r_range, min(wkts), w_range, float(e4r), nb)


def refreshed(k: MovConstants, matches: Iterable[MatchRecord]) -> MovConstants:
    """Widen the run and wicket ranges to cover the given matches."""
    r_lo, r_hi = k.r_min, k.r_min + k.r_range
    w_lo, w_hi = k.w_min, k.w_min + k.w_range
    for m in matches:
        if m.margin_type is MarginType.RUNS:
            r_lo, r_hi = min(r_lo, m.margin_runs), max(r_hi, m.margin_runs)
        elif m.margin_type is MarginType.WICKETS:
            w_lo, w_hi = min(w_lo, m.margin_wickets), max(w_hi, m.margin_wickets)
    return MovConstants(r_lo, r_hi - r_lo, w_lo, w_hi - w_lo, k.e4r, k.nb)
