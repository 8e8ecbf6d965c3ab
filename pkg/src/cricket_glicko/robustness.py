"""Sensitivity of final ratings to the order in which matches are played."""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .data_model import Dataset, MatchRecord
from .engine import EngineParams, Mode, run_season
from .snapshot import EngineSnapshot

REPORT_COLUMNS = ("team", "point_rating", "boot_mean", "mad", "sd", "ci_low", "ci_high", "cv_pct")


@dataclass(frozen=True)
class TeamStability:
    team: str
    point_rating: float
    boot_mean: float
    mad: float
    sd: float
    ci_low: float
    ci_high: float

    @property
    def cv_pct(self) -> float:
        return 100.0 * self.sd / self.boot_mean

    @property
    def point_inside_ci(self) -> bool:
        return self.ci_low <= self.point_rating <= self.ci_high


@dataclass
class BootstrapReport:
    teams: list[TeamStability]
    replicates: int
    seed: int
    #: replicate final ratings, one row per replicate, columns in ``teams`` order
    samples: np.ndarray = field(repr=False, default_factory=lambda: np.empty((0, 0)))

    def by_team(self) -> dict[str, TeamStability]:
        return {t.team: t for t in self.teams}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for t in self.teams:
            w.writerow([t.team] + [f"{v:.6f}" for v in (t.point_rating, t.boot_mean, t.mad, t.sd,
                                                          t.ci_low, t.ci_high, t.cv_pct)])
        return buf.getvalue()


@dataclass(frozen=True)
class StabilitySummary:
    mean_cv_pct: float
    max_mad: float
    inside_ci: dict[str, bool]

    @property
    def all_inside(self) -> bool:
        return all(self.inside_ci.values())


def multiset_digest(matches) -> str:
    """Order-free fingerprint of a match list."""
    ids = sorted(repr(m) for m in matches)
    return hashlib.sha256("\n".join(ids).encode()).hexdigest()


def replicate_order(matches: tuple[MatchRecord, ...], seed: int, index: int,
                    with_replacement: bool = False) -> list[MatchRecord]:
    rng = np.random.default_rng([seed, index])
    n = len(matches)
    picks = rng.integers(0, n, n) if with_replacement else rng.permutation(n)
    return [matches[i] for i in picks]


def bootstrap_permutations(snapshot0: EngineSnapshot, dataset, mode: Mode, params: EngineParams = EngineParams(),
                           n: int = 100, seed: int = 0, with_replacement: bool = False,
                           ci: str = "percentile", level: float = 0.95) -> BootstrapReport:
    """Re-run the season under ``n`` reshuffled match orders.

    Replicate ``i`` draws its order from ``default_rng([seed, i])`` so any
    replicate can be regenerated on its own.
    """
    if n < 2:
        raise ValueError("need at least two replicates")
    if ci not in ("percentile", "normal"):
        raise ValueError(f"ci must be 'percentile' or 'normal', got {ci!r}")
    matches = dataset.matches if isinstance(dataset, Dataset) else tuple(dataset)
    teams = sorted(snapshot0.ratings)
    point = run_season(snapshot0, matches, mode, params).final

    samples = np.empty((n, len(teams)))
    for i in range(n):
        order = replicate_order(matches, seed, i, with_replacement)
        final = run_season(snapshot0, order, mode, params).final
        samples[i] = [final.ratings[t].rating for t in teams]

    tail = (1.0 - level) / 2.0
    rows = []
    for j, team in enumerate(teams):
        x = samples[:, j]
        r0 = point.ratings[team].rating
        mean, sd = float(x.mean()), float(x.std(ddof=1))
        if ci == "percentile":
            lo, hi = (float(v) for v in np.quantile(x, [tail, 1.0 - tail]))
        else:
            z = stats.norm.ppf(1.0 - tail)
            lo, hi = mean - z * sd, mean + z * sd
        rows.append(TeamStability(team, r0, mean, float(np.mean(np.abs(x - r0))), sd, lo, hi))
    return BootstrapReport(rows, n, seed, samples)


def stability_summary(report: BootstrapReport) -> StabilitySummary:
    return StabilitySummary(
        mean_cv_pct=float(np.mean([t.cv_pct for t in report.teams])),
        max_mad=max(t.mad for t in report.teams),
        inside_ci={t.team: t.point_inside_ci for t in report.teams},
    )
