"""Home and toss impacts: cumulative tallies, impact ratios, and significance tests.

Impacts are ratios of counts, so they are always recomputed from the tallies
instead of being nudged incrementally. A cell may carry a seed (``prior_value``
with a pseudo-count ``prior_weight``) standing in for history that is only
known as a ratio, e.g. the impact tables reported at the end of a training
window.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

from .data_model import MatchRecord


@dataclass
class HomeCell:
    """Head-to-head record of ``host`` against one opponent, at the host."""

    prior_value: float = 0.0
    prior_weight: float = 0.0
    played: int = 0
    won: int = 0
    lost: int = 0


@dataclass
class TossCell:
    """Results of one team at one host, split by the toss result."""

    won_toss_won: int = 0
    won_toss_lost: int = 0
    won_toss_drawn: int = 0
    lost_toss_won: int = 0
    lost_toss_lost: int = 0
    lost_toss_drawn: int = 0

    @property
    def tosses_won(self) -> int:
        return self.won_toss_won + self.won_toss_lost + self.won_toss_drawn


@dataclass
class TossPrior:
    value: float = 0.0
    weight: float = 0.0


@dataclass
class HeadToHeadTally:
    home: dict[tuple[str, str], HomeCell] = field(default_factory=dict)
    toss: dict[tuple[str, str], TossCell] = field(default_factory=dict)
    toss_prior: dict[str, TossPrior] = field(default_factory=dict)

    def copy(self) -> "HeadToHeadTally":
        return copy.deepcopy(self)


@dataclass(frozen=True)
class ImpactTables:
    """Read-only view of the impacts implied by a tally.

    Only home impacts are stored; the away impact of ``j`` at ``i`` is the
    negated home impact of ``i`` against ``j``.
    """

    tally: HeadToHeadTally

    def home(self, host: str, opp: str) -> float:
        return home_impact(self.tally, host, opp)

    def away(self, team: str, host: str) -> float:
        return -home_impact(self.tally, host, team)

    def toss_win(self, team: str, host: str) -> float:
        return toss_impact(self.tally, team, host, True)

    def toss_lose(self, team: str, host: str) -> float:
        return toss_impact(self.tally, team, host, False)


def _ratio(prior_value: float, prior_weight: float, net: int, n: int) -> float:
    if n == 0:
        return prior_value if prior_weight > 0 else 0.0
    return (prior_value * prior_weight + net) / (prior_weight + n)


def home_impact(tally: HeadToHeadTally, host: str, opp: str) -> float:
    """(won - lost) / played for ``host`` at home against ``opp``; 0 without history."""
    cell = tally.home.get((host, opp))
    if cell is None:
        return 0.0
    return _ratio(cell.prior_value, cell.prior_weight, cell.won - cell.lost, cell.played)


def toss_impact(tally: HeadToHeadTally, team: str, host: str, won_toss: bool) -> float:
    """Toss-win impact of ``team`` at ``host``; the toss-lose impact is its negation."""
    cell = tally.toss.get((team, host), TossCell())
    prior = tally.toss_prior.get(team, TossPrior())
    value = _ratio(prior.value, prior.weight, cell.won_toss_won - cell.won_toss_lost, cell.tosses_won)
    return value if won_toss else -value


def update_tallies(tally: HeadToHeadTally, match: MatchRecord) -> HeadToHeadTally:
    """Return a new tally with ``match`` counted. Not idempotent."""
    out = tally.copy()
    host, opp = match.host, match.opponent_of_host
    cell = out.home.setdefault((host, opp), HomeCell())
    cell.played += 1
    if match.winner == host:
        cell.won += 1
    elif match.winner == opp:
        cell.lost += 1

    toss_w = match.toss_winner
    toss_l = match.team_b if toss_w == match.team_a else match.team_a
    wc = out.toss.setdefault((toss_w, host), TossCell())
    lc = out.toss.setdefault((toss_l, host), TossCell())
    if match.winner is None:
        wc.won_toss_drawn += 1
        lc.lost_toss_drawn += 1
    elif match.winner == toss_w:
        wc.won_toss_won += 1
        lc.lost_toss_lost += 1
    else:
        wc.won_toss_lost += 1
        lc.lost_toss_won += 1
    return out


def rational_seed(value: float, max_denominator: int = 40, tol: float = 5e-4) -> tuple[float, float]:
    """Smallest pseudo-count ``n`` with ``value * n`` within ``tol * n`` of an integer.

    Used to turn a reported ratio such as 0.3333 back into a count weight.
    A zero value carries no history.
    """
    if not -1 <= value <= 1:
        raise ValueError(f"impact {value} outside [-1, 1]")
    if value == 0:
        return 0.0, 0
    frac = Fraction(value).limit_denominator(max_denominator)
    for n in range(1, max_denominator + 1):
        if abs(value * n - round(value * n)) <= tol * n:
            return value, float(n)
    return value, float(frac.denominator)


# ---------------------------------------------------------------- tests


def binomial_sign_test(won: int, lost: int) -> float:
    """Exact two-sided binomial test of P(win) = 1/2 over decisive matches."""
    if won < 0 or lost < 0:
        raise ValueError("counts must be nonnegative")
    if won + lost == 0:
        raise ValueError("binomial test undefined without decisive matches")
    return float(stats.binomtest(won, won + lost, 0.5).pvalue)


def chi_square_1df(observed: Sequence) -> tuple[float, float]:
    """Pearson chi-square with one degree of freedom.

    Accepts either two counts (goodness of fit against an even split) or a
    2x2 contingency table (independence, no continuity correction).
    """
    obs = np.asarray(observed, dtype=float)
    if obs.shape == (2,):
        expected = np.full(2, obs.sum() / 2.0)
    elif obs.shape == (2, 2):
        expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / obs.sum()
    else:
        raise ValueError(f"expected 2 counts or a 2x2 table, got shape {obs.shape}")
    if np.any(expected <= 0):
        raise ValueError("chi-square undefined with a zero expected count")
    statistic = float(np.sum((obs - expected) ** 2 / expected))
    return statistic, float(stats.chi2.sf(statistic, 1))


def ks_logistic_test(sample: Sequence[float]) -> tuple[float, float]:
    """One-sample KS test against a logistic law fitted by moments."""
    x = np.asarray(sample, dtype=float)
    if x.size < 5:
        raise ValueError("KS test needs at least 5 observations")
    sd = x.std()
    if sd == 0:
        raise ValueError("degenerate sample: zero variance")
    loc, scale = x.mean(), math.sqrt(3.0) * sd / math.pi
    res = stats.kstest(x, "logistic", args=(loc, scale), method="asymp")
    return float(res.statistic), float(res.pvalue)


def tan_transform(x: float) -> float:
    if not -1 < x < 1:
        raise ValueError(f"tan transform needs |x| < 1, got {x}")
    return math.tan(math.pi * x / 2.0)


def inverse_tan_transform(y: float) -> float:
    return 2.0 * math.atan(y) / math.pi
