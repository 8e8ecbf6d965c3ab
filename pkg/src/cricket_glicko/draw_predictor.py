"""Flagging likely draws from the two sides' expected scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

#: Top shares for the trade-off table, as 100(1 - q) percent.
DEFAULT_TOP_SHARES = (0.35, 0.33, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05)
DEFAULT_ALPHAS = tuple(round(0.05 * i, 2) for i in range(21))


@dataclass(frozen=True)
class DrawScoreConfig:
    alpha: float = 0.6
    quantile: float = 0.67

    def __post_init__(self):
        if not 0 < self.alpha < 1 or not 0 < self.quantile < 1:
            raise ValueError("alpha and quantile must lie strictly inside (0, 1)")


def draw_score(e_a: float, e_b: float, alpha: float) -> float:
    """Convex mix of the unclaimed expected-score mass and the closeness of the two sides."""
    return alpha * (1.0 - (e_a + e_b)) + (1.0 - alpha) * abs(e_a - e_b)


def predict_draws(scores: Sequence[tuple[Hashable, float]], q: float) -> set:
    """Ids whose score lies strictly above the empirical q-quantile (linear interpolation)."""
    if not scores:
        raise ValueError("no scores")
    values = np.array([s for _, s in scores], dtype=float)
    threshold = np.quantile(values, q)
    return {mid for mid, s in scores if s > threshold}


def alpha_q_tradeoff(matches: Sequence[tuple[Hashable, float, float, bool]],
                     alphas: Sequence[float] = DEFAULT_ALPHAS,
                     top_shares: Sequence[float] = DEFAULT_TOP_SHARES) -> np.ndarray:
    """Count actual draws among flagged matches for every (alpha, top share).

    ``matches`` holds ``(id, e_a, e_b, was_draw)``; rows follow ``alphas`` and
    columns follow ``top_shares`` (q = 1 - share).
    """
    draws = {mid for mid, _, _, drawn in matches if drawn}
    out = np.zeros((len(alphas), len(top_shares)), dtype=int)
    for i, a in enumerate(alphas):
        scores = [(mid, draw_score(ea, eb, a)) for mid, ea, eb, _ in matches]
        for j, share in enumerate(top_shares):
            out[i, j] = len(predict_draws(scores, 1.0 - share) & draws)
    return out
