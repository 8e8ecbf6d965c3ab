"""Glicko primitives with a tunable logistic scale.

The scale ``d`` replaces the chess constant 400 in the expected-score
exponent. Rating-deviation updates follow the one-match Glicko step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Lower bound applied to RD after every update.
RD_FLOOR = 0.5

DEFAULT_SCALE = 85.0


@dataclass(frozen=True)
class Scale:
    d: float = DEFAULT_SCALE

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"scale d must be positive, got {self.d}")


def g(rd: float) -> float:
    """Attenuation factor for an opponent's rating deviation, in (0, 1]."""
    if rd < 0:
        raise ValueError(f"rating deviation must be non-negative, got {rd}")
    return 1.0 / math.sqrt(1.0 + 3.0 * rd * rd / math.pi ** 2)


def expected_score_basic(r_a: float, r_b: float, rd_b: float, scale: Scale = Scale()) -> float:
    """Base-10 logistic expected score of A against B."""
    exponent = -(r_a - r_b) * g(rd_b) / scale.d
    return 1.0 / (1.0 + 10.0 ** exponent)


def d_squared(g_opp: float, e: float) -> float:
    if not 0 < g_opp <= 1:
        raise ValueError(f"g must lie in (0, 1], got {g_opp}")
    if not 0 < e < 1:
        raise ValueError(f"expected score must lie strictly inside (0, 1), got {e}")
    return 1.0 / (g_opp * g_opp * e * (1.0 - e))


def update_rd(rd: float, d2: float) -> float:
    if rd <= 0 or d2 <= 0:
        raise ValueError(f"rd and d2 must be positive, got rd={rd}, d2={d2}")
    return 1.0 / math.sqrt(1.0 / (rd * rd) + 1.0 / d2)


def update_rating(r: float, rd: float, d2: float, g_opp: float, s: float, e: float) -> float:
    """One-match rating update; the step size is the post-match variance."""
    if rd <= 0 or d2 <= 0:
        raise ValueError(f"rd and d2 must be positive, got rd={rd}, d2={d2}")
    return r + g_opp * (s - e) / (1.0 / (rd * rd) + 1.0 / d2)


def update_rating_root(r: float, rd: float, d2: float, g_opp: float, s: float, e: float) -> float:
    """Rating update whose step is the post-match RD rather than its square.

    This is the form the season engine uses by default; it moves ratings far
    less per match than :func:`update_rating` once RD has shrunk below 1.
    """
    if rd <= 0 or d2 <= 0:
        raise ValueError(f"rd and d2 must be positive, got rd={rd}, d2={d2}")
    return r + g_opp * (s - e) / math.sqrt(1.0 / (rd * rd) + 1.0 / d2)


#: rating-step rules selectable by the engine
RATING_STEPS = {"variance": update_rating, "root": update_rating_root}
