"""FGM-copula expected scores with home and toss impacts.

Each side's expected score joins two logistic marginals, one shifted by the
home (or away) impact and one by the toss impact, through a
Farlie-Gumbel-Morgenstern copula. Unlike :func:`glicko_core.expected_score_basic`
the marginals use the natural base, so the same ``d`` is effectively
``ln 10`` times softer here.

The module also carries the delta-method variance of that score and a
one-parameter likelihood comparison of candidate copula families.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize, stats

from .glicko_core import Scale, g

E_CLAMP = 1e-9


@dataclass(frozen=True)
class CopulaParams:
    omega: float = -0.5436

    def __post_init__(self):
        if not -1.0 <= self.omega <= 1.0:
            raise ValueError(f"FGM omega must lie in [-1, 1], got {self.omega}")


@dataclass(frozen=True)
class ImpactMoments:
    var_h: float = 0.0
    var_t: float = 0.0
    cov_ht: float = 0.0

    def __post_init__(self):
        if self.var_h < 0 or self.var_t < 0:
            raise ValueError("variances must be nonnegative")
        if abs(self.cov_ht) > math.sqrt(self.var_h * self.var_t) * (1 + 1e-12) + 1e-15:
            raise ValueError("covariance exceeds the Cauchy-Schwarz bound")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "ImpactMoments":
        arr = np.asarray(pairs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 2:
            raise ValueError("need at least two (h, t) pairs")
        cov = np.cov(arr[:, 0], arr[:, 1])
        return cls(float(cov[0, 0]), float(cov[1, 1]), float(cov[0, 1]))


@dataclass(frozen=True)
class ScoreWithCI:
    e: float
    variance: float
    ci_low: float
    ci_high: float


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average ranks."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two sequences of equal length >= 2")
    rx, ry = stats.rankdata(xs), stats.rankdata(ys)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        raise ValueError("Spearman correlation undefined for a constant sequence")
    return float(np.corrcoef(rx, ry)[0, 1])


def fgm_omega_from_rho(rho: float) -> CopulaParams:
    if abs(rho) > 1.0 / 3.0:
        raise ValueError(f"Spearman rho {rho} outside the FGM range [-1/3, 1/3]")
    return CopulaParams(omega=3.0 * rho)


def fgm_copula(u: float, v: float, p: CopulaParams) -> float:
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError(f"copula arguments must lie in [0, 1], got ({u}, {v})")
    return u * v * (1.0 + p.omega * (1.0 - u) * (1.0 - v))


def fgm_density(u, v, omega: float):
    return 1.0 + omega * (1.0 - 2.0 * np.asarray(u)) * (1.0 - 2.0 * np.asarray(v))


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def logits(r_a: float, r_b: float, rd_b: float, h: float, t: float, scale: Scale) -> tuple[float, float]:
    k = g(rd_b) / scale.d
    gap = r_b - r_a
    return k * (h - gap), k * (t - gap)


def _check_impacts(h: float, t: float) -> None:
    if not (-1.0 <= h <= 1.0 and -1.0 <= t <= 1.0):
        raise ValueError(f"impacts must lie in [-1, 1], got h={h}, t={t}")


def expected_score(r_a: float, r_b: float, rd_b: float, h: float, t: float,
                   p: CopulaParams = CopulaParams(), scale: Scale = Scale()) -> float:
    _check_impacts(h, t)
    l1, l2 = logits(r_a, r_b, rd_b, h, t, scale)
    p1, p2 = _logistic(l1), _logistic(l2)
    e = p1 * p2 * (1.0 + p.omega * (1.0 - p1) * (1.0 - p2))
    return min(max(e, E_CLAMP), 1.0 - E_CLAMP)


def expected_score_gradient(r_a: float, r_b: float, rd_b: float, h: float, t: float,
                            p: CopulaParams = CopulaParams(), scale: Scale = Scale()) -> tuple[float, float]:
    """Partials of the (unclamped) expected score with respect to the two logits."""
    _check_impacts(h, t)
    l1, l2 = logits(r_a, r_b, rd_b, h, t, scale)
    p1, p2 = _logistic(l1), _logistic(l2)
    w = p.omega
    d1 = p2 * (1.0 + (1.0 + 2.0 * p1 * p2 - 2.0 * p1 - p2) * w) * p1 * (1.0 - p1)
    d2 = p1 * (1.0 + (1.0 + 2.0 * p1 * p2 - 2.0 * p2 - p1) * w) * p2 * (1.0 - p2)
    return d1, d2


def expected_score_variance(gradient: tuple[float, float], moments: ImpactMoments,
                            rd_b: float, scale: Scale = Scale()) -> float:
    c = (g(rd_b) / scale.d) ** 2
    d1, d2 = gradient
    var = c * (d1 * d1 * moments.var_h + 2.0 * d1 * d2 * moments.cov_ht + d2 * d2 * moments.var_t)
    if var < 0:
        warnings.warn(f"negative delta-method variance {var:.3e} clamped to 0", RuntimeWarning)
        var = 0.0
    return var


def confidence_interval(e: float, variance: float, level: float = 0.95) -> tuple[float, float]:
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    z = stats.norm.ppf((1.0 + level) / 2.0)
    half = z * math.sqrt(variance)
    return max(0.0, e - half), min(1.0, e + half)


def score_with_ci(r_a: float, r_b: float, rd_b: float, h: float, t: float, p: CopulaParams,
                  scale: Scale, moments: ImpactMoments, level: float = 0.95) -> ScoreWithCI:
    e = expected_score(r_a, r_b, rd_b, h, t, p, scale)
    var = expected_score_variance(expected_score_gradient(r_a, r_b, rd_b, h, t, p, scale), moments, rd_b, scale)
    lo, hi = confidence_interval(e, var, level)
    return ScoreWithCI(e, var, min(lo, e), max(hi, e))


# ---------------------------------------------------------------- family comparison


def _gaussian_logpdf(u, v, rho):
    x, y = stats.norm.ppf(u), stats.norm.ppf(v)
    r2 = 1.0 - rho * rho
    return -0.5 * math.log(r2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)


def _frank_logpdf(u, v, theta):
    if abs(theta) < 1e-8:
        return np.zeros_like(u)
    a = -math.expm1(-theta)
    num = theta * a * np.exp(-theta * (u + v))
    den = (a - (-np.expm1(-theta * u)) * (-np.expm1(-theta * v))) ** 2
    return np.log(num / den)


def _plackett_logpdf(u, v, theta):
    s = u + v
    num = theta * (1.0 + (theta - 1.0) * (s - 2.0 * u * v))
    den = ((1.0 + (theta - 1.0) * s) ** 2 - 4.0 * theta * (theta - 1.0) * u * v) ** 1.5
    return np.log(num / den)


def _fgm_logpdf(u, v, omega):
    return np.log(np.maximum(fgm_density(u, v, omega), 1e-300))


# name -> (log density, search bounds, independence value, search in log space)
COPULA_FAMILIES = {
    "FGM": (_fgm_logpdf, (-1.0, 1.0), 0.0, False),
    "Gaussian": (_gaussian_logpdf, (-0.999, 0.999), 0.0, False),
    "Frank": (_frank_logpdf, (-30.0, 30.0), 0.0, False),
    "Plackett": (_plackett_logpdf, (math.log(1e-3), math.log(1e3)), 1.0, True),
}


def pseudo_observations(pairs: Sequence[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(pairs, dtype=float)
    n = arr.shape[0]
    return stats.rankdata(arr[:, 0]) / (n + 1), stats.rankdata(arr[:, 1]) / (n + 1)


def copula_family_comparison(pairs: Sequence[tuple[float, float]]) -> list[dict]:
    """Fit each one-parameter family by maximum likelihood on rank pseudo-observations."""
    if len(pairs) < 10:
        raise ValueError("copula comparison needs at least 10 pairs")
    u, v = pseudo_observations(pairs)
    rows = []
    for name, (logpdf, (lo, hi), _, log_space) in COPULA_FAMILIES.items():
        def nll(x, logpdf=logpdf, log_space=log_space):
            theta = math.exp(x) if log_space else x
            val = -float(np.sum(logpdf(u, v, theta)))
            return val if math.isfinite(val) else 1e300
        try:
            res = optimize.minimize_scalar(nll, bounds=(lo, hi), method="bounded", options={"xatol": 1e-8})
            theta = math.exp(res.x) if log_space else float(res.x)
            loglik = -float(res.fun)
            rows.append({"family": name, "parameter": theta, "loglik": loglik, "aic": 2.0 - 2.0 * loglik,
                         "converged": bool(res.success)})
        except (ValueError, FloatingPointError) as exc:
            rows.append({"family": name, "parameter": math.nan, "loglik": math.nan, "aic": math.nan,
                         "converged": False, "error": str(exc)})
    return rows


def sample_fgm(n: int, omega: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw from the FGM copula by inverting the conditional law of V given U."""
    u = rng.random(n)
    w = rng.random(n)
    a = omega * (1.0 - 2.0 * u)
    # C(v | u) = v + a v (1 - v); solve a v^2 - (1 + a) v + w = 0 for the root in [0, 1]
    safe = np.abs(a) > 1e-12
    v = w.copy()
    disc = (1.0 + a[safe]) ** 2 - 4.0 * a[safe] * w[safe]
    v[safe] = 2.0 * w[safe] / ((1.0 + a[safe]) + np.sqrt(disc))
    return u, v
