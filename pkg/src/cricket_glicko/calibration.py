"""Forecast losses and the grid search over the logistic scale ``d``."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

#: Candidate scales swept in the calibration table.
DEFAULT_CANDIDATES = (20, 40, 60, 70, 80, 85, 90, 100, 120, 150, 200, 400)
CRITERIA = ("BRIER", "LOGLOSS", "MAE", "ECE")
P_CLAMP = 1e-9


@dataclass(frozen=True)
class PredictionRecord:
    predicted: float
    observed: float

    def __post_init__(self):
        if not 0.0 <= self.predicted <= 1.0:
            raise ValueError(f"prediction {self.predicted} outside [0, 1]")
        if self.observed not in (0.0, 0.5, 1.0):
            raise ValueError(f"observed outcome must be 0, 0.5 or 1, got {self.observed}")


def _arrays(preds: Sequence[PredictionRecord]) -> tuple[np.ndarray, np.ndarray]:
    if not preds:
        raise ValueError("no predictions")
    p = np.fromiter((r.predicted for r in preds), float, len(preds))
    o = np.fromiter((r.observed for r in preds), float, len(preds))
    return p, o


def brier(preds: Sequence[PredictionRecord]) -> float:
    p, o = _arrays(preds)
    return float(np.mean((p - o) ** 2))


def log_loss(preds: Sequence[PredictionRecord]) -> float:
    """Mean negative log-likelihood; a draw counts half towards each class."""
    p, o = _arrays(preds)
    p = np.clip(p, P_CLAMP, 1.0 - P_CLAMP)
    return float(np.mean(-(o * np.log(p) + (1.0 - o) * np.log1p(-p))))


def mae(preds: Sequence[PredictionRecord]) -> float:
    p, o = _arrays(preds)
    return float(np.mean(np.abs(p - o)))


def ece(preds: Sequence[PredictionRecord], bins: int = 10) -> float:
    p, o = _arrays(preds)
    idx = np.minimum((p * bins).astype(int), bins - 1)
    total = 0.0
    for b in np.unique(idx):
        sel = idx == b
        total += sel.sum() / p.size * abs(o[sel].mean() - p[sel].mean())
    return float(total)


LOSSES: dict[str, Callable[[Sequence[PredictionRecord]], float]] = {
    "BRIER": brier, "LOGLOSS": log_loss, "MAE": mae, "ECE": ece,
}


@dataclass
class LossTable:
    rows: list[dict] = field(default_factory=list)

    def best(self, criterion: str = "BRIER") -> float:
        key = criterion.lower()
        # ties go to the smaller d
        return min(self.rows, key=lambda r: (r[key], r["d"]))["d"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "brier", "logloss", "mae", "ece"])
        for r in self.rows:
            w.writerow([r["d"]] + [f"{r[k]:.6f}" for k in ("brier", "logloss", "mae", "ece")])
        return buf.getvalue()


class GridSearchError(RuntimeError):
    def __init__(self, message: str, partial: LossTable):
        super().__init__(message)
        self.partial = partial


def loss_row(d: float, preds: Sequence[PredictionRecord], bins: int = 10) -> dict:
    return {"d": d, "brier": brier(preds), "logloss": log_loss(preds), "mae": mae(preds), "ece": ece(preds, bins)}


def grid_search_scale(candidates: Sequence[float], evaluator: Callable[[float], Sequence[PredictionRecord]],
                      criterion: str = "BRIER", bins: int = 10) -> tuple[float, LossTable]:
    if not candidates:
        raise ValueError("empty candidate list")
    criterion = criterion.upper()
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    table = LossTable()
    for d in candidates:
        if not d > 0 or not math.isfinite(d):
            raise ValueError(f"candidate scale must be positive, got {d}")
        try:
            preds = evaluator(d)
        except Exception as exc:
            raise GridSearchError(f"evaluator failed at d={d}: {exc}", table) from exc
        table.rows.append(loss_row(d, preds, bins))
    return table.best(criterion), table


# ---------------------------------------------------------------- synthetic check


@dataclass(frozen=True)
class SyntheticMatches:
    gaps: np.ndarray
    rd_b: np.ndarray
    outcomes: np.ndarray


def simulate_matches(n: int, true_scale: float, rng: np.random.Generator,
                     gap_sd: float = 60.0, rd_range: tuple[float, float] = (0.5, 2.0)) -> SyntheticMatches:
    """Decisive outcomes drawn from the base-10 logistic score at ``true_scale``."""
    from .glicko_core import Scale, g

    gaps = rng.normal(0.0, gap_sd, n)
    rd_b = rng.uniform(*rd_range, n)
    k = np.array([g(r) for r in rd_b])
    p = 1.0 / (1.0 + 10.0 ** (-gaps * k / Scale(true_scale).d))
    return SyntheticMatches(gaps, rd_b, (rng.random(n) < p).astype(float))


def basic_evaluator(data: SyntheticMatches) -> Callable[[float], list[PredictionRecord]]:
    from .glicko_core import Scale, expected_score_basic

    def evaluate(d: float) -> list[PredictionRecord]:
        sc = Scale(d)
        return [PredictionRecord(expected_score_basic(gap, 0.0, rd, sc), float(o))
                for gap, rd, o in zip(data.gaps, data.rd_b, data.outcomes)]
    return evaluate
