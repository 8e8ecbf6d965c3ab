"""Glicko-style Test cricket ratings with home, toss and margin-of-victory effects."""

from .copula_scores import CopulaParams, ImpactMoments, expected_score
from .data_model import Dataset, MatchRecord, RatingState, load_innings, load_matches
from .engine import EngineParams, Mode, process_match, run_season
from .glicko_core import Scale
from .mov import MovConstants, load_mov_constants
from .snapshot import EngineSnapshot, load_initial_snapshot

__version__ = "0.1.0"

__all__ = [
    "CopulaParams", "Dataset", "EngineParams", "EngineSnapshot", "ImpactMoments", "MatchRecord", "Mode",
    "MovConstants", "RatingState", "Scale", "expected_score", "load_initial_snapshot", "load_innings",
    "load_matches", "load_mov_constants", "process_match", "run_season",
]
