"""Match records, the dataset container, and CSV/JSON ingestion."""

from __future__ import annotations

import csv
import datetime as dt
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

#: Highest team total ever recorded in a Test innings.
INNINGS_RUN_CAP = 952

MATCH_COLUMNS = (
    "date", "team_a", "team_b", "host", "toss_winner", "outcome", "margin_type",
    "margin_runs", "margin_wickets", "innings_excess_runs", "total_runs",
    "e4r_winner", "mov_override",
)
INNINGS_COLUMNS = ("match_date", "batting_team", "innings_index", "runs", "wickets_lost", "closed_by")


class SchemaError(ValueError):
    """A match or innings file violates the documented schema."""


class Outcome(str, enum.Enum):
    A_WINS = "A_WINS"
    B_WINS = "B_WINS"
    DRAW = "DRAW"


class MarginType(str, enum.Enum):
    RUNS = "RUNS"
    WICKETS = "WICKETS"
    INNINGS = "INNINGS"
    NONE = "NONE"


class ClosedBy(str, enum.Enum):
    ALL_OUT = "ALL_OUT"
    DECLARED = "DECLARED"
    TARGET_REACHED = "TARGET_REACHED"
    MATCH_END = "MATCH_END"
    NOT_BATTED = "NOT_BATTED"


@dataclass(frozen=True)
class RatingState:
    rating: float
    rd: float

    def __post_init__(self):
        if not self.rd > 0:
            raise ValueError(f"rd must be positive, got {self.rd}")


@dataclass(frozen=True)
class MatchRecord:
    date: dt.date
    team_a: str
    team_b: str
    host: str
    toss_winner: str
    outcome: Outcome
    margin_type: MarginType = MarginType.NONE
    margin_runs: Optional[int] = None
    margin_wickets: Optional[int] = None
    innings_excess_runs: Optional[int] = None
    total_runs: Optional[int] = None
    winner_fourth_innings_expected: Optional[float] = None
    mov_override: Optional[float] = None

    @property
    def key(self) -> tuple:
        return (self.date, self.team_a, self.team_b)

    @property
    def match_id(self) -> str:
        return f"{self.date.isoformat()}:{self.team_a}-{self.team_b}"

    @property
    def winner(self) -> Optional[str]:
        if self.outcome is Outcome.A_WINS:
            return self.team_a
        if self.outcome is Outcome.B_WINS:
            return self.team_b
        return None

    @property
    def loser(self) -> Optional[str]:
        if self.outcome is Outcome.A_WINS:
            return self.team_b
        if self.outcome is Outcome.B_WINS:
            return self.team_a
        return None

    @property
    def opponent_of_host(self) -> str:
        return self.team_b if self.host == self.team_a else self.team_a

    def problems(self) -> list[str]:
        """Invariant violations, empty when the record is consistent."""
        out = []
        if not self.team_a or not self.team_b:
            out.append("team codes must be nonempty")
        if self.team_a == self.team_b:
            out.append("team_a and team_b must differ")
        if self.toss_winner not in (self.team_a, self.team_b):
            out.append(f"toss_winner {self.toss_winner!r} is not one of the teams")
        if self.host not in (self.team_a, self.team_b):
            out.append(f"host {self.host!r}: neutral venue unsupported")
        drawn = self.outcome is Outcome.DRAW
        if drawn != (self.margin_type is MarginType.NONE):
            out.append(f"outcome {self.outcome.value} inconsistent with margin_type {self.margin_type.value}")
        mt = self.margin_type
        if mt is MarginType.RUNS:
            if self.margin_runs is None or self.margin_runs < 0:
                out.append("RUNS margin requires nonnegative margin_runs")
        elif self.margin_runs is not None:
            out.append(f"margin_runs set for margin_type {mt.value}")
        if mt is MarginType.WICKETS:
            if self.margin_wickets is None or not 1 <= self.margin_wickets <= 10:
                out.append("WICKETS margin requires margin_wickets in 1..10")
        elif self.margin_wickets is not None:
            out.append(f"margin_wickets set for margin_type {mt.value}")
        if mt is MarginType.INNINGS:
            if self.innings_excess_runs is None or self.innings_excess_runs < 0:
                out.append("INNINGS margin requires nonnegative innings_excess_runs")
        elif self.innings_excess_runs is not None:
            out.append(f"innings_excess_runs set for margin_type {mt.value}")
        if self.total_runs is not None and self.total_runs <= 0:
            out.append("total_runs must be positive")
        if self.winner_fourth_innings_expected is not None and self.winner_fourth_innings_expected < 0:
            out.append("e4r_winner must be nonnegative")
        if self.mov_override is not None:
            if not self.mov_override >= 0 or math.isinf(self.mov_override):
                out.append("mov_override must be a finite nonnegative number")
        return out


@dataclass(frozen=True)
class InningsRecord:
    match_date: dt.date
    batting_team: str
    innings_index: int
    runs: int
    wickets_lost: int
    closed_by: ClosedBy

    def problems(self) -> list[str]:
        out = []
        if not 1 <= self.innings_index <= 4:
            out.append("innings_index must be in 1..4")
        if self.runs < 0:
            out.append("runs must be nonnegative")
        if self.runs > INNINGS_RUN_CAP:
            out.append(f"runs {self.runs} exceed the {INNINGS_RUN_CAP} cap")
        if not 0 <= self.wickets_lost <= 10:
            out.append("wickets_lost must be in 0..10")
        if (self.closed_by is ClosedBy.ALL_OUT) != (self.wickets_lost == 10):
            out.append("closed_by ALL_OUT iff wickets_lost == 10")
        return out


@dataclass(frozen=True)
class Dataset:
    matches: tuple[MatchRecord, ...] = ()
    innings: tuple[InningsRecord, ...] = ()
    teams: frozenset[str] = frozenset()

    @classmethod
    def from_matches(cls, matches: Iterable[MatchRecord], innings: Iterable[InningsRecord] = ()) -> "Dataset":
        ms = tuple(sorted(matches, key=lambda m: m.key))
        teams = {t for m in ms for t in (m.team_a, m.team_b)}
        return cls(matches=ms, innings=tuple(innings), teams=frozenset(teams))

    def __len__(self) -> int:
        return len(self.matches)

    def __iter__(self):
        return iter(self.matches)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


# ---------------------------------------------------------------- parsing


def _opt_int(raw: str, row: int, name: str) -> Optional[int]:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"row {row}: field {name!r} is not an integer: {raw!r}") from None


def _opt_float(raw: str, row: int, name: str) -> Optional[float]:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise SchemaError(f"row {row}: field {name!r} is not a number: {raw!r}") from None


def _enum(kind, raw: str, row: int, name: str):
    try:
        return kind(raw.strip())
    except ValueError:
        allowed = ", ".join(k.value for k in kind)
        raise SchemaError(f"row {row}: field {name!r} must be one of {allowed}, got {raw!r}") from None


def _date(raw: str, row: int, name: str) -> dt.date:
    try:
        return dt.date.fromisoformat(raw.strip())
    except ValueError:
        raise SchemaError(f"row {row}: field {name!r} is not an ISO date: {raw!r}") from None


def _team(raw: str, row: int, name: str) -> str:
    code = raw.strip()
    if not code or code != code.upper():
        raise SchemaError(f"row {row}: field {name!r} must be a nonempty uppercase team code, got {raw!r}")
    return code


def match_from_row(row: dict, lineno: int) -> MatchRecord:
    missing = [c for c in MATCH_COLUMNS if row.get(c) is None]
    if missing:
        raise SchemaError(f"row {lineno}: missing field(s) {', '.join(missing)}")
    rec = MatchRecord(
        date=_date(row["date"], lineno, "date"),
        team_a=_team(row["team_a"], lineno, "team_a"),
        team_b=_team(row["team_b"], lineno, "team_b"),
        host=_team(row["host"], lineno, "host"),
        toss_winner=_team(row["toss_winner"], lineno, "toss_winner"),
        outcome=_enum(Outcome, row["outcome"], lineno, "outcome"),
        margin_type=_enum(MarginType, row["margin_type"], lineno, "margin_type"),
        margin_runs=_opt_int(row["margin_runs"], lineno, "margin_runs"),
        margin_wickets=_opt_int(row["margin_wickets"], lineno, "margin_wickets"),
        innings_excess_runs=_opt_int(row["innings_excess_runs"], lineno, "innings_excess_runs"),
        total_runs=_opt_int(row["total_runs"], lineno, "total_runs"),
        winner_fourth_innings_expected=_opt_float(row["e4r_winner"], lineno, "e4r_winner"),
        mov_override=_opt_float(row["mov_override"], lineno, "mov_override"),
    )
    problems = rec.problems()
    if problems:
        raise SchemaError(f"row {lineno}: " + "; ".join(problems))
    return rec


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def load_matches(path, format: str = "CSV") -> Dataset:
    """Load and validate a match file; rows are sorted by (date, team_a, team_b)."""
    fmt = format.upper()
    text = _read_text(path)
    if fmt == "CSV":
        reader = csv.DictReader(io.StringIO(text))
        header = tuple(reader.fieldnames or ())
        if header and header != MATCH_COLUMNS:
            raise SchemaError(f"header mismatch: expected {','.join(MATCH_COLUMNS)}")
        rows = [(i, r) for i, r in enumerate(reader, start=2)]
    elif fmt == "JSON":
        data = json.loads(text) if text.strip() else []
        if isinstance(data, dict):
            data = data.get("matches", [])
        rows = []
        for i, r in enumerate(data, start=1):
            if not isinstance(r, dict):
                raise SchemaError(f"row {i}: expected an object")
            rows.append((i, {k: "" if r.get(k) is None else str(r.get(k)) for k in MATCH_COLUMNS}))
    else:
        raise ValueError(f"unknown match file format {format!r}")
    return Dataset.from_matches(match_from_row(r, i) for i, r in rows)


def load_innings(path) -> tuple[InningsRecord, ...]:
    reader = csv.DictReader(io.StringIO(_read_text(path)))
    if reader.fieldnames and tuple(reader.fieldnames) != INNINGS_COLUMNS:
        raise SchemaError(f"header mismatch: expected {','.join(INNINGS_COLUMNS)}")
    out = []
    for i, row in enumerate(reader, start=2):
        rec = InningsRecord(
            match_date=_date(row["match_date"], i, "match_date"),
            batting_team=_team(row["batting_team"], i, "batting_team"),
            innings_index=_opt_int(row["innings_index"], i, "innings_index") or 0,
            runs=_opt_int(row["runs"], i, "runs") or 0,
            wickets_lost=_opt_int(row["wickets_lost"], i, "wickets_lost") or 0,
            closed_by=_enum(ClosedBy, row["closed_by"], i, "closed_by"),
        )
        problems = rec.problems()
        if problems:
            raise SchemaError(f"row {i}: " + "; ".join(problems))
        out.append(rec)
    return tuple(out)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dt.date):
        return value.isoformat()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps_matches(matches: Iterable[MatchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MATCH_COLUMNS)
    for m in matches:
        w.writerow([_fmt(v) for v in (
            m.date, m.team_a, m.team_b, m.host, m.toss_winner, m.outcome, m.margin_type,
            m.margin_runs, m.margin_wickets, m.innings_excess_runs, m.total_runs,
            m.winner_fourth_innings_expected, m.mov_override,
        )])
    return buf.getvalue()


def save_matches(matches: Iterable[MatchRecord], path) -> None:
    Path(path).write_text(dumps_matches(matches), encoding="utf-8")


def dumps_innings(innings: Iterable[InningsRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(INNINGS_COLUMNS)
    for r in innings:
        w.writerow([_fmt(v) for v in (r.match_date, r.batting_team, r.innings_index, r.runs, r.wickets_lost, r.closed_by)])
    return buf.getvalue()


def save_innings(innings: Iterable[InningsRecord], path) -> None:
    Path(path).write_text(dumps_innings(innings), encoding="utf-8")


def validate_dataset(d: Dataset) -> ValidationReport:
    report = ValidationReport()
    for m in d.matches:
        for p in m.problems():
            report.errors.append(f"{m.match_id}: {p}")
        for t in (m.team_a, m.team_b, m.host):
            if t not in d.teams:
                report.errors.append(f"{m.match_id}: team {t} missing from team set")
    keys = [m.key for m in d.matches]
    if keys != sorted(keys):
        report.errors.append("matches are not sorted by (date, team_a, team_b)")
    for r in d.innings:
        for p in r.problems():
            report.errors.append(f"innings {r.match_date.isoformat()} {r.batting_team} #{r.innings_index}: {p}")
    if d.innings:
        covered = {(r.match_date, r.batting_team) for r in d.innings}
        for m in d.matches:
            if (m.date, m.team_a) not in covered and (m.date, m.team_b) not in covered:
                report.warnings.append(f"{m.match_id}: no innings records")
    return report
