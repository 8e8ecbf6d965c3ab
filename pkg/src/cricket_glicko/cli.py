"""Command-line entry point: ``cricket-glicko <command> [options]``.

Settings come from built-in defaults, then an optional JSON ``--config``
file, then command-line flags, each layer overriding the previous one.
Relative paths inside a config file resolve against the file's directory.

Exit codes: 0 success, 1 runtime or domain error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import calibration, draw_predictor, engine, robustness
from .copula_scores import CopulaParams, ImpactMoments, fgm_omega_from_rho, spearman_rho
from .data_model import Dataset, SchemaError, load_innings, load_matches, validate_dataset
from .glicko_core import Scale
from .mov import compute_e4r, load_mov_constants
from .snapshot import load_initial_snapshot

log = logging.getLogger("cricket_glicko")

FIXTURES = Path(__file__).resolve().parent / "fixtures"

#: ICC Test ranking after WTC 2021-23, best first
REFERENCE_RANKING = ("IND", "AUS", "ENG", "SA", "NZ", "PAK", "SL", "WI", "BAN")

PATH_FIELDS = ("matches", "innings", "snapshot", "mov_constants")


class ConfigError(Exception):
    """Bad or missing configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    matches: Optional[str] = None
    innings: list[str] = field(default_factory=list)
    snapshot: Optional[str] = None
    mov_constants: Optional[str] = None
    mode: str = "final"
    scale: float = 85.0
    #: a number in [-1, 1] or "estimate" for the Spearman-based estimate
    omega: object = -0.5436
    step: str = "root"
    #: expected-score model: "copula" (home and toss) or "basic" logistic
    expected: str = "copula"
    replicates: int = 100
    seed: int = 0
    alpha: float = 0.6
    quantile: float = 0.67
    out: str = "out"
    candidates: list[float] = field(default_factory=lambda: list(calibration.DEFAULT_CANDIDATES))
    criterion: str = "BRIER"
    synthetic: int = 0
    reference_ranking: list[str] = field(default_factory=lambda: list(REFERENCE_RANKING))

    def check(self, required: tuple[str, ...] = ()) -> None:
        for name in required:
            if not getattr(self, name):
                raise ConfigError(f"{name}: required but not set (use --{name.replace('_', '-')} or the config file)")
        for name in PATH_FIELDS:
            value = getattr(self, name)
            for p in value if isinstance(value, list) else [value]:
                if p and not Path(p).is_file():
                    raise ConfigError(f"{name}: file not found: {p}")
        if not self.scale > 0:
            raise ConfigError(f"scale: must be positive, got {self.scale}")
        if self.omega != "estimate":
            try:
                CopulaParams(float(self.omega))
            except (TypeError, ValueError):
                raise ConfigError(f"omega: must be 'estimate' or a number in [-1, 1], got {self.omega!r}") from None
        try:
            engine.Mode(self.mode)
        except ValueError:
            raise ConfigError(f"mode: must be improvised or final, got {self.mode!r}") from None
        if self.step not in ("root", "variance"):
            raise ConfigError(f"step: must be root or variance, got {self.step!r}")
        if self.expected not in ("copula", "basic"):
            raise ConfigError(f"expected: must be copula or basic, got {self.expected!r}")
        if self.replicates < 2:
            raise ConfigError("replicates: need at least 2")
        if not 0 < self.alpha < 1 or not 0 < self.quantile < 1:
            raise ConfigError("alpha and quantile: must lie strictly inside (0, 1)")
        if not self.candidates:
            raise ConfigError("candidates: empty candidate list")
        if any(not c > 0 for c in self.candidates):
            raise ConfigError("candidates: every scale must be positive")
        if self.criterion.upper() not in calibration.CRITERIA:
            raise ConfigError(f"criterion: must be one of {', '.join(calibration.CRITERIA)}")


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"config: unknown field(s) {', '.join(unknown)}")
    for name in PATH_FIELDS + ("out",):
        value = data.get(name)
        if isinstance(value, list):
            data[name] = [str((p.parent / v).resolve()) for v in value]
        elif value:
            data[name] = str((p.parent / value).resolve())
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then flags."""
    merged = load_config(args.config)
    for f in dataclasses.fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            merged[f.name] = value
    if isinstance(merged.get("innings"), str):
        merged["innings"] = [merged["innings"]]
    return RunConfig(**merged)


# ---------------------------------------------------------------- shared plumbing


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def provenance(cfg: RunConfig, command: str) -> dict:
    inputs = {}
    for name in PATH_FIELDS:
        value = getattr(cfg, name)
        for i, p in enumerate(value if isinstance(value, list) else [value]):
            if p:
                key = name if not isinstance(value, list) else f"{name}[{i}]"
                inputs[key] = {"file": Path(p).name, "sha256": sha256_file(p)}
    params = {k: v for k, v in dataclasses.asdict(cfg).items() if k not in PATH_FIELDS + ("out",)}
    return {"command": command, "inputs": inputs, "parameters": params}


def with_header(body: str, prov: dict) -> str:
    lines = [f"# command: {prov['command']}"]
    lines += [f"# input {k}: {v['file']} sha256={v['sha256']}" for k, v in prov["inputs"].items()]
    lines.append("# parameters: " + json.dumps(prov["parameters"], sort_keys=True))
    return "\n".join(lines) + "\n" + body


def write(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(text, encoding="utf-8")
    return path


@dataclass
class Loaded:
    dataset: Dataset
    snapshot: object
    params: engine.EngineParams
    mode: engine.Mode


def load_inputs(cfg: RunConfig) -> Loaded:
    cfg.check(required=("matches", "snapshot"))
    innings = tuple(r for p in cfg.innings for r in load_innings(p))
    ds = load_matches(cfg.matches)
    ds = Dataset.from_matches(ds.matches, innings)
    snap = load_initial_snapshot(cfg.snapshot)
    unknown = sorted(ds.teams - set(snap.ratings))
    if unknown:
        raise SchemaError(f"snapshot lacks team(s) {', '.join(unknown)}")
    mov = load_mov_constants(cfg.mov_constants) if cfg.mov_constants else None
    moments = ImpactMoments.from_pairs(engine.snapshot_impact_pairs(snap))
    if cfg.omega == "estimate":
        pairs = [engine.match_inputs(snap, m)[t] for m in ds.matches for t in (m.team_a, m.team_b)]
        copula = fgm_omega_from_rho(spearman_rho([h for h, _ in pairs], [t for _, t in pairs]))
    else:
        copula = CopulaParams(float(cfg.omega))
    params = engine.EngineParams(copula=copula, scale=Scale(cfg.scale), mov=mov, moments=moments, step=cfg.step,
                                 expected=cfg.expected)
    return Loaded(ds, snap, params, engine.Mode(cfg.mode))


# ---------------------------------------------------------------- commands


def cmd_rate(cfg: RunConfig) -> int:
    inp = load_inputs(cfg)
    prov = provenance(cfg, "rate")
    out = Path(cfg.out)
    runs = {m: engine.run_season(inp.snapshot, inp.dataset, m, inp.params) for m in engine.Mode}
    traj = runs[inp.mode]
    write(out, f"trajectory_{inp.mode.value}.csv", with_header(engine.trajectory_csv(traj), prov))
    write(out, f"ranking_{inp.mode.value}.csv", with_header(engine.ranking_csv(traj.final), prov))
    rows = engine.trend_rows(inp.snapshot, runs[engine.Mode.IMPROVISED], runs[engine.Mode.FINAL])
    write(out, "trend.csv", with_header(engine.trend_csv(rows), prov))
    correct, total = engine.prediction_accuracy(traj)
    print(f"{inp.mode.value} ranking: {' > '.join(traj.ranking)}")
    print(f"winners predicted: {correct}/{total}")
    return 0


def season_evaluator(inp: Loaded):
    def evaluate(d: float) -> list[calibration.PredictionRecord]:
        params = dataclasses.replace(inp.params, scale=Scale(d))
        traj = engine.run_season(inp.snapshot, inp.dataset, engine.Mode.IMPROVISED, params)
        return [calibration.PredictionRecord(r.a.e, r.a.s) for r in traj.reports]
    return evaluate


def cmd_calibrate(cfg: RunConfig) -> int:
    cfg.check()
    if cfg.synthetic:
        data = calibration.simulate_matches(cfg.synthetic, cfg.scale, np.random.default_rng(cfg.seed))
        evaluator = calibration.basic_evaluator(data)
    else:
        evaluator = season_evaluator(load_inputs(cfg))
    best, table = calibration.grid_search_scale(cfg.candidates, evaluator, cfg.criterion)
    write(Path(cfg.out), "calibration.csv", with_header(table.to_csv(), provenance(cfg, "calibrate")))
    for crit in calibration.CRITERIA:
        print(f"best d by {crit}: {table.best(crit):g}")
    return 0


def bootstrap_report(cfg: RunConfig, inp: Loaded) -> robustness.BootstrapReport:
    return robustness.bootstrap_permutations(inp.snapshot, inp.dataset, inp.mode, inp.params,
                                             n=cfg.replicates, seed=cfg.seed)


def cmd_bootstrap(cfg: RunConfig) -> int:
    inp = load_inputs(cfg)
    rep = bootstrap_report(cfg, inp)
    write(Path(cfg.out), "bootstrap.csv", with_header(rep.to_csv(), provenance(cfg, "bootstrap")))
    s = robustness.stability_summary(rep)
    print(f"mean CV {s.mean_cv_pct:.3f}%, max MAD {s.max_mad:.3f}, point ratings inside CI: {s.all_inside}")
    return 0


def cmd_draws(cfg: RunConfig) -> int:
    inp = load_inputs(cfg)
    prov = provenance(cfg, "draws")
    traj = engine.run_season(inp.snapshot, inp.dataset, inp.mode, inp.params)
    scores = [(r.match_id, draw_predictor.draw_score(r.a.e, r.b.e, cfg.alpha)) for r in traj.reports]
    flagged = draw_predictor.predict_draws(scores, cfg.quantile)
    drawn = {r.match_id for r in traj.reports if r.match.winner is None}
    lines = ["match_id,draw_score,flagged,drawn"]
    lines += [f"{mid},{s:.6f},{int(mid in flagged)},{int(mid in drawn)}" for mid, s in scores]
    write(Path(cfg.out), "draws.csv", with_header("\n".join(lines) + "\n", prov))

    items = [(r.match_id, r.a.e, r.b.e, r.match.winner is None) for r in traj.reports]
    matrix = draw_predictor.alpha_q_tradeoff(items)
    shares = draw_predictor.DEFAULT_TOP_SHARES
    rows = ["alpha," + ",".join(f"top{round(100 * s)}" for s in shares)]
    rows += [f"{a:.2f}," + ",".join(str(v) for v in row) for a, row in zip(draw_predictor.DEFAULT_ALPHAS, matrix)]
    write(Path(cfg.out), "draw_tradeoff.csv", with_header("\n".join(rows) + "\n", prov))
    print(f"flagged {len(flagged)} matches, {len(flagged & drawn)} of {len(drawn)} draws among them")
    for mid in sorted(flagged):
        print(mid)
    return 0


def cmd_report(cfg: RunConfig) -> int:
    inp = load_inputs(cfg)
    traj = engine.run_season(inp.snapshot, inp.dataset, inp.mode, inp.params)
    correct, total = engine.prediction_accuracy(traj)
    rep = bootstrap_report(cfg, inp)
    s = robustness.stability_summary(rep)
    doc = {
        "provenance": provenance(cfg, "report"),
        "mode": inp.mode.value,
        "ranking": [{"rank": i, "team": t, "rating": traj.final.ratings[t].rating, "rd": traj.final.ratings[t].rd}
                    for i, t in enumerate(traj.ranking, start=1)],
        "accuracy": {"correct": correct, "decisive": total, "rate": correct / total if total else None},
        "reference_ranking": list(cfg.reference_ranking),
        "spearman_vs_reference": engine.compare_rankings(traj.ranking, cfg.reference_ranking),
        "bootstrap": {
            "replicates": rep.replicates,
            "seed": rep.seed,
            "mean_cv_pct": s.mean_cv_pct,
            "max_mad": s.max_mad,
            "inside_ci": s.inside_ci,
            "teams": [dataclasses.asdict(t) | {"cv_pct": t.cv_pct} for t in rep.teams],
        },
    }
    path = write(Path(cfg.out), "report.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"spearman vs reference {doc['spearman_vs_reference']:.4f}; report at {path}")
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    cfg.check(required=("matches",))
    innings = tuple(r for p in cfg.innings for r in load_innings(p))
    ds = load_matches(cfg.matches)
    ds = Dataset.from_matches(ds.matches, innings)
    report = validate_dataset(ds)
    if cfg.snapshot:
        snap = load_initial_snapshot(cfg.snapshot)
        report.errors += [f"team {t} missing from snapshot" for t in sorted(ds.teams - set(snap.ratings))]
    fourth = [r for r in innings if r.innings_index == 4]
    if len(fourth) >= 20:
        print(f"E4R from supplied innings: {compute_e4r(fourth):.3f}")
    for w in report.warnings:
        log.info("warning: %s", w)
    if report.warnings:
        print(f"{len(report.warnings)} warning(s); rerun with -v to list them")
    for e in report.errors:
        print(f"error: {e}", file=sys.stderr)
    print(f"{len(ds)} matches, {len(ds.teams)} teams, {len(innings)} innings: {'ok' if report.ok else 'INVALID'}")
    return 0 if report.ok else 1


COMMANDS = {
    "rate": cmd_rate, "calibrate": cmd_calibrate, "bootstrap": cmd_bootstrap,
    "draws": cmd_draws, "report": cmd_report, "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any RunConfig field")
    common.add_argument("--matches")
    common.add_argument("--innings", action="append", help="innings CSV; repeatable")
    common.add_argument("--snapshot")
    common.add_argument("--mov-constants", dest="mov_constants")
    common.add_argument("--mode", choices=[m.value for m in engine.Mode])
    common.add_argument("--scale", type=float)
    common.add_argument("--omega", help="FGM parameter in [-1, 1] or 'estimate'")
    common.add_argument("--step", choices=["root", "variance"])
    common.add_argument("--expected", choices=["copula", "basic"])
    common.add_argument("--replicates", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--quantile", type=float)
    common.add_argument("--out")
    common.add_argument("--candidates", type=lambda s: [float(x) for x in s.split(",") if x.strip()],
                        help="comma-separated scales")
    common.add_argument("--criterion", type=str.upper, choices=calibration.CRITERIA)
    common.add_argument("--synthetic", type=int, help="calibrate on N simulated matches at --scale instead")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="cricket-glicko", description="Test-cricket ratings with home, toss and margin effects")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__name__.removeprefix("cmd_"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        if cfg.omega not in (None, "estimate"):
            try:
                cfg.omega = float(cfg.omega)
            except (TypeError, ValueError):
                raise ConfigError(f"omega: must be 'estimate' or a number, got {cfg.omega!r}") from None
        cfg.check()
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, calibration.GridSearchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
