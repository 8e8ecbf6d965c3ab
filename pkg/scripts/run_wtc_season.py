"""Rate the shipped WTC 2021-23 season under both modes and compare the orders.

    python3 scripts/run_wtc_season.py [--step root|variance] [--omega W] [--scale D]
"""

import argparse
from pathlib import Path

from cricket_glicko import engine
from cricket_glicko.cli import FIXTURES, REFERENCE_RANKING
from cricket_glicko.copula_scores import CopulaParams, ImpactMoments
from cricket_glicko.data_model import load_matches
from cricket_glicko.glicko_core import Scale
from cricket_glicko.mov import load_mov_constants
from cricket_glicko.snapshot import load_initial_snapshot


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", choices=["root", "variance"], default="root")
    ap.add_argument("--omega", type=float, default=-0.5436)
    ap.add_argument("--scale", type=float, default=85.0)
    ap.add_argument("--trend", type=Path, help="write per-match rating paths to this CSV")
    args = ap.parse_args()

    snap = load_initial_snapshot(FIXTURES / "wtc2021_23_initial_snapshot.json")
    matches = load_matches(FIXTURES / "wtc2021_23_matches.csv")
    params = engine.EngineParams(
        copula=CopulaParams(args.omega), scale=Scale(args.scale),
        mov=load_mov_constants(FIXTURES / "wtc2021_23_mov_constants.json"),
        moments=ImpactMoments.from_pairs(engine.snapshot_impact_pairs(snap)), step=args.step,
    )
    runs = {m: engine.run_season(snap, matches, m, params) for m in engine.Mode}
    imp, fin = runs[engine.Mode.IMPROVISED], runs[engine.Mode.FINAL]

    print(f"{'rank':>4}  {'improvised':>16}  {'final':>16}")
    for i, (a, b) in enumerate(zip(imp.ranking, fin.ranking), start=1):
        print(f"{i:>4}  {a:>5} {imp.final.ratings[a].rating:10.2f}  {b:>5} {fin.final.ratings[b].rating:10.2f}")
    for name, traj in (("improvised", imp), ("final", fin)):
        c, n = engine.prediction_accuracy(traj)
        rho = engine.compare_rankings(traj.ranking, REFERENCE_RANKING)
        print(f"{name}: {c}/{n} winners predicted, spearman vs ICC {rho:.4f}")
    print("orders identical" if imp.ranking == fin.ranking else "orders differ")

    if args.trend:
        args.trend.write_text(engine.trend_csv(engine.trend_rows(snap, imp, fin)))


if __name__ == "__main__":
    main()
