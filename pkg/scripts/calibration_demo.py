"""Scale calibration: recovery on simulated matches, then the loss table on the season.

    python3 scripts/calibration_demo.py [--true-scale 85] [--n 2000] [--seeds 20]
"""

import argparse
from collections import Counter

import numpy as np

from cricket_glicko import calibration, cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--true-scale", type=float, default=85.0)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    picks = Counter()
    for seed in range(args.seeds):
        data = calibration.simulate_matches(args.n, args.true_scale, np.random.default_rng(seed))
        best, _ = calibration.grid_search_scale(calibration.DEFAULT_CANDIDATES, calibration.basic_evaluator(data))
        picks[best] += 1
    print(f"simulated recovery at d={args.true_scale:g}: " + ", ".join(f"{d:g} x{k}" for d, k in sorted(picks.items())))

    for expected in ("basic", "copula"):
        cfg = cli.RunConfig(matches=str(cli.FIXTURES / "wtc2021_23_matches.csv"),
                            snapshot=str(cli.FIXTURES / "wtc2021_23_initial_snapshot.json"),
                            mov_constants=str(cli.FIXTURES / "wtc2021_23_mov_constants.json"), expected=expected)
        best, table = calibration.grid_search_scale(calibration.DEFAULT_CANDIDATES,
                                                    cli.season_evaluator(cli.load_inputs(cfg)))
        print(f"\nseason, {expected} expected score (best by Brier: {best:g})")
        print(table.to_csv(), end="")


if __name__ == "__main__":
    main()
