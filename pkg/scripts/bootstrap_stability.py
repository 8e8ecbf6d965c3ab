"""Order sensitivity of the final WTC 2021-23 ratings under shuffled match orders.

    python3 scripts/bootstrap_stability.py [--replicates 100] [--seed 2023] [--csv out.csv]
"""

import argparse
import time
from pathlib import Path

from cricket_glicko import cli, robustness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicates", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2023)
    ap.add_argument("--mode", choices=["final", "improvised"], default="final")
    ap.add_argument("--with-replacement", action="store_true", help="resample matches instead of permuting them")
    ap.add_argument("--csv", type=Path)
    args = ap.parse_args()

    cfg = cli.RunConfig(matches=str(cli.FIXTURES / "wtc2021_23_matches.csv"),
                        snapshot=str(cli.FIXTURES / "wtc2021_23_initial_snapshot.json"),
                        mov_constants=str(cli.FIXTURES / "wtc2021_23_mov_constants.json"), mode=args.mode)
    inp = cli.load_inputs(cfg)
    t0 = time.perf_counter()
    rep = robustness.bootstrap_permutations(inp.snapshot, inp.dataset, inp.mode, inp.params, n=args.replicates,
                                            seed=args.seed, with_replacement=args.with_replacement)
    elapsed = time.perf_counter() - t0

    print(f"{'team':<5}{'point':>9}{'mean':>9}{'sd':>7}{'cv%':>7}   95% interval")
    for t in sorted(rep.teams, key=lambda t: -t.point_rating):
        print(f"{t.team:<5}{t.point_rating:9.2f}{t.boot_mean:9.2f}{t.sd:7.3f}{t.cv_pct:7.3f}"
              f"   [{t.ci_low:.2f}, {t.ci_high:.2f}]{'' if t.point_inside_ci else '  outside'}")
    s = robustness.stability_summary(rep)
    print(f"mean CV {s.mean_cv_pct:.3f}%, max MAD {s.max_mad:.3f}, {args.replicates} replicates in {elapsed:.1f}s")
    if args.csv:
        args.csv.write_text(rep.to_csv())


if __name__ == "__main__":
    main()
