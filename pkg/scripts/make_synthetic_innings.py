"""Write the seeded synthetic all-out innings fixture.

The rows are simulated, not observed: every innings is an all-out total drawn
from a negative binomial whose mean sits near a typical Test innings. They
exist so that the NB fit and the E4R pipeline can run end to end without a
scorecard corpus.
"""

import argparse
import datetime as dt
from pathlib import Path

import numpy as np

from cricket_glicko.data_model import ClosedBy, InningsRecord, save_innings

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "cricket_glicko" / "fixtures"

# (innings index, size, mean) for the simulated totals
PROFILES = ((1, 6.0, 330.0), (2, 6.0, 310.0), (3, 5.0, 260.0), (4, 4.0, 215.0))


def synthetic_innings(per_index: int, seed: int) -> list[InningsRecord]:
    rng = np.random.default_rng(seed)
    start = dt.date(2000, 1, 1)
    rows = []
    for idx, size, mean in PROFILES:
        runs = rng.negative_binomial(size, size / (size + mean), per_index)
        for i, r in enumerate(np.minimum(runs, 952)):
            rows.append(InningsRecord(start + dt.timedelta(days=i), "SYN", idx, int(r), 10, ClosedBy.ALL_OUT))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-index", type=int, default=60)
    ap.add_argument("--seed", type=int, default=20210804)
    ap.add_argument("--out", type=Path, default=FIXTURES / "innings_synthetic_allout.csv")
    args = ap.parse_args()
    save_innings(synthetic_innings(args.per_index, args.seed), args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
