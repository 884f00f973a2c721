"""DLM vs greedy cost ratios on grid and small-world graphs.

Default sizes are n = 400..1000; ``--full`` adds 2000, 3000 and 4000.
Writes the raw rows and the summary next to each other and prints the
per-cell statistics with the thresholds used by the acceptance suite.

    python scripts/paper_sweep.py --out results/sweep
"""

import argparse
import time
from pathlib import Path

from dlmplace.harness import PAPER_SIZES, DlmOptions, ExperimentConfig, run_experiment, summarize, write_summary

LIMITS = {"grid": 1.05, "small-world": 1.15}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/sweep", help="output prefix")
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--recenter", choices=("mst", "anchored"), default="anchored")
    args = ap.parse_args()

    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    config = ExperimentConfig(
        master_seed=args.seed,
        workers=args.workers,
        output_path=f"{prefix}.csv",
        dlm=DlmOptions(recenter=args.recenter),
    )
    if args.full:
        config.sizes = list(PAPER_SIZES)

    start = time.perf_counter()
    rows = run_experiment(config)
    summary = summarize(rows)
    write_summary(summary, f"{prefix}_summary.csv")

    print(f"{'topology':<12}{'n':>6}{'k':>4}{'mean':>9}{'median':>9}{'max':>9}{'min':>9}")
    over = 0
    for s in summary:
        flag = "" if s.mean <= LIMITS[s.topology] else "  over"
        over += bool(flag)
        print(f"{s.topology:<12}{s.n:>6}{s.k:>4}{s.mean:>9.4f}{s.median:>9.4f}{s.max:>9.4f}{s.min:>9.4f}{flag}")
    print(f"{len(summary)} cells, {over} above threshold, {time.perf_counter() - start:.0f}s")


if __name__ == "__main__":
    main()
