"""Compare the two recentering rules against exact per-region centers.

``mst`` runs both tree passes once on the region's minimum spanning tree.
``anchored`` uses shortest-path trees from the current center and its
neighbors. ``exact`` moves every site to its region's true cost center
(centralized, for reference only). Reports mean cost ratio to greedy.

    python scripts/recenter_comparison.py --sizes 400 600 --instances 3
"""

import argparse
import statistics

from dlmplace import Placement, greedy_placement, placement_cost, voronoi_partition
from dlmplace.dlm import DlmConfig, initialize_placement, run_dlm
from dlmplace.graph import cost_center_exact
from dlmplace.harness import ExperimentConfig, derive_seed, k_for, make_instance


def exact_lloyd(graph, start, max_iter=100):
    current, best = start, placement_cost(graph, start)
    for _ in range(max_iter):
        part = voronoi_partition(graph, current)
        new = Placement(tuple(cost_center_exact(graph, r) for r in part.regions()))
        best = min(best, placement_cost(graph, new))
        if new == current:
            break
        current = new
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--topologies", nargs="+", default=["grid", "small-world"])
    ap.add_argument("--sizes", nargs="+", type=int, default=[400, 600])
    ap.add_argument("--ratios", nargs="+", type=float, default=[0.005, 0.01, 0.015])
    ap.add_argument("--instances", type=int, default=3)
    ap.add_argument("--exact", action="store_true", help="also run centralized exact-center Lloyd (slow)")
    args = ap.parse_args()

    config = ExperimentConfig()
    print(f"{'topology':<12}{'n':>6}{'k':>4}{'mst':>9}{'anchored':>10}" + (f"{'exact':>9}" if args.exact else ""))
    for topo in args.topologies:
        for n in args.sizes:
            graphs = [make_instance(config, topo, n, i) for i in range(args.instances)]
            for ratio in args.ratios:
                k = k_for(n, ratio)
                cols = {"mst": [], "anchored": [], "exact": []}
                for g, seed in graphs:
                    greedy = greedy_placement(g, k)[1][-1]
                    cfg = DlmConfig(k, seed=derive_seed(seed, "dlm", k))
                    start = initialize_placement(g, cfg)
                    for mode in ("mst", "anchored"):
                        trace = run_dlm(g, DlmConfig(k, seed=cfg.seed, recenter=mode), initial=start)
                        cols[mode].append(trace.final_cost / greedy)
                    if args.exact:
                        cols["exact"].append(exact_lloyd(g, start) / greedy)
                line = f"{topo:<12}{n:>6}{k:>4}{statistics.fmean(cols['mst']):>9.4f}{statistics.fmean(cols['anchored']):>10.4f}"
                if args.exact:
                    line += f"{statistics.fmean(cols['exact']):>9.4f}"
                print(line, flush=True)


if __name__ == "__main__":
    main()
