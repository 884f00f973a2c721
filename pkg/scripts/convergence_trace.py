"""Print a DLM run iteration by iteration next to the greedy cost.

    python scripts/convergence_trace.py --topology grid --n 900 --k 9
"""

import argparse

from dlmplace import DemandSpec, DlmConfig, gen_demand, gen_grid, gen_small_world, greedy_placement, run_dlm
from dlmplace.topology import grid_shape


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--topology", choices=("grid", "small-world"), default="grid")
    ap.add_argument("--n", type=int, default=900)
    ap.add_argument("--k", type=int, default=9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--recenter", choices=("mst", "anchored"), default="anchored")
    ap.add_argument("--max-iter", type=int, default=100)
    args = ap.parse_args()

    if args.topology == "grid":
        g = gen_grid(*grid_shape(args.n))
    else:
        g = gen_small_world(args.n, 4, 0.1, seed=args.seed)
    g = g.with_demand(gen_demand(g.node_count, DemandSpec(seed=args.seed)))

    greedy = greedy_placement(g, args.k)[1][-1]
    trace = run_dlm(g, DlmConfig(args.k, max_iter=args.max_iter, seed=args.seed, recenter=args.recenter))
    print(f"greedy cost {greedy:.2f}")
    print(f"{'iter':>4}{'cost':>14}{'ratio':>8}{'shift':>7}{'messages':>10}  region sizes")
    for t, it in enumerate(trace.iterations, 1):
        sizes = it.partition.region_sizes()
        print(f"{t:>4}{it.cost:>14.2f}{it.cost / greedy:>8.4f}{it.max_center_shift:>7g}{it.messages_sent:>10}  {sizes}")
    state = "converged" if trace.converged else "hit max_iter"
    print(f"{state}; best {trace.final_cost:.2f} ratio {trace.final_cost / greedy:.4f}")


if __name__ == "__main__":
    main()
