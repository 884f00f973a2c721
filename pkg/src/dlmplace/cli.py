"""Command-line entry point: generate, place, experiment, summarize, verify."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

from .baselines import BRUTE_FORCE_BUDGET, brute_force_optimal, greedy_placement, random_placement
from .dlm import RECENTER_MODES, DlmConfig, run_dlm
from .graph import GraphError, placement_cost
from .harness import (
    ALGORITHMS,
    PAPER_SIZES,
    TOPOLOGIES,
    DlmOptions,
    ExperimentConfig,
    read_rows,
    run_experiment,
    summarize,
    write_summary,
)
from .topology import DemandSpec, gen_demand, gen_grid, gen_small_world, grid_shape, load_graph, save_graph
from .verify import verify_graph
from .voronoi import TIE_MODES, voronoi_partition

log = logging.getLogger("dlmplace")


def _demand_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--demand-dist", choices=("pareto", "uniform", "constant"), default=None)
    p.add_argument("--demand-shape", type=float, default=None)
    p.add_argument("--demand-scale", type=float, default=None)


def _demand_spec(args, base: DemandSpec, seed: int | None = None) -> DemandSpec:
    changes = {
        name: value
        for name, value in (
            ("distribution", args.demand_dist),
            ("shape", args.demand_shape),
            ("scale", args.demand_scale),
            ("seed", seed),
        )
        if value is not None
    }
    return dataclasses.replace(base, **changes)


def cmd_generate(args) -> int:
    if args.topology == "grid":
        rows, cols = (args.rows, args.cols) if args.rows else grid_shape(args.n)
        graph = gen_grid(rows, cols)
    else:
        graph = gen_small_world(args.n, args.degree, args.rewire_prob, args.seed)
    spec = _demand_spec(args, DemandSpec(), seed=args.seed if args.demand_seed is None else args.demand_seed)
    graph = graph.with_demand(gen_demand(graph.node_count, spec))
    save_graph(graph, args.edges, args.demand)
    print(f"wrote {graph.node_count} nodes, {graph.edge_count} edges to {args.edges}")
    return 0


def cmd_place(args) -> int:
    graph = load_graph(args.edges, args.demand)
    iterations = None
    if args.algorithm == "dlm":
        trace = run_dlm(
            graph,
            DlmConfig(args.k, args.eta, args.max_iter, args.seed, args.tie_mode, args.init_pool, args.recenter),
        )
        sites, cost, iterations = trace.final_placement, trace.final_cost, len(trace.iterations)
    elif args.algorithm == "greedy":
        sites, costs = greedy_placement(graph, args.k)
        cost = costs[-1]
    elif args.algorithm == "brute":
        sites, cost = brute_force_optimal(graph, args.k, args.brute_budget)
    else:
        sites = random_placement(graph, args.k, args.seed)
        cost = placement_cost(graph, sites)
    part = voronoi_partition(graph, sites)
    out = {
        "sites": list(sites.sites),
        "cost": cost,
        "iterations": iterations,
        "per_region_sizes": part.region_sizes(),
    }
    text = json.dumps(out, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _experiment_config(args) -> ExperimentConfig:
    config = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    changes = {}
    for name in ("topologies", "sizes", "k_ratios", "algorithms", "output_path", "edge_file",
                 "demand_file", "small_world_degree", "rewire_prob", "workers", "brute_budget"):
        value = getattr(args, name)
        if value is not None:
            changes[name] = value
    if args.instances is not None:
        changes["instances_per_cell"] = args.instances
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.full:
        changes["sizes"] = list(PAPER_SIZES)
    if args.no_runtime:
        changes["record_runtime"] = False
    changes["demand"] = _demand_spec(args, config.demand)
    dlm = {
        name: value
        for name, value in (("eta", args.eta), ("max_iter", args.max_iter), ("tie_mode", args.tie_mode),
                            ("init_pool", args.init_pool), ("recenter", args.recenter))
        if value is not None
    }
    changes["dlm"] = dataclasses.replace(config.dlm, **dlm)
    return dataclasses.replace(config, **changes)


def _print_summary(summary) -> None:
    print(f"{'topology':<12}{'n':>6}{'k':>5}  {'algorithm':<8}{'mean':>8}{'median':>8}{'max':>8}{'min':>8}")
    for s in summary:
        if s.mean is None:
            print(f"{s.topology:<12}{s.n:>6}{s.k:>5}  {s.algorithm:<8}  {s.warning}")
            continue
        print(f"{s.topology:<12}{s.n:>6}{s.k:>5}  {s.algorithm:<8}"
              f"{s.mean:>8.4f}{s.median:>8.4f}{s.max:>8.4f}{s.min:>8.4f}")


def cmd_experiment(args) -> int:
    config = _experiment_config(args)
    rows = run_experiment(config)
    failed = sum(1 for r in rows if r.error)
    if failed:
        log.warning("%d of %d rows recorded errors", failed, len(rows))
    if not args.quiet:
        _print_summary(summarize(rows, args.baseline))
    return 0


def cmd_summarize(args) -> int:
    summary = summarize(read_rows(args.input), args.baseline)
    if args.output:
        write_summary(summary, args.output)
    else:
        _print_summary(summary)
    return 0


def cmd_verify(args) -> int:
    graph = load_graph(args.edges, args.demand)
    checks = verify_graph(graph, args.k, args.seed)
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlmplace", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic topology and demand file")
    p.add_argument("topology", choices=("grid", "small-world"))
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--rewire-prob", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--demand-seed", type=int)
    _demand_args(p)
    p.add_argument("--edges", required=True, help="edge list output path")
    p.add_argument("--demand", required=True, help="demand file output path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("place", help="place k sites on one graph and print placement JSON")
    p.add_argument("--edges", required=True)
    p.add_argument("--demand")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="dlm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tie-mode", choices=TIE_MODES, default="lowest-id")
    p.add_argument("--init-pool", type=int, default=3)
    p.add_argument("--recenter", choices=RECENTER_MODES, default="anchored")
    p.add_argument("--brute-budget", type=int, default=BRUTE_FORCE_BUDGET)
    p.add_argument("--output")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("experiment", help="run a DLM vs baseline sweep and write a results CSV")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--topologies", nargs="+", choices=TOPOLOGIES)
    p.add_argument("--sizes", nargs="+", type=int)
    p.add_argument("--k-ratios", nargs="+", type=float)
    p.add_argument("--instances", type=int)
    p.add_argument("--algorithms", nargs="*", choices=ALGORITHMS)
    p.add_argument("--seed", type=int, help="overrides master_seed")
    p.add_argument("--output", dest="output_path")
    p.add_argument("--edge-file")
    p.add_argument("--demand-file")
    p.add_argument("--small-world-degree", type=int)
    p.add_argument("--rewire-prob", type=float)
    p.add_argument("--brute-budget", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--full", action="store_true", help="paper sizes up to n=4000")
    p.add_argument("--no-runtime", action="store_true", help="write runtime_ms as 0 for byte-identical reruns")
    p.add_argument("--eta", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--tie-mode", choices=TIE_MODES)
    p.add_argument("--init-pool", type=int)
    p.add_argument("--recenter", choices=RECENTER_MODES)
    p.add_argument("--baseline", default="greedy")
    p.add_argument("--quiet", action="store_true")
    _demand_args(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("summarize", help="cost-ratio statistics from a results CSV")
    p.add_argument("input")
    p.add_argument("--baseline", default="greedy")
    p.add_argument("--output")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("verify", help="run the invariant checks on a graph file")
    p.add_argument("--edges", required=True)
    p.add_argument("--demand")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
