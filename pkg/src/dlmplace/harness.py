"""Experiment sweeps comparing DLM with centralized placements."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import statistics
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import brute_force_optimal, greedy_placement, random_placement
from .dlm import DlmConfig, run_dlm
from .graph import Graph, placement_cost
from .topology import DemandSpec, gen_demand, gen_grid, gen_small_world, grid_shape, load_graph

log = logging.getLogger(__name__)

__all__ = [
    "ALGORITHMS",
    "DEFAULT_SIZES",
    "PAPER_SIZES",
    "DlmOptions",
    "ExperimentConfig",
    "ResultRow",
    "SummaryRow",
    "derive_seed",
    "make_instance",
    "run_experiment",
    "summarize",
    "write_rows",
    "read_rows",
    "write_summary",
]

ALGORITHMS = ("dlm", "greedy", "brute", "random")
TOPOLOGIES = ("grid", "small-world", "file")
DEFAULT_SIZES = (400, 500, 600, 700, 800, 900, 1000)
PAPER_SIZES = DEFAULT_SIZES + (2000, 3000, 4000)
PAPER_K_RATIOS = (0.005, 0.010, 0.015)


@dataclass(frozen=True)
class DlmOptions:
    eta: float = 0.0
    max_iter: int = 100
    tie_mode: str = "lowest-id"
    init_pool: int = 3
    recenter: str = "anchored"


@dataclass
class ExperimentConfig:
    topologies: list[str] = field(default_factory=lambda: ["grid", "small-world"])
    sizes: list[int] = field(default_factory=lambda: list(DEFAULT_SIZES))
    k_ratios: list[float] = field(default_factory=lambda: list(PAPER_K_RATIOS))
    instances_per_cell: int = 5
    demand: DemandSpec = field(default_factory=DemandSpec)
    dlm: DlmOptions = field(default_factory=DlmOptions)
    algorithms: list[str] = field(default_factory=lambda: ["dlm", "greedy"])
    master_seed: int = 0
    output_path: str | None = None
    small_world_degree: int = 4
    rewire_prob: float = 0.1
    edge_file: str | None = None
    demand_file: str | None = None
    brute_budget: int = 10**7
    record_runtime: bool = True
    workers: int = 1

    def __post_init__(self):
        bad = [t for t in self.topologies if t not in TOPOLOGIES]
        if bad:
            raise ValueError(f"unknown topologies {bad}; choose from {TOPOLOGIES}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ValueError(f"unknown algorithms {bad}; choose from {ALGORITHMS}")
        if "file" in self.topologies and not self.edge_file:
            raise ValueError("topology 'file' needs edge_file")
        if self.instances_per_cell < 1:
            raise ValueError("instances_per_cell must be positive")
        if any(r <= 0 for r in self.k_ratios):
            raise ValueError("k ratios must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        data = dict(data)
        if isinstance(data.get("demand"), dict):
            data["demand"] = DemandSpec(**data["demand"])
        if isinstance(data.get("dlm"), dict):
            data["dlm"] = DlmOptions(**data["dlm"])
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class ResultRow:
    topology: str
    n: int
    k: int
    k_ratio: float
    instance: int
    instance_seed: int
    algorithm: str
    cost: float | None
    iterations: int | None = None
    runtime_ms: float = 0.0
    messages_sent: int | None = None
    error: str = ""


RESULT_FIELDS = [f.name for f in dataclasses.fields(ResultRow)]


def derive_seed(master_seed: int, *parts) -> int:
    """64-bit seed from the master seed and cell coordinates (SHA-256 based)."""
    text = "/".join(str(p) for p in (master_seed, *parts))
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def k_for(n: int, ratio: float) -> int:
    return max(1, round(ratio * n))


def make_instance(config: ExperimentConfig, topology: str, n: int, instance: int) -> tuple[Graph, int]:
    """Build the graph and demand for one instance; returns it with its seed."""
    seed = derive_seed(config.master_seed, topology, n, instance)
    if topology == "grid":
        graph = gen_grid(*grid_shape(n))
    elif topology == "small-world":
        graph = gen_small_world(n, config.small_world_degree, config.rewire_prob, derive_seed(seed, "graph"))
    else:
        graph = load_graph(config.edge_file, config.demand_file)
        if config.demand_file:
            return graph, seed
    spec = dataclasses.replace(config.demand, seed=derive_seed(seed, "demand"))
    return graph.with_demand(gen_demand(graph.node_count, spec)), seed


def _run_algorithm(config: ExperimentConfig, name: str, graph: Graph, k: int, seed: int) -> dict:
    if name == "dlm":
        opts = config.dlm
        trace = run_dlm(
            graph,
            DlmConfig(
                k, opts.eta, opts.max_iter, derive_seed(seed, "dlm", k),
                opts.tie_mode, opts.init_pool, opts.recenter,
            ),
        )
        return dict(
            cost=trace.final_cost,
            iterations=len(trace.iterations),
            messages_sent=trace.messages_sent,
        )
    if name == "greedy":
        _, costs = greedy_placement(graph, k)
        return dict(cost=costs[-1])
    if name == "brute":
        _, cost = brute_force_optimal(graph, k, config.brute_budget)
        return dict(cost=cost)
    sites = random_placement(graph, k, derive_seed(seed, "random", k))
    return dict(cost=placement_cost(graph, sites))


def _run_cell(args) -> list[ResultRow]:
    config, topology, n, instance = args
    rows = []
    try:
        graph, seed = make_instance(config, topology, n, instance)
        n = graph.node_count
    except Exception as exc:  # recorded, sweep continues
        log.warning("instance %s n=%s #%s failed: %s", topology, n, instance, exc)
        seed = derive_seed(config.master_seed, topology, n, instance)
        for ratio in config.k_ratios:
            for name in config.algorithms:
                rows.append(ResultRow(topology, n, k_for(n, ratio), ratio, instance, seed, name, None,
                                      error=f"{type(exc).__name__}: {exc}"))
        return rows
    for ratio in config.k_ratios:
        k = k_for(n, ratio)
        for name in config.algorithms:
            row = ResultRow(topology, n, k, ratio, instance, seed, name, None)
            start = time.perf_counter()
            try:
                for key, value in _run_algorithm(config, name, graph, k, seed).items():
                    setattr(row, key, value)
            except Exception as exc:  # recorded, sweep continues
                row.error = f"{type(exc).__name__}: {exc}"
            if config.record_runtime:
                row.runtime_ms = (time.perf_counter() - start) * 1e3
            rows.append(row)
    return rows


def _cells(config: ExperimentConfig):
    for topology in config.topologies:
        sizes = [0] if topology == "file" else config.sizes
        for n in sizes:
            for instance in range(config.instances_per_cell):
                yield config, topology, n, instance


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Run every (topology, size, instance, k ratio, algorithm) combination.

    Rows come back in canonical cell order regardless of ``workers``; they
    are also written to ``config.output_path`` when set.
    """
    tasks = list(_cells(config)) if config.algorithms else []
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    if config.output_path:
        write_rows(rows, config.output_path)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows: list[ResultRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_FIELDS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, f)) for f in RESULT_FIELDS])


def read_rows(path) -> list[ResultRow]:
    def opt(text, kind):
        return kind(text) if text != "" else None

    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ResultRow(
                    topology=rec["topology"],
                    n=int(rec["n"]),
                    k=int(rec["k"]),
                    k_ratio=float(rec["k_ratio"]),
                    instance=int(rec["instance"]),
                    instance_seed=int(rec["instance_seed"]),
                    algorithm=rec["algorithm"],
                    cost=opt(rec["cost"], float),
                    iterations=opt(rec["iterations"], int),
                    runtime_ms=float(rec["runtime_ms"] or 0.0),
                    messages_sent=opt(rec["messages_sent"], int),
                    error=rec["error"],
                )
            )
    return rows


@dataclass
class SummaryRow:
    topology: str
    n: int
    k: int
    algorithm: str
    baseline: str
    instances: int
    mean: float | None
    median: float | None
    max: float | None
    min: float | None
    warning: str = ""


SUMMARY_FIELDS = [f.name for f in dataclasses.fields(SummaryRow)]


def summarize(rows: list[ResultRow], baseline: str = "greedy") -> list[SummaryRow]:
    """Cost ratio ``cost(alg) / cost(baseline)`` statistics per (topology, n, k) cell.

    Ratios pair rows of the same instance. Cells without a usable baseline
    produce a row with ``warning`` set and no statistics.
    """
    cells: dict[tuple, dict[str, dict[int, float]]] = defaultdict(lambda: defaultdict(dict))
    for row in rows:
        if row.error or row.cost is None:
            continue
        cells[(row.topology, row.n, row.k)][row.algorithm][row.instance_seed] = row.cost
    out = []
    for key in sorted(cells):
        by_alg = cells[key]
        base = by_alg.get(baseline, {})
        for alg in sorted(a for a in by_alg if a != baseline):
            ratios = [
                _ratio(cost, base[s]) for s, cost in sorted(by_alg[alg].items()) if s in base
            ]
            if not ratios:
                log.warning("cell %s: no %s rows to compare %s against", key, baseline, alg)
                out.append(SummaryRow(*key, alg, baseline, 0, None, None, None, None,
                                      warning=f"missing baseline {baseline}"))
                continue
            out.append(
                SummaryRow(
                    *key,
                    alg,
                    baseline,
                    len(ratios),
                    statistics.fmean(ratios),
                    statistics.median(ratios),
                    max(ratios),
                    min(ratios),
                )
            )
    return out


def _ratio(cost: float, base: float) -> float:
    if base == 0:
        return 1.0 if cost == 0 else math.inf
    return cost / base


def write_summary(summary: list[SummaryRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_FIELDS)
        for row in summary:
            writer.writerow([_fmt(getattr(row, f)) for f in SUMMARY_FIELDS])
