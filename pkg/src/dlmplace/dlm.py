"""Distributed Lloyd's method: alternate Voronoi partitioning and tree recentering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, Placement, placement_cost, shortest_distances
from .mpcost import tree_cost_center
from .region_tree import region_mst, root_tree, shortest_path_tree
from .voronoi import TIE_MODES, Partition, voronoi_partition

RECENTER_MODES = ("mst", "anchored")

__all__ = [
    "DlmConfig",
    "DlmIteration",
    "DlmTrace",
    "initialize_placement",
    "dlm_step",
    "run_dlm",
    "graph_cost_center",
    "recenter_region",
    "RECENTER_MODES",
]


@dataclass(frozen=True)
class DlmConfig:
    k: int
    eta: float = 0.0
    max_iter: int = 100
    seed: int = 0
    tie_mode: str = "lowest-id"
    # candidate pool for the initial guess, as a multiple of k
    init_pool: int = 3
    recenter: str = "mst"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.tie_mode not in TIE_MODES:
            raise ValueError(f"tie_mode must be one of {TIE_MODES}")
        if self.init_pool < 1:
            raise ValueError("init_pool must be at least 1")
        if self.recenter not in RECENTER_MODES:
            raise ValueError(f"recenter must be one of {RECENTER_MODES}")

    def check(self, graph: Graph) -> None:
        if self.k >= graph.node_count:
            raise GraphError(f"k={self.k} must be below n={graph.node_count}")


@dataclass(frozen=True)
class DlmIteration:
    placement: Placement
    partition: Partition
    cost: float
    max_center_shift: float
    messages_sent: int = 0


@dataclass
class DlmTrace:
    initial_placement: Placement
    iterations: list[DlmIteration] = field(default_factory=list)
    converged: bool = False
    final_placement: Placement | None = None
    final_cost: float = math.inf

    @property
    def costs(self) -> list[float]:
        return [it.cost for it in self.iterations]

    @property
    def messages_sent(self) -> int:
        return sum(it.messages_sent for it in self.iterations)


def graph_cost_center(graph: Graph) -> int:
    """Cost center of the whole graph measured on its minimum spanning tree."""
    everything = range(graph.node_count)
    tree = root_tree(region_mst(graph, everything), everything, 0, graph)
    center, _ = tree_cost_center(tree)
    return center


def initialize_placement(graph: Graph, config: DlmConfig) -> Placement:
    """MST cost center of the graph plus ``k-1`` seeded picks among its nearest nodes.

    The pool is the ``init_pool * k`` nodes closest to the center (ties by id).
    """
    config.check(graph)
    graph.require_connected()
    center = graph_cost_center(graph)
    if config.k == 1:
        return Placement((center,))
    dist = shortest_distances(graph, center).dist
    order = sorted((v for v in range(graph.node_count) if v != center), key=lambda v: (dist[v], v))
    pool = order[: config.init_pool * config.k]
    rng = np.random.default_rng(config.seed)
    picks = rng.choice(len(pool), size=config.k - 1, replace=False)
    return Placement((center, *(pool[i] for i in picks)))


def _tie_rng(config: DlmConfig, iteration: int) -> np.random.Generator | None:
    if config.tie_mode != "uniform":
        return None
    return np.random.default_rng([config.seed, iteration])


def dlm_step(
    graph: Graph, placement, config: DlmConfig, iteration: int = 1
) -> tuple[Placement, Partition, float]:
    """One round: partition by the current sites, then move each site to its region's tree center.

    Region ``i``'s new center replaces site ``i``. The returned cost is the
    full-graph serving cost of the new placement.
    """
    new, part, cost, _ = _step(graph, placement, config, iteration)
    return new, part, cost


def recenter_region(graph: Graph, region, site: int, mode: str = "mst") -> tuple[int, int]:
    """New center for one region; returns it with the number of tree sweeps run.

    ``mst``: both passes over the region's MST rooted at ``site``.

    ``anchored``: both passes over shortest-path trees anchored at the current
    center and at each of its in-region neighbors. Every spanning tree
    overestimates in-region distances, so the per-node minimum over these
    trees is an upper bound that is exact at the anchors. The center steps to
    the minimizer and repeats until it stays put. Since the bound is exact at
    the current center, the true region cost never increases along the way.
    """
    if mode == "mst":
        center, _ = tree_cost_center(root_tree(region_mst(graph, region), region, site, graph))
        return center, 1
    members = set(region)
    current, sweeps = site, 0
    for _ in range(len(members)):
        anchors = [current] + [u for u, _ in graph.neighbors(current) if u in members]
        bound: dict[int, float] = {}
        for a in anchors:
            _, table = tree_cost_center(root_tree(shortest_path_tree(graph, members, a), region, a, graph))
            sweeps += 1
            for v, c in table.cost_at.items():
                if c < bound.get(v, math.inf):
                    bound[v] = c
        best = min(bound, key=lambda v: (bound[v], v))
        if best == current:
            break
        current = best
    return current, sweeps


def _step(graph, placement, config, iteration):
    sites = Placement.coerce(placement, graph)
    part = voronoi_partition(graph, sites, config.tie_mode, rng=_tie_rng(config, iteration))
    centers = []
    messages = part.stats.messages_sent if part.stats else 0
    for region, site in zip(part.regions(), sites):
        center, sweeps = recenter_region(graph, region, site, config.recenter)
        centers.append(center)
        # each sweep: f and g up every tree edge, then f and h down
        messages += 4 * (len(region) - 1) * sweeps
    new = Placement(tuple(centers))
    return new, part, placement_cost(graph, new), messages


def _center_shift(graph: Graph, old: Placement, new: Placement) -> float:
    moved = [(a, b) for a, b in zip(old, new) if a != b]
    if not moved:
        return 0.0
    rows = graph.distance_rows([a for a, _ in moved])
    return float(max(rows[i, b] for i, (_, b) in enumerate(moved)))


def run_dlm(graph: Graph, config: DlmConfig, initial=None) -> DlmTrace:
    """Iterate until no site moves farther than ``eta`` or ``max_iter`` rounds ran.

    ``final_placement`` is the cheapest placement seen, which is the last one
    whenever the cost sequence is non-increasing.
    """
    config.check(graph)
    graph.require_connected()
    current = (
        initialize_placement(graph, config)
        if initial is None
        else Placement.coerce(initial, graph)
    )
    if len(current) != config.k:
        raise GraphError(f"initial placement has {len(current)} sites, expected k={config.k}")
    trace = DlmTrace(initial_placement=current)
    best = None
    for t in range(1, config.max_iter + 1):
        new, part, cost, messages = _step(graph, current, config, t)
        shift = _center_shift(graph, current, new)
        trace.iterations.append(DlmIteration(new, part, cost, shift, messages))
        if best is None or cost <= best[1]:
            best = (new, cost)
        current = new
        if shift <= config.eta:
            trace.converged = True
            break
    trace.final_placement, trace.final_cost = best
    return trace
