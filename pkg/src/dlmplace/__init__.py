"""Distributed Lloyd's method for k-median data-center placement on graphs."""

from .baselines import InstanceTooLargeError, brute_force_optimal, greedy_placement, random_placement
from .dlm import DlmConfig, DlmTrace, dlm_step, initialize_placement, run_dlm
from .graph import (
    DisconnectedError,
    Graph,
    GraphError,
    Placement,
    UnreachableDemandError,
    cost_center_exact,
    placement_cost,
    shortest_distances,
)
from .harness import ExperimentConfig, ResultRow, run_experiment, summarize
from .mpcost import CostTable, downward_pass, simulate_message_passing, tree_cost_center, upward_pass
from .netsim import first_arrival_broadcast, run_protocol
from .region_tree import RootedRegionTree, region_mst, root_tree
from .topology import DemandSpec, gen_demand, gen_grid, gen_small_world, load_graph, save_graph
from .voronoi import Partition, is_centroidal, voronoi_partition

__version__ = "0.1.0"

__all__ = [
    "CostTable",
    "DemandSpec",
    "DisconnectedError",
    "DlmConfig",
    "DlmTrace",
    "ExperimentConfig",
    "Graph",
    "GraphError",
    "InstanceTooLargeError",
    "Partition",
    "Placement",
    "ResultRow",
    "RootedRegionTree",
    "UnreachableDemandError",
    "brute_force_optimal",
    "cost_center_exact",
    "dlm_step",
    "downward_pass",
    "first_arrival_broadcast",
    "gen_demand",
    "gen_grid",
    "gen_small_world",
    "greedy_placement",
    "initialize_placement",
    "is_centroidal",
    "load_graph",
    "placement_cost",
    "random_placement",
    "region_mst",
    "root_tree",
    "run_dlm",
    "run_experiment",
    "run_protocol",
    "save_graph",
    "shortest_distances",
    "simulate_message_passing",
    "summarize",
    "tree_cost_center",
    "upward_pass",
    "voronoi_partition",
]
