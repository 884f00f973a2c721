"""Invariant checks that can be run against any graph (the ``verify`` command)."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .baselines import greedy_placement, random_placement
from .dlm import DlmConfig, run_dlm
from .graph import Graph, placement_cost
from .mpcost import simulate_message_passing, tree_cost_center
from .netsim import first_arrival_broadcast
from .region_tree import region_mst, root_tree
from .voronoi import voronoi_partition


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _graph_structure(graph: Graph, k, seed):
    for u, row in enumerate(graph.adjacency):
        for v, d in row:
            if graph.distance(v, u) != d or d <= 0:
                return False, f"edge ({u}, {v}) is asymmetric or non-positive"
    if not graph.is_connected:
        return False, "graph is disconnected"
    return True, f"n={graph.node_count} edges={graph.edge_count}"


def _broadcast(graph: Graph, k, seed):
    sources = random_placement(graph, k, seed).sites
    records, stats = first_arrival_broadcast(graph, sources)
    got = np.array([r.nearest_dist for r in records])
    want = graph.distance_rows(sources).min(axis=0)
    if not np.allclose(got, want, rtol=1e-9, atol=0):
        return False, "first-arrival distances differ from Dijkstra"
    bound = 2 * len(sources) * graph.edge_count
    if stats.messages_sent > bound:
        return False, f"{stats.messages_sent} messages exceeds 2k|E|={bound}"
    return True, f"{stats.messages_sent} messages"


def _partition(graph: Graph, k, seed):
    sites = random_placement(graph, k, seed)
    part = voronoi_partition(graph, sites)
    for i, s in enumerate(sites):
        if part.region_of[s] != i:
            return False, f"generator {s} outside its region"
    for v, p in enumerate(part.region_parent):
        if p is None:
            continue
        if not graph.has_edge(v, p) or part.nearest_dist[p] >= part.nearest_dist[v]:
            return False, f"bad region parent for node {v}"
        if part.region_of[p] != part.region_of[v]:
            return False, f"node {v} inherits a different region"
    # with zero self-costs the partition distances are the serving distances
    if not np.any(graph.self_cost):
        direct = float(np.dot(part.nearest_dist, graph.demand))
        if not np.isclose(direct, placement_cost(graph, sites), rtol=1e-9):
            return False, "partition cost differs from placement cost"
    return True, f"sizes {part.region_sizes()}"


def _message_passing(graph: Graph, k, seed):
    nodes = range(graph.node_count)
    tree = root_tree(region_mst(graph, nodes), nodes, 0, graph)
    center, table = tree_cost_center(tree)
    sim, up, down = simulate_message_passing(graph, tree)
    expected = 2 * (tree.size - 1)
    if up.messages_sent != expected or down.messages_sent != expected:
        return False, f"message counts {up.messages_sent}/{down.messages_sent}, expected {expected}"
    for v, c in table.cost_at.items():
        if not np.isclose(sim.cost_at[v], c, rtol=1e-9):
            return False, f"simulated cost differs at node {v}"
    return True, f"MST cost center {center}"


def _dlm(graph: Graph, k, seed):
    trace = run_dlm(graph, DlmConfig(k, seed=seed, max_iter=50))
    for it in trace.iterations:
        if len(set(it.placement.sites)) != k:
            return False, "placement lost a site"
    final = placement_cost(graph, trace.final_placement)
    if not np.isclose(final, trace.final_cost, rtol=1e-12):
        return False, "trace cost disagrees with placement cost"
    _, greedy = greedy_placement(graph, k)
    if any(b > a for a, b in zip(greedy, greedy[1:])):
        return False, "greedy costs increased"
    return True, f"{len(trace.iterations)} iterations, DLM/greedy = {final / greedy[-1]:.4f}"


CHECKS: list[tuple[str, Callable]] = [
    ("graph structure", _graph_structure),
    ("first-arrival broadcast matches shortest paths", _broadcast),
    ("voronoi partition invariants", _partition),
    ("message-passing counts and costs", _message_passing),
    ("dlm trace validity", _dlm),
]


def verify_graph(graph: Graph, k: int = 2, seed: int = 0) -> list[Check]:
    """Run every check; later checks are skipped once the graph itself fails."""
    out = []
    for name, fn in CHECKS:
        if out and not out[0].passed:
            out.append(Check(name, False, "skipped"))
            continue
        try:
            ok, detail = fn(graph, k, seed)
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, ok, detail))
    return out
