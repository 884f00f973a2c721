"""Centralized placements to compare against: greedy, exhaustive, random."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .graph import Graph, GraphError, Placement

__all__ = [
    "InstanceTooLargeError",
    "service_matrix",
    "greedy_placement",
    "brute_force_optimal",
    "random_placement",
]

BRUTE_FORCE_BUDGET = 10**7


class InstanceTooLargeError(ValueError):
    pass


def _check_k(graph: Graph, k: int) -> None:
    if not 1 <= k < graph.node_count:
        raise GraphError(f"k must satisfy 1 <= k < n={graph.node_count}, got {k}")


def service_matrix(graph: Graph) -> np.ndarray:
    """``D[s, v]``: cost per unit demand of serving ``v`` from site ``s`` (self-cost on the diagonal)."""
    graph.require_connected()
    d = graph.distance_matrix.copy()
    np.fill_diagonal(d, graph.self_cost)
    return d


def greedy_placement(graph: Graph, k: int) -> tuple[Placement, list[float]]:
    """Add sites one at a time, each the cheapest addition to those already chosen.

    Returns the sites in selection order and the total cost after each pick.
    O(n^2) per round after the all-pairs distances.
    """
    _check_k(graph, k)
    d = service_matrix(graph)
    w = graph.demand
    served = np.full(graph.node_count, np.inf)
    chosen: list[int] = []
    costs: list[float] = []
    for _ in range(k):
        totals = np.minimum(d, served) @ w
        totals[chosen] = np.inf
        pick = int(np.argmin(totals))
        chosen.append(pick)
        served = np.minimum(served, d[pick])
        costs.append(float(served @ w))
    return Placement(tuple(chosen)), costs


def brute_force_optimal(
    graph: Graph, k: int, budget: int = BRUTE_FORCE_BUDGET
) -> tuple[Placement, float]:
    """Exact optimum over every k-subset; the lexicographically first among ties."""
    _check_k(graph, k)
    n = graph.node_count
    if math.comb(n, k) > budget:
        raise InstanceTooLargeError(f"C({n}, {k}) = {math.comb(n, k)} subsets exceeds budget {budget}")
    d = service_matrix(graph)
    w = graph.demand
    best, best_cost = None, math.inf
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = np.array(list(itertools.islice(combos, 4096)), dtype=np.int64)
        if chunk.size == 0:
            break
        costs = d[chunk].min(axis=1) @ w
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best, best_cost = tuple(chunk[i].tolist()), float(costs[i])
    return Placement(best), best_cost


def random_placement(graph: Graph, k: int, seed: int = 0) -> Placement:
    """Uniform k-subset of nodes, sorted."""
    _check_k(graph, k)
    rng = np.random.default_rng(seed)
    return Placement(tuple(sorted(rng.choice(graph.node_count, size=k, replace=False).tolist())))
