"""Weighted undirected graphs, shortest paths and the k-median serving cost."""

from __future__ import annotations

import heapq
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

__all__ = [
    "Graph",
    "Placement",
    "DistanceField",
    "GraphError",
    "DisconnectedError",
    "UnreachableDemandError",
    "shortest_distances",
    "serving_assignment",
    "placement_cost",
    "cost_center_exact",
    "region_cost",
]


class GraphError(ValueError):
    """Invalid graph construction or an invalid argument for a graph operation."""


class DisconnectedError(GraphError):
    """An operation that needs connectivity was given a disconnected graph or region."""


class UnreachableDemandError(DisconnectedError):
    """Some node with demand cannot reach any data-center site."""


class Graph:
    """Immutable undirected graph with positive edge distances.

    Nodes are ``0..n-1``. Each node carries a non-negative ``demand`` and a
    ``self_cost`` (the cost of serving its own demand when it hosts a site).
    Neighbor lists are sorted by node id.
    """

    def __init__(
        self,
        node_count: int,
        edges: Iterable[tuple[int, int, float]],
        demand: Sequence[float] | np.ndarray | None = None,
        self_cost: Sequence[float] | np.ndarray | None = None,
    ):
        if node_count < 1:
            raise GraphError(f"node_count must be positive, got {node_count}")
        n = int(node_count)
        nbrs: list[dict[int, float]] = [{} for _ in range(n)]
        for u, v, d in edges:
            u, v, d = int(u), int(v), float(d)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has a node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (d > 0 and math.isfinite(d)):
                raise GraphError(f"edge ({u}, {v}) distance must be positive and finite, got {d}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u][v] = d
            nbrs[v][u] = d
        self._n = n
        self._adj: tuple[tuple[tuple[int, float], ...], ...] = tuple(
            tuple(sorted(m.items())) for m in nbrs
        )
        self._lookup = nbrs
        self._demand = _node_vector(demand, n, 1.0, "demand")
        self._self_cost = _node_vector(self_cost, n, 0.0, "self_cost")

    @property
    def node_count(self) -> int:
        return self._n

    def __len__(self) -> int:
        return self._n

    @property
    def adjacency(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        return self._adj

    @property
    def demand(self) -> np.ndarray:
        return self._demand

    @property
    def self_cost(self) -> np.ndarray:
        return self._self_cost

    def neighbors(self, v: int) -> tuple[tuple[int, float], ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._lookup[u]

    def distance(self, u: int, v: int) -> float:
        """Edge distance between neighbors ``u`` and ``v``."""
        try:
            return self._lookup[u][v]
        except KeyError:
            raise GraphError(f"({u}, {v}) is not an edge") from None

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, d)`` with ``u < v``, sorted."""
        for u, row in enumerate(self._adj):
            for v, d in row:
                if u < v:
                    yield u, v, d

    @cached_property
    def edge_count(self) -> int:
        return sum(len(row) for row in self._adj) // 2

    def with_demand(self, demand, self_cost=None) -> Graph:
        """Copy of this graph with new node weights (structure is shared)."""
        g = Graph.__new__(Graph)
        g._n, g._adj, g._lookup = self._n, self._adj, self._lookup
        g._demand = _node_vector(demand, self._n, 1.0, "demand")
        g._self_cost = (
            self._self_cost
            if self_cost is None
            else _node_vector(self_cost, self._n, 0.0, "self_cost")
        )
        return g

    @cached_property
    def csr(self) -> csr_matrix:
        rows, cols, data = [], [], []
        for u, row in enumerate(self._adj):
            for v, d in row:
                rows.append(u)
                cols.append(v)
                data.append(d)
        return csr_matrix((data, (rows, cols)), shape=(self._n, self._n))

    @cached_property
    def is_connected(self) -> bool:
        if self._n == 1:
            return True
        ncomp, _ = connected_components(self.csr, directed=False)
        return ncomp == 1

    def require_connected(self) -> None:
        if not self.is_connected:
            raise DisconnectedError("graph is not connected")

    def distance_rows(self, sources: Sequence[int]) -> np.ndarray:
        """Shortest-path distances from each source, shape ``(len(sources), n)``.

        Unreachable entries are ``inf``. Uses the compiled Dijkstra from scipy;
        :func:`shortest_distances` is the pure-Python route with parent pointers.
        """
        idx = np.asarray(list(sources), dtype=np.int64)
        if idx.size == 0:
            return np.zeros((0, self._n))
        return np.atleast_2d(dijkstra(self.csr, directed=False, indices=idx))

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs shortest distances (n x n). Cached; O(n^2) memory."""
        return self.distance_rows(range(self._n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._n == other._n
            and self._adj == other._adj
            and np.array_equal(self._demand, other._demand)
            and np.array_equal(self._self_cost, other._self_cost)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.edge_count})"


def _node_vector(values, n: int, default: float, name: str) -> np.ndarray:
    if values is None:
        arr = np.full(n, default, dtype=float)
    else:
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.shape != (n,):
            raise GraphError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise GraphError(f"{name} values must be finite and non-negative")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Placement:
    """Ordered set of k distinct data-center sites."""

    sites: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        if len(set(self.sites)) != len(self.sites):
            raise GraphError(f"placement has duplicate sites: {self.sites}")

    @classmethod
    def coerce(cls, sites, graph: Graph | None = None, *, allow_all: bool = False) -> Placement:
        p = sites if isinstance(sites, Placement) else cls(tuple(sites))
        if graph is not None:
            p.validate(graph, allow_all=allow_all)
        return p

    def validate(self, graph: Graph, *, allow_all: bool = False) -> None:
        k, n = len(self.sites), graph.node_count
        if k == 0:
            raise GraphError("placement is empty")
        if k > n or (k == n and not allow_all and n > 1):
            raise GraphError(f"placement size {k} must be below node count {n}")
        bad = [s for s in self.sites if not 0 <= s < n]
        if bad:
            raise GraphError(f"placement sites outside graph: {bad}")

    @property
    def k(self) -> int:
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    def __len__(self) -> int:
        return len(self.sites)

    def __getitem__(self, i):
        return self.sites[i]


@dataclass(frozen=True)
class DistanceField:
    source: int
    dist: np.ndarray
    parent: tuple[int | None, ...]

    def path_to(self, v: int) -> list[int]:
        """Nodes on the recorded shortest path from ``source`` to ``v``."""
        if not math.isfinite(self.dist[v]):
            raise UnreachableDemandError(f"node {v} unreachable from {self.source}")
        path = [v]
        while path[-1] != self.source:
            path.append(self.parent[path[-1]])
        return path[::-1]


def _dijkstra(graph: Graph, source: int, allowed: set[int] | None = None):
    n = graph.node_count
    dist = [math.inf] * n
    parent: list[int | None] = [None] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    adj = graph.adjacency
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, d in adj[u]:
            if done[v] or (allowed is not None and v not in allowed):
                continue
            nd = du + d
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and u < parent[v]:
                parent[v] = u
    return dist, parent


def shortest_distances(graph: Graph, source: int) -> DistanceField:
    """Single-source shortest paths; equal-distance predecessors resolve to the lowest id."""
    if not 0 <= source < graph.node_count:
        raise GraphError(f"source {source} outside 0..{graph.node_count - 1}")
    dist, parent = _dijkstra(graph, source)
    arr = np.array(dist)
    arr.setflags(write=False)
    return DistanceField(source, arr, tuple(parent))


def _site_rows(graph: Graph, sites: Sequence[int]) -> np.ndarray:
    # d(s, s) is the site's self-cost, not 0
    rows = graph.distance_rows(sites).copy()
    for i, s in enumerate(sites):
        rows[i, s] = graph.self_cost[s]
    return rows


def _assign(graph: Graph, placement) -> tuple[Placement, np.ndarray, np.ndarray]:
    p = Placement.coerce(placement, graph, allow_all=True)
    # rows ordered by site id so argmin's first-hit rule is the lowest-id tie-break
    order = sorted(p.sites)
    rows = _site_rows(graph, order)
    best = rows.argmin(axis=0)
    served = rows[best, np.arange(graph.node_count)]
    return p, np.asarray(order)[best], served


def serving_assignment(graph: Graph, placement) -> dict[int, int]:
    """Map every node to its nearest site (lowest site id among ties)."""
    _, site_of, served = _assign(graph, placement)
    if not np.all(np.isfinite(served)):
        bad = np.flatnonzero(~np.isfinite(served)).tolist()
        raise UnreachableDemandError(f"nodes {bad[:10]} cannot reach any site")
    return {v: int(s) for v, s in enumerate(site_of)}


def placement_cost(graph: Graph, placement) -> float:
    """Total demand-weighted distance from every node to its serving site."""
    _, _, served = _assign(graph, placement)
    if not np.all(np.isfinite(served)):
        bad = np.flatnonzero(~np.isfinite(served)).tolist()
        raise UnreachableDemandError(f"nodes {bad[:10]} cannot reach any site")
    return float(served @ graph.demand)


def region_cost(graph: Graph, region: Iterable[int], site: int) -> float:
    """Cost of serving ``region`` from ``site`` using distances inside the region."""
    members = set(region)
    if site not in members:
        raise GraphError(f"site {site} is not in the region")
    dist, _ = _dijkstra(graph, site, members)
    total = graph.demand[site] * graph.self_cost[site]
    for v in sorted(members):
        if v == site:
            continue
        if not math.isfinite(dist[v]):
            raise DisconnectedError(f"region is disconnected: {v} unreachable from {site}")
        total += graph.demand[v] * dist[v]
    return float(total)


def cost_center_exact(graph: Graph, region: Iterable[int]) -> int:
    """Exact cost center of a region by evaluating every member (O(n_i) Dijkstras)."""
    members = sorted(set(region))
    if not members:
        raise GraphError("region is empty")
    bad = [v for v in members if not 0 <= v < graph.node_count]
    if bad:
        raise GraphError(f"region nodes outside graph: {bad}")
    best, best_cost = members[0], math.inf
    for s in members:
        c = region_cost(graph, members, s)
        if c < best_cost:
            best, best_cost = s, c
    return best
