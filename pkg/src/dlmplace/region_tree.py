"""Spanning trees of Voronoi regions and their rooted form."""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .graph import DisconnectedError, Graph, GraphError, _dijkstra

__all__ = ["RootedRegionTree", "region_mst", "root_tree", "shortest_path_tree"]


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def region_mst(graph: Graph, region: Iterable[int]) -> list[tuple[int, int, float]]:
    """Kruskal MST of the region's induced subgraph.

    Edges come back as ``(u, v, d)`` with ``u < v`` in the order chosen. Ties
    in distance go to the lexicographically smaller ``(u, v)``.
    """
    members = set(region)
    if not members:
        raise GraphError("region is empty")
    candidates = sorted(
        (d, u, v)
        for u in members
        for v, d in graph.neighbors(u)
        if u < v and v in members
    )
    dsu = _DisjointSet(members)
    tree = []
    for d, u, v in candidates:
        if dsu.union(u, v):
            tree.append((u, v, d))
            if len(tree) == len(members) - 1:
                break
    if len(tree) != len(members) - 1:
        raise DisconnectedError(f"region of {len(members)} nodes is not connected")
    return tree


def shortest_path_tree(graph: Graph, region: Iterable[int], anchor: int) -> list[tuple[int, int, float]]:
    """Spanning tree of the region made of shortest paths from ``anchor``.

    Each node hangs from the predecessor that lies on the most shortest paths
    from the anchor (lowest id on ties), which keeps paths to far nodes close
    to the region's own distances. On unit-distance graphs this is also an MST.
    """
    members = set(region)
    if anchor not in members:
        raise GraphError(f"anchor {anchor} is not in the region")
    dist, _ = _dijkstra(graph, anchor, members)
    order = sorted(members, key=lambda v: (dist[v], v))
    if not math.isfinite(dist[order[-1]]):
        raise DisconnectedError(f"region of {len(members)} nodes is not connected")
    paths = {anchor: 1.0}
    tree = []
    for v in order[1:]:
        preds = [(u, d) for u, d in graph.neighbors(v) if u in members and dist[u] + d == dist[v]]
        paths[v] = sum(paths[u] for u, _ in preds)
        u, d = min(preds, key=lambda p: (-paths[p[0]], p[0]))
        tree.append((min(u, v), max(u, v), d))
    return tree


@dataclass(frozen=True)
class RootedRegionTree:
    """A region's spanning tree hung from ``root``.

    ``order`` lists nodes breadth-first from the root, so parents precede
    children; ``dist_up[v]`` is the edge distance from ``v`` to its parent.
    """

    region_nodes: tuple[int, ...]
    root: int
    parent: dict[int, int | None]
    children: dict[int, tuple[int, ...]]
    dist_up: dict[int, float]
    demand: dict[int, float]
    self_cost: dict[int, float]
    order: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.region_nodes)

    @property
    def edge_dist(self) -> dict[tuple[int, int], float]:
        return {(min(v, p), max(v, p)): self.dist_up[v] for v, p in self.parent.items() if p is not None}

    def edges(self) -> list[tuple[int, int, float]]:
        return sorted((u, v, d) for (u, v), d in self.edge_dist.items())

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def total_demand(self) -> float:
        return sum(self.demand[v] for v in self.order)

    def subtree_mass(self, v: int) -> float:
        """Demand in the subtree below and including ``v`` (plain traversal)."""
        total, stack = 0.0, [v]
        while stack:
            x = stack.pop()
            total += self.demand[x]
            stack.extend(self.children[x])
        return total


def root_tree(tree_edges, region: Iterable[int], root: int, graph: Graph) -> RootedRegionTree:
    members = sorted(set(region))
    if root not in set(members):
        raise GraphError(f"root {root} is not in the region")
    adj: dict[int, list[tuple[int, float]]] = {v: [] for v in members}
    for u, v, d in tree_edges:
        if u not in adj or v not in adj:
            raise GraphError(f"tree edge ({u}, {v}) leaves the region")
        if graph.distance(u, v) != d:
            raise GraphError(f"tree edge ({u}, {v}) distance {d} differs from the graph")
        adj[u].append((v, d))
        adj[v].append((u, d))

    parent: dict[int, int | None] = {root: None}
    dist_up: dict[int, float] = {}
    children: dict[int, tuple[int, ...]] = {}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        kids = []
        for u, d in sorted(adj[v]):
            if u == parent[v]:
                continue
            if u in parent:
                raise GraphError("tree edges contain a cycle")
            parent[u] = v
            dist_up[u] = d
            kids.append(u)
            order.append(u)
            queue.append(u)
        children[v] = tuple(kids)
    if len(order) != len(members):
        raise DisconnectedError("tree edges do not span the region")

    return RootedRegionTree(
        region_nodes=tuple(members),
        root=root,
        parent=parent,
        children=children,
        dist_up=dist_up,
        demand={v: float(graph.demand[v]) for v in members},
        self_cost={v: float(graph.self_cost[v]) for v in members},
        order=tuple(order),
    )
