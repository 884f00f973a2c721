"""Voronoi partitioning of a graph from generator broadcasts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Placement, cost_center_exact
from .netsim import SimStats, first_arrival_broadcast

__all__ = ["TIE_MODES", "Partition", "voronoi_partition", "is_centroidal"]

TIE_MODES = ("lowest-id", "uniform")


@dataclass(frozen=True, eq=False)
class Partition:
    region_of: np.ndarray
    generators: Placement
    nearest_dist: np.ndarray
    region_parent: tuple[int | None, ...]
    stats: SimStats | None = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return len(self.generators)

    def regions(self) -> list[list[int]]:
        """Node ids of each region, in generator order, each sorted."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, r in enumerate(self.region_of):
            out[r].append(v)
        return out

    def region_sizes(self) -> list[int]:
        return np.bincount(self.region_of, minlength=self.k).tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.generators == other.generators
            and self.region_parent == other.region_parent
            and np.array_equal(self.region_of, other.region_of)
            and np.array_equal(self.nearest_dist, other.nearest_dist)
        )

    __hash__ = None


def voronoi_partition(
    graph: Graph,
    generators,
    tie_mode: str = "lowest-id",
    seed: int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> Partition:
    """Partition the graph into the Voronoi regions of ``generators``.

    Nodes with a unique nearest generator join it directly. A node equidistant
    from several generators joins the region of a neighbor lying on a shortest
    path toward one of them, picked by lowest id or uniformly at random
    (``tie_mode="uniform"``, seeded by ``seed`` or ``rng``). Nodes are settled
    in order of distance so that neighbor is always settled first.
    """
    if tie_mode not in TIE_MODES:
        raise ValueError(f"tie_mode must be one of {TIE_MODES}, got {tie_mode!r}")
    gens = Placement.coerce(generators, graph, allow_all=True)
    graph.require_connected()
    if tie_mode == "uniform" and rng is None:
        rng = np.random.default_rng(seed)

    records, stats = first_arrival_broadcast(graph, gens.sites)
    n = graph.node_count
    index_of = {s: i for i, s in enumerate(gens.sites)}
    region_of = np.full(n, -1, dtype=np.int64)
    region_parent: list[int | None] = [None] * n
    nearest = np.array([r.nearest_dist for r in records])

    for s, i in index_of.items():
        region_of[s] = i
    for v in sorted(range(n), key=lambda x: (nearest[x], x)):
        if v in index_of:
            continue
        rec = records[v]
        if len(rec.tied_sources) == 1:
            # the arrival parent has this same unique nearest generator
            region_of[v] = index_of[rec.arrival_source]
            region_parent[v] = rec.arrival_parent
            continue
        candidates = sorted({u for s in rec.tied_sources for u in rec.parents[s]})
        if tie_mode == "lowest-id":
            u = candidates[0]
        else:
            u = candidates[int(rng.integers(len(candidates)))]
        region_of[v] = region_of[u]
        region_parent[v] = u

    region_of.setflags(write=False)
    nearest.setflags(write=False)
    return Partition(region_of, gens, nearest, tuple(region_parent), stats)


def is_centroidal(graph: Graph, generators, tie_mode: str = "lowest-id", seed: int | None = None) -> bool:
    """True when every generator is the exact cost center of its own Voronoi region."""
    part = voronoi_partition(graph, generators, tie_mode, seed)
    return all(
        cost_center_exact(graph, region) == gen
        for region, gen in zip(part.regions(), part.generators)
    )
