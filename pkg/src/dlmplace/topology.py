"""Synthetic topologies, demand generation and edge-list file I/O.

Edge file: one undirected edge per line, ``<u> <v> <distance>``, 0-indexed,
``#`` comments allowed. Demand file: ``<node_id> <demand> [<self_cost>]``;
nodes missing from it get demand 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError

__all__ = [
    "DemandSpec",
    "FormatError",
    "GenerationError",
    "gen_grid",
    "gen_small_world",
    "gen_demand",
    "load_graph",
    "save_graph",
    "grid_shape",
]

# 80-20 rule: log(5)/log(4)
PARETO_80_20_SHAPE = 1.16


class FormatError(ValueError):
    def __init__(self, path, lineno: int | None, msg: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {msg}")
        self.path = path
        self.lineno = lineno


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DemandSpec:
    """How node demands are drawn.

    ``pareto``: ``scale / U**(1/shape)`` with U uniform on (0, 1].
    ``uniform``: ``scale * U`` with U uniform on (0, 1].
    ``constant``: every node gets ``scale``.
    """

    distribution: str = "pareto"
    shape: float = PARETO_80_20_SHAPE
    scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in ("pareto", "uniform", "constant"):
            raise ValueError(f"unknown demand distribution {self.distribution!r}")
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("demand shape and scale must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("demand seed must fit in 64 unsigned bits")


def gen_grid(rows: int, cols: int) -> Graph:
    """``rows x cols`` 4-neighbor lattice with unit edges; node id ``r * cols + c``."""
    if rows < 1 or cols < 1:
        raise GraphError(f"grid dimensions must be positive, got {rows}x{cols}")
    if rows * cols < 2:
        raise GraphError("grid needs at least 2 nodes")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, 1.0))
            if r + 1 < rows:
                edges.append((v, v + cols, 1.0))
    return Graph(rows * cols, edges)


def grid_shape(n: int) -> tuple[int, int]:
    """Most square ``rows x cols`` factorization of ``n`` with ``rows <= cols``."""
    rows = max(r for r in range(1, math.isqrt(n) + 1) if n % r == 0)
    return rows, n // rows


def gen_small_world(
    n: int,
    base_degree: int = 4,
    rewire_prob: float = 0.1,
    seed: int = 0,
    max_retries: int = 100,
) -> Graph:
    """Connected Watts-Strogatz graph with unit edge distances.

    Each ring-lattice edge ``(u, u+j)`` is rewired to ``(u, w)`` with probability
    ``rewire_prob``; ``w`` is redrawn until it is neither ``u`` nor an existing
    neighbor. Disconnected draws are regenerated from the same generator stream.
    """
    if base_degree < 2 or base_degree % 2:
        raise GraphError(f"base_degree must be a positive even integer, got {base_degree}")
    if base_degree >= n:
        raise GraphError(f"base_degree {base_degree} must be below n={n}")
    if not 0.0 <= rewire_prob <= 1.0:
        raise GraphError(f"rewire_prob must be in [0, 1], got {rewire_prob}")
    rng = np.random.default_rng(seed)
    half = base_degree // 2
    for _ in range(max_retries):
        nbrs = [set() for _ in range(n)]
        for u in range(n):
            for j in range(1, half + 1):
                v = (u + j) % n
                nbrs[u].add(v)
                nbrs[v].add(u)
        for j in range(1, half + 1):
            for u in range(n):
                if rng.random() >= rewire_prob:
                    continue
                v = (u + j) % n
                if len(nbrs[u]) >= n - 1:
                    continue
                w = int(rng.integers(n))
                while w == u or w in nbrs[u]:
                    w = int(rng.integers(n))
                nbrs[u].discard(v)
                nbrs[v].discard(u)
                nbrs[u].add(w)
                nbrs[w].add(u)
        g = Graph(n, [(u, v, 1.0) for u in range(n) for v in nbrs[u] if u < v])
        if g.is_connected:
            return g
    raise GenerationError(f"no connected small-world graph after {max_retries} draws")


def gen_demand(n: int, spec: DemandSpec) -> np.ndarray:
    rng = np.random.default_rng(int(spec.seed))
    if spec.distribution == "constant":
        return np.full(n, float(spec.scale))
    u = 1.0 - rng.random(n)  # (0, 1]
    if spec.distribution == "uniform":
        return spec.scale * u
    return spec.scale / u ** (1.0 / spec.shape)


def _parse_fields(path, lineno, line, types):
    parts = line.split()
    if len(parts) not in types:
        raise FormatError(path, lineno, f"expected {' or '.join(map(str, types))} fields, got {len(parts)}")
    try:
        out = [int(parts[0]), int(parts[1])] if types == (3,) else [int(parts[0])]
        out += [float(x) for x in parts[len(out):]]
    except ValueError as exc:
        raise FormatError(path, lineno, str(exc)) from None
    return out


def _content_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def load_graph(edge_path, demand_path=None) -> Graph:
    edge_path = Path(edge_path)
    edges: dict[tuple[int, int], float] = {}
    max_id = -1
    for lineno, line in _content_lines(edge_path):
        u, v, d = _parse_fields(edge_path, lineno, line, (3,))
        if u < 0 or v < 0:
            raise FormatError(edge_path, lineno, "negative node id")
        if u == v:
            raise FormatError(edge_path, lineno, f"self-loop at node {u}")
        if not (d > 0 and math.isfinite(d)):
            raise FormatError(edge_path, lineno, f"distance must be positive, got {d}")
        key = (min(u, v), max(u, v))
        if key in edges:
            kind = "conflicting" if edges[key] != d else "duplicate"
            raise FormatError(edge_path, lineno, f"{kind} edge {key}")
        edges[key] = d
        max_id = max(max_id, u, v)
    if not edges:
        raise FormatError(edge_path, None, "no edges")

    demand_rows: dict[int, tuple[float, float]] = {}
    if demand_path is not None:
        demand_path = Path(demand_path)
        for lineno, line in _content_lines(demand_path):
            vals = _parse_fields(demand_path, lineno, line, (2, 3))
            node = vals[0]
            if node < 0:
                raise FormatError(demand_path, lineno, "negative node id")
            if node in demand_rows:
                raise FormatError(demand_path, lineno, f"node {node} listed twice")
            demand_rows[node] = (vals[1], vals[2] if len(vals) == 3 else 0.0)
            max_id = max(max_id, node)

    n = max_id + 1
    demand = np.ones(n)
    self_cost = np.zeros(n)
    for node, (w, sc) in demand_rows.items():
        demand[node], self_cost[node] = w, sc
    try:
        return Graph(n, [(u, v, d) for (u, v), d in edges.items()], demand, self_cost)
    except GraphError as exc:
        raise FormatError(demand_path or edge_path, None, str(exc)) from None


def save_graph(graph: Graph, edge_path, demand_path) -> None:
    """Write the edge and demand files; floats use ``repr`` so loading is exact."""
    with open(edge_path, "w") as fh:
        for u, v, d in graph.edges():
            fh.write(f"{u} {v} {d!r}\n")
    with_self_cost = bool(np.any(graph.self_cost))
    with open(demand_path, "w") as fh:
        for v in range(graph.node_count):
            line = f"{v} {float(graph.demand[v])!r}"
            if with_self_cost:
                line += f" {float(graph.self_cost[v])!r}"
            fh.write(line + "\n")
