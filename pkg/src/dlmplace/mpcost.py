"""Linear-time serving cost of every node of a rooted tree.

The upward sweep sends each parent two scalars per child: the child's subtree
demand ``f`` and the weighted distance ``g`` accumulated below it. The root
then knows its own cost. The downward sweep sends each child the demand on
the parent's side ``f`` and a partial cost ``h``. The child re-roots with

    cost(u) = h - f_up[u] * d(parent, u) + w(u) * d(u, u)

where ``f_up[u]`` is the child's own cached upward mass.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError
from .netsim import Event, SimStats, run_protocol
from .region_tree import RootedRegionTree

__all__ = [
    "UpwardMessages",
    "CostTable",
    "upward_pass",
    "downward_pass",
    "tree_cost_center",
    "simulate_message_passing",
]


@dataclass(frozen=True)
class UpwardMessages:
    f_up: dict[int, float]
    g_up: dict[int, float]


@dataclass(frozen=True)
class CostTable:
    cost_at: dict[int, float]

    def argmin(self) -> int:
        return min(self.cost_at, key=lambda v: (self.cost_at[v], v))

    def __getitem__(self, v: int) -> float:
        return self.cost_at[v]


def upward_pass(tree: RootedRegionTree) -> tuple[UpwardMessages, float]:
    f_up: dict[int, float] = {}
    g_up: dict[int, float] = {}
    for v in reversed(tree.order):
        kids = tree.children[v]
        f = tree.demand[v] + sum(f_up[c] for c in kids)
        g = sum(g_up[c] for c in kids)
        if v == tree.root:
            root_cost = tree.demand[v] * tree.self_cost[v] + g
        else:
            f_up[v] = f
            g_up[v] = g + f * tree.dist_up[v]
    return UpwardMessages(f_up, g_up), root_cost


def _child_messages(tree: RootedRegionTree, v: int, cost_v: float, f_from_parent: float, f_up):
    # f_v(u) = sum of f received from every tree neighbor except u, plus w(v)
    kids = tree.children[v]
    base = tree.demand[v] + f_from_parent + sum(f_up[c] for c in kids)
    local = tree.demand[v] * tree.self_cost[v]
    for u in kids:
        f = base - f_up[u]
        yield u, f, cost_v + f * tree.dist_up[u] - local


def _settle(tree: RootedRegionTree, u: int, h: float, f_up) -> float:
    return h - f_up[u] * tree.dist_up[u] + tree.demand[u] * tree.self_cost[u]


def downward_pass(tree: RootedRegionTree, up: UpwardMessages, root_cost: float) -> CostTable:
    expected = set(tree.region_nodes) - {tree.root}
    if set(up.f_up) != expected or set(up.g_up) != expected:
        raise GraphError("upward messages do not match the tree's non-root nodes")
    cost = {tree.root: root_cost}
    f_down = {tree.root: 0.0}
    for v in tree.order:
        for u, f, h in _child_messages(tree, v, cost[v], f_down[v], up.f_up):
            f_down[u] = f
            cost[u] = _settle(tree, u, h, up.f_up)
    return CostTable(cost)


def tree_cost_center(tree: RootedRegionTree) -> tuple[int, CostTable]:
    """Node minimizing the tree serving cost (lowest id on ties) and the full table."""
    up, root_cost = upward_pass(tree)
    table = downward_pass(tree, up, root_cost)
    return table.argmin(), table


class _Node:
    __slots__ = ("pending", "f", "g", "f_up", "kid_f")

    def __init__(self, pending):
        self.pending = pending
        self.f = 0.0
        self.g = 0.0
        self.f_up = 0.0
        self.kid_f: dict[int, float] = {}


def simulate_message_passing(
    graph: Graph, tree: RootedRegionTree
) -> tuple[CostTable, SimStats, SimStats]:
    """Run both sweeps as node-local protocols on the event kernel.

    Each scalar is its own message. Returns the cost table and the stats of
    the upward and downward runs. Tree edges must be edges of ``graph``.
    """
    # upward: a node fires once it holds f and g from every child
    nodes = {v: _Node(2 * len(tree.children[v])) for v in tree.order}

    def send_up(v, st: _Node):
        st.f_up = st.f + tree.demand[v]
        g = st.g + st.f_up * tree.dist_up[v]
        return [(tree.parent[v], ("f", st.f_up)), (tree.parent[v], ("g", g))]

    def up_handler(v, st: _Node, ev: Event):
        kind, val = ev.payload
        if kind == "f":
            st.f += val
            st.kid_f[ev.sender] = val
        else:
            st.g += val
        st.pending -= 1
        if st.pending == 0 and v != tree.root:
            return st, send_up(v, st)
        return st, ()

    initial = []
    for v in tree.order:
        if v != tree.root and tree.is_leaf(v):
            for nbr, payload in send_up(v, nodes[v]):
                initial.append(Event(graph.distance(v, nbr), nbr, v, payload))
    nodes, up_stats = run_protocol(graph, initial, up_handler, nodes)

    root = nodes[tree.root]
    costs = {tree.root: tree.demand[tree.root] * tree.self_cost[tree.root] + root.g}
    inbox: dict[int, dict[str, float]] = {v: {} for v in tree.order}

    def down_msgs(v, f_from_parent):
        out = []
        for u, f, h in _child_messages(tree, v, costs[v], f_from_parent, nodes[v].kid_f):
            out += [(u, ("f", f)), (u, ("h", h))]
        return out

    def down_handler(v, st, ev: Event):
        kind, val = ev.payload
        box = inbox[v]
        box[kind] = val
        if len(box) < 2:
            return st, ()
        costs[v] = _settle(tree, v, box["h"], {v: st.f_up})
        return st, down_msgs(v, box["f"])

    initial = [
        Event(graph.distance(tree.root, u), u, tree.root, payload)
        for u, payload in down_msgs(tree.root, 0.0)
    ]
    _, down_stats = run_protocol(graph, initial, down_handler, nodes)
    return CostTable(costs), up_stats, down_stats
