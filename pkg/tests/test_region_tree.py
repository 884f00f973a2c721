import itertools
import random

import pytest
from hypothesis import given, strategies as st

from dlmplace.graph import DisconnectedError, Graph, GraphError
from dlmplace.region_tree import region_mst, root_tree, shortest_path_tree
from dlmplace.topology import gen_grid
from oracles import floyd_warshall, path_edges, random_graph, random_tree_edges, star_edges


def _spans(n_nodes, nodes, edges):
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return len({find(v) for v in nodes}) == 1


def _min_spanning_weight(nodes, edges):
    best = None
    for subset in itertools.combinations(edges, len(nodes) - 1):
        if _spans(len(nodes), nodes, subset):
            w = sum(d for _, _, d in subset)
            best = w if best is None else min(best, w)
    return best


def test_tree_region_is_its_own_mst():
    rng = random.Random(0)
    edges = random_tree_edges(rng, 25)
    g = Graph(25, edges)
    assert sorted(region_mst(g, range(25))) == sorted(edges)


def test_four_cycle_picks_lexicographic_edges():
    g = Graph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    assert sorted(region_mst(g, range(4))) == [(0, 1, 1.0), (0, 3, 1.0), (1, 2, 1.0)]


@pytest.mark.parametrize("seed", range(25))
def test_mst_weight_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    g = random_graph(rng, n, extra=rng.randint(0, 8))
    edges = list(g.edges())
    tree = region_mst(g, range(n))
    assert len(tree) == n - 1 and _spans(n, range(n), tree)
    assert sum(d for _, _, d in tree) == pytest.approx(_min_spanning_weight(list(range(n)), edges))


def test_mst_of_induced_region_on_20_nodes():
    rng = random.Random(20)
    g = random_graph(rng, 40, extra=60)
    # grown breadth-first so the induced subgraph is connected
    region, frontier = {0}, [0]
    while len(region) < 20:
        v = frontier.pop(0)
        for u, _ in g.neighbors(v):
            if u not in region and len(region) < 20:
                region.add(u)
                frontier.append(u)
    tree = region_mst(g, region)
    assert _spans(20, region, tree)
    assert all(u in region and v in region for u, v, _ in tree)


def test_mst_rejects_disconnected_region():
    g = Graph(5, path_edges(5))
    with pytest.raises(DisconnectedError):
        region_mst(g, [0, 1, 3])
    with pytest.raises(GraphError):
        region_mst(g, [])


def test_shortest_path_tree_preserves_anchor_distances():
    rng = random.Random(8)
    g = random_graph(rng, 30, extra=40)
    tree = shortest_path_tree(g, range(30), 5)
    fw = floyd_warshall(30, list(g.edges()))
    rooted = root_tree(tree, range(30), 5, g)
    for v in range(30):
        depth, x = 0.0, v
        while rooted.parent[x] is not None:
            depth += rooted.dist_up[x]
            x = rooted.parent[x]
        assert depth == pytest.approx(fw[5][v])


def test_shortest_path_tree_on_grid_is_minimal():
    g = gen_grid(5, 5)
    assert len(shortest_path_tree(g, range(25), 12)) == 24
    with pytest.raises(GraphError):
        shortest_path_tree(g, [0, 1], 12)


def test_star_rooted_at_center():
    g = Graph(5, star_edges(5))
    t = root_tree(region_mst(g, range(5)), range(5), 0, g)
    assert t.children[0] == (1, 2, 3, 4)
    assert all(t.parent[v] == 0 and t.is_leaf(v) for v in range(1, 5))


def test_path_rooted_at_end():
    g = Graph(3, path_edges(3))
    t = root_tree(region_mst(g, range(3)), range(3), 2, g)
    assert t.parent == {2: None, 1: 2, 0: 1}
    assert t.order == (2, 1, 0)


def test_rerooting_everywhere():
    rng = random.Random(15)
    edges = random_tree_edges(rng, 15)
    g = Graph(15, edges, demand=[rng.uniform(0, 2) for _ in range(15)])
    for r in range(15):
        t = root_tree(edges, range(15), r, g)
        assert [v for v, p in t.parent.items() if p is None] == [r]
        assert sum(p is not None for p in t.parent.values()) == 14
        assert sorted(t.edges()) == sorted(edges)
        assert t.subtree_mass(r) == pytest.approx(t.total_demand())
        assert set(t.order) == set(range(15))
        seen = set()
        for v in t.order:
            assert t.parent[v] is None or t.parent[v] in seen
            seen.add(v)


def test_root_tree_rejects_bad_edges():
    g = Graph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0)])
    with pytest.raises(GraphError):
        root_tree([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], range(3), 0, g)
    with pytest.raises(DisconnectedError):
        root_tree([(0, 1, 1.0)], range(3), 0, g)
    with pytest.raises(GraphError):
        root_tree([(0, 1, 2.0), (1, 2, 1.0)], range(3), 0, g)
    with pytest.raises(GraphError):
        root_tree([(0, 1, 1.0), (1, 2, 1.0)], range(3), 3, g)
    with pytest.raises(GraphError):
        root_tree([(0, 1, 1.0), (2, 3, 1.0)], range(3), 0, g)


@given(st.integers(0, 10_000), st.integers(1, 40))
def test_subtree_masses_add_up(seed, n):
    rng = random.Random(seed)
    edges = random_tree_edges(rng, n)
    g = Graph(n, edges, demand=[rng.uniform(0, 3) for _ in range(n)])
    t = root_tree(edges, range(n), rng.randrange(n), g)
    for v in t.order:
        kids = sum(t.subtree_mass(c) for c in t.children[v])
        assert t.subtree_mass(v) == pytest.approx(t.demand[v] + kids)
