import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dlmplace.graph import DisconnectedError, Graph, GraphError, shortest_distances
from dlmplace.netsim import (
    DivergenceError,
    Event,
    ProtocolError,
    first_arrival_broadcast,
    message,
    run_protocol,
)
from oracles import floyd_warshall, path_edges, random_graph

P5 = Graph(5, path_edges(5))


def test_empty_run():
    states, stats = run_protocol(P5, [], lambda v, s, ev: (s, ()), {0: "a"})
    assert states == {0: "a"}
    assert (stats.messages_sent, stats.events_processed, stats.final_time) == (0, 0, 0.0)


def test_single_message():
    g = Graph(2, [(0, 1, 2.5)])
    seen = []

    def handler(v, state, ev):
        seen.append((v, ev.sender, ev.payload))
        return state, ()

    _, stats = run_protocol(g, [message(g, 0, 1, "hi")], handler)
    assert seen == [(1, 0, "hi")]
    assert stats.events_processed == 1
    assert stats.final_time == 2.5


def test_delivery_order_is_time_then_destination_then_sender():
    g = Graph(4, [(0, 1, 1.0), (0, 2, 1.0), (3, 1, 1.0), (3, 2, 1.0)])
    order = []

    def handler(v, state, ev):
        order.append((ev.arrival_time, v, ev.sender))
        return state, ()

    initial = [message(g, 3, 2), message(g, 0, 2), message(g, 3, 1), message(g, 0, 1)]
    run_protocol(g, initial, handler)
    assert order == sorted(order) == [(1.0, 1, 0), (1.0, 1, 3), (1.0, 2, 0), (1.0, 2, 3)]


def test_sending_to_non_neighbor_is_rejected():
    with pytest.raises(ProtocolError):
        run_protocol(P5, [message(P5, 0, 1)], lambda v, s, ev: (s, [(4, None)]))
    with pytest.raises(ProtocolError):
        run_protocol(P5, [Event(1.0, 3, 0)], lambda v, s, ev: (s, ()))


def test_event_budget():
    ping_pong = lambda v, s, ev: (s, [(ev.sender, None)])  # noqa: E731
    with pytest.raises(DivergenceError):
        run_protocol(P5, [message(P5, 0, 1)], ping_pong, max_events=50)


def test_initial_states_are_not_mutated():
    states = {0: 0}
    out, _ = run_protocol(P5, [message(P5, 1, 0)], lambda v, s, ev: ((s or 0) + 1, ()), states)
    assert states == {0: 0} and out[0] == 1


def test_flooding_sends_at_most_two_messages_per_edge():
    rng = random.Random(3)
    g = random_graph(rng, 100, extra=150)

    def flood(v, seen, ev):
        if seen:
            return True, ()
        return True, [(u, None) for u, _ in g.neighbors(v) if u != ev.sender]

    start = [message(g, 0, u) for u, _ in g.neighbors(0)]
    states, stats = run_protocol(g, start, flood, {0: True})
    assert all(states.get(v) for v in range(100))
    assert stats.messages_sent <= 2 * g.edge_count


def test_broadcast_single_source_on_path():
    records, _ = first_arrival_broadcast(P5, [0])
    assert [r.nearest_dist for r in records] == [0, 1, 2, 3, 4]
    assert [r.arrival_parent for r in records] == [None, 0, 1, 2, 3]


def test_broadcast_symmetric_tie():
    records, _ = first_arrival_broadcast(P5, [0, 4])
    mid = records[2]
    assert mid.nearest_dist == 2
    assert mid.tied_sources == {0, 4}
    assert mid.parents == {0: (1,), 4: (3,)}
    assert records[1].tied_sources == {0}


def test_broadcast_records_every_shortest_path_parent():
    # diamond: node 3 is reached from 0 through both 1 and 2
    g = Graph(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)])
    records, _ = first_arrival_broadcast(g, [0])
    assert records[3].parents == {0: (1, 2)}
    assert records[3].arrival_parent == 1


def test_broadcast_matches_shortest_paths_on_60_nodes():
    rng = random.Random(60)
    g = random_graph(rng, 60, extra=80)
    sources = [4, 22, 51]
    records, _ = first_arrival_broadcast(g, sources)
    want = np.min([shortest_distances(g, s).dist for s in sources], axis=0)
    np.testing.assert_allclose([r.nearest_dist for r in records], want, rtol=1e-12)


@given(st.integers(0, 10_000), st.integers(2, 25), st.integers(1, 4))
def test_pruning_keeps_distances_and_ties(seed, n, k):
    rng = random.Random(seed)
    g = random_graph(rng, n, extra=n, integer=True)
    sources = rng.sample(range(n), min(k, n))
    pruned, ps = first_arrival_broadcast(g, sources, prune=True)
    full, fs = first_arrival_broadcast(g, sources, prune=False)
    assert [r.nearest_dist for r in pruned] == [r.nearest_dist for r in full]
    assert [r.tied_sources for r in pruned] == [r.tied_sources for r in full]
    assert [r.parents for r in pruned] == [r.parents for r in full]
    assert ps.messages_sent <= fs.messages_sent <= 2 * len(sources) * g.edge_count
    fw = floyd_warshall(n, list(g.edges()))
    assert [r.nearest_dist for r in pruned] == [min(fw[s][v] for s in sources) for v in range(n)]


def test_broadcast_errors():
    with pytest.raises(DisconnectedError):
        first_arrival_broadcast(Graph(3, [(0, 1, 1.0)]), [0])
    with pytest.raises(GraphError):
        first_arrival_broadcast(P5, [])
    with pytest.raises(GraphError):
        first_arrival_broadcast(P5, [1, 1])
