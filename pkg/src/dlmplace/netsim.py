"""Deterministic discrete-event kernel for node-local message-passing protocols.

A message sent from ``u`` to neighbor ``v`` at time ``t`` arrives at
``t + d(u, v)``, so first arrivals of a flood trace shortest paths. Events are
processed in ``(arrival_time, destination, sender)`` order.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .graph import DisconnectedError, Graph, GraphError

__all__ = [
    "Event",
    "SimStats",
    "ProtocolError",
    "DivergenceError",
    "run_protocol",
    "message",
    "BroadcastRecord",
    "first_arrival_broadcast",
]


class ProtocolError(RuntimeError):
    """A handler tried to do something the network does not allow."""


class DivergenceError(RuntimeError):
    """The event cascade exceeded its budget."""


@dataclass(frozen=True)
class Event:
    arrival_time: float
    destination: int
    sender: int
    payload: Any = field(default=None, compare=False)


@dataclass
class SimStats:
    messages_sent: int = 0
    events_processed: int = 0
    final_time: float = 0.0


# handler(node, state, event) -> (new_state, [(neighbor, payload), ...])
Handler = Callable[[int, Any, Event], "tuple[Any, Iterable[tuple[int, Any]]]"]


def message(graph: Graph, sender: int, destination: int, payload=None, sent_at: float = 0.0) -> Event:
    """Event for a message sent over edge ``(sender, destination)`` at ``sent_at``."""
    return Event(sent_at + graph.distance(sender, destination), destination, sender, payload)


def run_protocol(
    graph: Graph,
    initial_events: Sequence[Event],
    handler: Handler,
    states: dict[int, Any] | None = None,
    max_events: int | None = None,
) -> tuple[dict[int, Any], SimStats]:
    """Run events to quiescence; returns the final per-node states and stats.

    ``states`` maps node id to its initial state (missing nodes start as ``None``)
    and is not mutated. Initial events count as sent messages.
    """
    states = dict(states or {})
    stats = SimStats()
    if max_events is None:
        max_events = 10 * max(1, 2 * graph.edge_count) * max(1, len(initial_events))
    heap: list[tuple[float, int, int, int, Event]] = []
    seq = 0
    for ev in initial_events:
        if not graph.has_edge(ev.sender, ev.destination):
            raise ProtocolError(f"initial event {ev.sender}->{ev.destination} is not along an edge")
        if not (ev.arrival_time >= 0 and math.isfinite(ev.arrival_time)):
            raise ProtocolError(f"bad arrival time {ev.arrival_time}")
        heapq.heappush(heap, (ev.arrival_time, ev.destination, ev.sender, seq, ev))
        seq += 1
    stats.messages_sent = len(heap)

    lookup = graph._lookup
    while heap:
        t, dst, _, _, ev = heapq.heappop(heap)
        stats.events_processed += 1
        if stats.events_processed > max_events:
            raise DivergenceError(f"more than {max_events} events processed")
        stats.final_time = t
        new_state, outgoing = handler(dst, states.get(dst), ev)
        states[dst] = new_state
        row = lookup[dst]
        for nbr, payload in outgoing:
            d = row.get(nbr)
            if d is None:
                raise ProtocolError(f"node {dst} sent to non-neighbor {nbr}")
            heapq.heappush(heap, (t + d, nbr, dst, seq, Event(t + d, nbr, dst, payload)))
            seq += 1
            stats.messages_sent += 1
    return states, stats


@dataclass(frozen=True)
class BroadcastRecord:
    """What a node learned from the generator floods.

    ``parents`` maps each tied nearest source to every neighbor that delivered
    its message first (all neighbors on a shortest path toward that source).
    """

    nearest_dist: float
    arrival_source: int
    arrival_parent: int | None
    tied_sources: frozenset[int]
    parents: dict[int, tuple[int, ...]]


class _Heard:
    __slots__ = ("best", "sources")

    def __init__(self):
        self.best = math.inf
        self.sources: dict[int, list[int]] = {}


def first_arrival_broadcast(
    graph: Graph,
    sources: Sequence[int],
    *,
    prune: bool = True,
    max_events: int | None = None,
) -> tuple[list[BroadcastRecord], SimStats]:
    """Flood a tagged message from every source and record first arrivals.

    A node forwards a source's message only on its first arrival. With
    ``prune`` (the default) it also drops any source whose message arrives
    after a strictly closer one: such a source cannot be nearest for anything
    downstream, so the tie sets are unchanged while traffic drops to about one
    flood. ``prune=False`` floods every source independently.
    """
    sources = [int(s) for s in sources]
    if not sources:
        raise GraphError("no broadcast sources")
    if len(set(sources)) != len(sources):
        raise GraphError(f"duplicate broadcast sources: {sources}")
    for s in sources:
        if not 0 <= s < graph.node_count:
            raise GraphError(f"source {s} outside graph")
    adj = graph.adjacency

    def handler(node, heard: _Heard, ev: Event):
        src = ev.payload
        seen = heard.sources.get(src)
        if seen is not None:
            # same-time arrivals of a known source are alternate shortest-path parents
            if ev.arrival_time == seen[0][0]:
                seen.append((ev.arrival_time, ev.sender))
            return heard, ()
        if prune and ev.arrival_time > heard.best:
            return heard, ()
        heard.sources[src] = [(ev.arrival_time, ev.sender)]
        heard.best = min(heard.best, ev.arrival_time)
        return heard, [(v, src) for v, _ in adj[node] if v != ev.sender]

    states: dict[int, _Heard] = {v: _Heard() for v in range(graph.node_count)}
    initial = []
    for s in sources:
        states[s].best = 0.0
        states[s].sources[s] = [(0.0, None)]
        initial.extend(message(graph, s, v, s) for v, _ in adj[s])
    if max_events is None:
        max_events = 10 * max(1, 2 * graph.edge_count) * len(sources)
    final, stats = run_protocol(graph, initial, handler, states, max_events)

    records = []
    for v in range(graph.node_count):
        heard = final[v]
        if not heard.sources:
            raise DisconnectedError(f"node {v} heard no broadcast")
        best = min(lst[0][0] for lst in heard.sources.values())
        tied = sorted(s for s, lst in heard.sources.items() if lst[0][0] == best)
        parents = {
            s: tuple(sorted(p for _, p in heard.sources[s] if p is not None)) for s in tied
        }
        first = tied[0]
        records.append(
            BroadcastRecord(
                nearest_dist=best,
                arrival_source=first,
                arrival_parent=parents[first][0] if parents[first] else None,
                tied_sources=frozenset(tied),
                parents=parents,
            )
        )
    return records, stats
