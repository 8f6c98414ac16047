"""Network- and node-level measures.

Every measure runs on the unweighted skeleton of the graph: weights carry
display meaning only, and distances are hop counts, so nodes of a fully
connected component score closeness 1.00. A weighted-distance variant
(distance = 1/weight) exists behind the ``weighted`` flag for exploration; it
is not used by any report.

Null conventions: a measure whose denominator is zero is ``None``, never NaN,
and isolated or absent nodes get ``None`` in node reports.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import UnknownNode
from .graphs import WeightedGraph, non_isolated_subgraph


def _bfs_distances(adj: dict[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _dijkstra_distances(g: WeightedGraph, source: str) -> dict[str, float]:
    # weighted mode: distance of an edge is 1/weight
    adj: dict[str, list[tuple[str, float]]] = {v: [] for v in g.nodes}
    for (u, v), w in g.edges.items():
        adj[u].append((v, 1.0 / w))
        adj[v].append((u, 1.0 / w))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done: set[str] = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for w, cost in sorted(adj[v]):
            nd = d + cost
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def transitivity(g: WeightedGraph) -> float | None:
    """Global clustering coefficient: 3 x triangles / connected triples,
    on the skeleton without isolates. None when no triples exist."""
    sub = non_isolated_subgraph(g)
    adj = sub.adjacency()
    wedges = sum(len(n) * (len(n) - 1) // 2 for n in adj.values())
    if wedges == 0:
        return None
    closed = sum(len(adj[u] & adj[v]) for u, v in sub.edges)  # 3 per triangle
    return closed / wedges


def degree_centralization(g: WeightedGraph) -> float | None:
    """Freeman degree centralization over the skeleton without isolates:
    sum(d_max - d_i) / ((n-1)(n-2)). None when fewer than 3 nodes remain."""
    sub = non_isolated_subgraph(g)
    n = len(sub.nodes)
    if n < 3:
        return None
    degrees = [len(neigh) for neigh in sub.adjacency().values()]
    d_max = max(degrees)
    return sum(d_max - d for d in degrees) / ((n - 1) * (n - 2))


def closeness(g: WeightedGraph, v: str, weighted: bool = False) -> float | None:
    """Component-normalized closeness: (k-1) / sum of distances to the k-1
    other nodes of v's component. None for isolates."""
    if v not in g.nodes:
        raise UnknownNode(v)
    if g.degree(v) == 0:
        return None
    if weighted:
        dist: Mapping[str, float] = _dijkstra_distances(g, v)
    else:
        dist = _bfs_distances(g.adjacency(), v)
    total = sum(d for node, d in dist.items() if node != v)
    k = len(dist)
    if total == 0:
        return None  # unreachable: degree >= 1 implies a neighbor at distance > 0
    return (k - 1) / total


def _brandes_raw(adj: dict[str, set[str]]) -> dict[str, float]:
    """Betweenness accumulation over unordered pairs (already halved)."""
    raw = {v: 0.0 for v in adj}
    for source in sorted(adj):
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in adj}
        sigma = {v: 0 for v in adj}
        dist = {v: -1 for v in adj}
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in sorted(adj[v]):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in adj}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != source:
                raw[w] += delta[w]
    return {v: value / 2.0 for v, value in raw.items()}


def _brandes_raw_weighted(g: WeightedGraph) -> dict[str, float]:
    """Dijkstra-based variant for the weighted-distance mode (distance = 1/weight).

    Two phases per source: final distances first, then path counting over the
    shortest-path DAG those distances induce (ties matched within 1e-12).
    """
    adj: dict[str, list[tuple[str, float]]] = {v: [] for v in g.nodes}
    for (u, v), w in g.edges.items():
        adj[u].append((v, 1.0 / w))
        adj[v].append((u, 1.0 / w))
    raw = {v: 0.0 for v in g.nodes}
    for source in sorted(g.nodes):
        dist = _dijkstra_distances(g, source)
        order = sorted(dist, key=lambda v: (dist[v], v))
        sigma = {v: 0.0 for v in dist}
        preds: dict[str, list[str]] = {v: [] for v in dist}
        sigma[source] = 1.0
        for v in order:
            for w, cost in sorted(adj[v]):
                if w in dist and abs(dist[v] + cost - dist[w]) <= 1e-12:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in dist}
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != source:
                raw[w] += delta[w]
    return {v: value / 2.0 for v, value in raw.items()}


def betweenness(g: WeightedGraph, v: str, weighted: bool = False) -> float | None:
    """Betweenness normalized by (n-1)(n-2)/2, n counting the non-isolated
    nodes of the network. None for isolates and when n < 3."""
    if v not in g.nodes:
        raise UnknownNode(v)
    sub = non_isolated_subgraph(g)
    if v not in sub.nodes:
        return None
    n = len(sub.nodes)
    denom = (n - 1) * (n - 2) / 2.0
    if denom == 0:
        return None
    raw = _brandes_raw_weighted(sub) if weighted else _brandes_raw(sub.adjacency())
    return raw[v] / denom


def _all_betweenness(g: WeightedGraph) -> dict[str, float | None]:
    """Per-node normalized betweenness for every node of g (one traversal set)."""
    out: dict[str, float | None] = {v: None for v in g.nodes}
    sub = non_isolated_subgraph(g)
    n = len(sub.nodes)
    denom = (n - 1) * (n - 2) / 2.0
    if denom == 0:
        return out
    raw = _brandes_raw(sub.adjacency())
    for v in sub.nodes:
        out[v] = raw[v] / denom
    return out


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class NodeMetricsRow:
    """One author's measures; None marks an isolate or an absent author."""

    author_id: str
    an_closeness: float | None
    in_betweenness: float | None
    cn_betweenness: float | None


@dataclass(frozen=True)
class NetworkMetricsRow:
    reading_id: str
    an_transitivity: float | None
    in_centralization: float | None
    cn_transitivity: float | None


def node_report(
    an: WeightedGraph,
    in_: WeightedGraph,
    cn: WeightedGraph,
    roster: set[str],
) -> list[NodeMetricsRow]:
    """One row per roster author, sorted by author id: closeness in the
    attention network, betweenness in the interaction and creation networks."""
    in_btw = _all_betweenness(in_)
    cn_btw = _all_betweenness(cn)
    rows = []
    for author in sorted(roster):
        clo = closeness(an, author) if author in an.nodes else None
        rows.append(
            NodeMetricsRow(
                author_id=author,
                an_closeness=clo,
                in_betweenness=in_btw.get(author),
                cn_betweenness=cn_btw.get(author),
            )
        )
    return rows


def network_report(
    graphs_by_reading: Mapping[str, tuple[WeightedGraph, WeightedGraph, WeightedGraph]],
) -> list[NetworkMetricsRow]:
    """One row per reading (sorted by id): attention-network transitivity,
    interaction-network degree centralization, creation-network transitivity."""
    rows = []
    for reading_id in sorted(graphs_by_reading):
        an, in_, cn = graphs_by_reading[reading_id]
        rows.append(
            NetworkMetricsRow(
                reading_id=reading_id,
                an_transitivity=transitivity(an),
                in_centralization=degree_centralization(in_),
                cn_transitivity=transitivity(cn),
            )
        )
    return rows
