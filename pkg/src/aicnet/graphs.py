"""Builders for the three learner-learner networks of one reading.

* attention network: authors connected when their quoted references are
  identical or semantically similar above a threshold; edge weight sums the
  pair similarities.
* interaction network: authors connected by direct replies; edge weight counts
  the reply events.
* creation network: the learner-learner projection of the two-mode
  author-word graph built from the selected words; edge weight counts shared
  words.

All builders are pure functions of immutable inputs and are insensitive to
artifact iteration order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, Quote, Reading, thread_root
from .semantic import EmbeddingStore, joint_pairs
from .textpipe import NounTagger, WordSelectionParams, select_cn_words

EdgeKey = tuple[str, str]


def edge_key(u: str, v: str) -> EdgeKey:
    """Canonical unordered pair."""
    return (u, v) if u <= v else (v, u)


@dataclass
class WeightedGraph:
    """Undirected weighted graph over author ids. No self-loops, weights > 0."""

    nodes: set[str] = field(default_factory=set)
    edges: dict[EdgeKey, float] = field(default_factory=dict)

    def add_edge(self, u: str, v: str, weight: float) -> None:
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        if weight <= 0:
            raise ValueError(f"non-positive weight {weight!r} on ({u!r}, {v!r})")
        self.nodes.add(u)
        self.nodes.add(v)
        self.edges[edge_key(u, v)] = float(weight)

    def weight(self, u: str, v: str) -> float | None:
        return self.edges.get(edge_key(u, v))

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self.edges

    def neighbors(self, v: str) -> set[str]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def degree(self, v: str) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def copy(self) -> "WeightedGraph":
        return WeightedGraph(set(self.nodes), dict(self.edges))


@dataclass
class BipartiteGraph:
    """Two-mode author-word graph; edges only cross the partitions."""

    author_nodes: set[str] = field(default_factory=set)
    word_nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)

    def words_of(self, author: str) -> set[str]:
        return {lemma for a, lemma in self.edges if a == author}


def non_isolated_subgraph(g: WeightedGraph) -> WeightedGraph:
    """Nodes with degree >= 1 and their edges; the input is untouched."""
    connected = {v for key in g.edges for v in key}
    return WeightedGraph(nodes=connected, edges=dict(g.edges))


def attention_quotes(author: str, reading: Reading, corpus: Corpus) -> set[Quote]:
    """Quotes the author attended to: own annotations' quotes plus, for every
    reply they wrote, the quote of the thread's root annotation."""
    quotes: dict[str, Quote] = {}
    for art in reading.artifacts:
        if art.author_id != author:
            continue
        if art.kind == "annotation":
            quote_id = art.quote_id
        else:
            quote_id = thread_root(art, corpus).quote_id
        if quote_id is not None and quote_id in reading.quotes:
            quotes[quote_id] = reading.quotes[quote_id]
    return set(quotes.values())


def _dedupe_by_text(quotes: set[Quote]) -> set[Quote]:
    """One representative per normalized text (smallest quote id), so a pair of
    identical-text quotes held by both authors contributes once, not four times."""
    best: dict[str, Quote] = {}
    for q in sorted(quotes, key=lambda q: q.id):
        best.setdefault(q.normalized_text, q)
    return set(best.values())


def build_an(
    reading: Reading,
    corpus: Corpus,
    store: EmbeddingStore,
    tau: float = 0.8,
    roster: set[str] | None = None,
) -> WeightedGraph:
    """Joint-attention network: edge weight is the sum of similarity scores
    over the authors' joint quote pairs.

    Nodes are the reading's active authors; pass ``roster`` to include inactive
    authors as isolates for cross-reading comparability.
    """
    authors = sorted(reading.active_authors() | (roster or set()))
    g = WeightedGraph(nodes=set(authors))
    attended = {
        a: _dedupe_by_text(attention_quotes(a, reading, corpus)) for a in authors
    }
    for i, u in enumerate(authors):
        for v in authors[i + 1 :]:
            pairs = joint_pairs(attended[u], attended[v], store, tau)
            if pairs:
                g.add_edge(u, v, sum(p.similarity for p in pairs))
    return g


def build_in(reading: Reading, corpus: Corpus, roster: set[str] | None = None) -> WeightedGraph:
    """Interaction network: every reply is one event between its author and the
    parent artifact's author; same-author events are discarded."""
    g = WeightedGraph(nodes=reading.active_authors() | (roster or set()))
    by_id = {a.id: a for a in reading.artifacts}
    events: Counter = Counter()
    for art in reading.artifacts:
        if art.kind != "reply":
            continue
        parent = by_id[art.parent_id]  # validated at load
        if parent.author_id == art.author_id:
            continue
        events[edge_key(art.author_id, parent.author_id)] += 1
    for (u, v), count in events.items():
        g.add_edge(u, v, float(count))
    return g


def build_cn_bipartite(
    reading: Reading,
    corpus: Corpus,
    params: WordSelectionParams = WordSelectionParams(),
    tagger: NounTagger | None = None,
    roster: set[str] | None = None,
) -> BipartiteGraph:
    """Two-mode author-word graph from the reading's selected words. Authors
    with no selected words remain as isolated author nodes."""
    selection = select_cn_words(reading, params, tagger)
    bg = BipartiteGraph(author_nodes=reading.active_authors() | (roster or set()))
    for sel in selection:
        bg.word_nodes.add(sel.lemma)
        bg.edges.add((sel.author_id, sel.lemma))
    return bg


def project(bg: BipartiteGraph) -> WeightedGraph:
    """Learner-learner projection: authors are connected when they share at
    least one word; edge weight is the number of shared words."""
    g = WeightedGraph(nodes=set(bg.author_nodes))
    words = {a: bg.words_of(a) for a in bg.author_nodes}
    authors = sorted(bg.author_nodes)
    for i, u in enumerate(authors):
        for v in authors[i + 1 :]:
            shared = len(words[u] & words[v])
            if shared:
                g.add_edge(u, v, float(shared))
    return g
