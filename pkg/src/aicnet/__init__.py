"""aicnet: attention, interaction, and creation networks from threaded
annotation discourse, with the measures to compare them."""

from .corpus import (
    Artifact,
    Corpus,
    Quote,
    Reading,
    StatsTable,
    descriptive_stats,
    load_corpus,
    save_corpus,
    thread_root,
)
from .graphs import (
    BipartiteGraph,
    WeightedGraph,
    attention_quotes,
    build_an,
    build_cn_bipartite,
    build_in,
    non_isolated_subgraph,
    project,
)
from .metrics import (
    NetworkMetricsRow,
    NodeMetricsRow,
    betweenness,
    closeness,
    degree_centralization,
    network_report,
    node_report,
    transitivity,
)
from .semantic import (
    EmbeddingStore,
    JointPair,
    cosine,
    embed_quotes,
    hash_embed,
    joint_pairs,
    load_embeddings,
    quote_similarity,
    save_embeddings,
)
from .synth import GroundTruth, SynthParams, VerificationReport, generate, verify
from .textpipe import (
    SelectedWord,
    Token,
    WordSelectionParams,
    filter_nouns,
    lemmatize,
    select_cn_words,
    tfidf,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Artifact", "BipartiteGraph", "Corpus", "EmbeddingStore", "GroundTruth",
    "JointPair", "NetworkMetricsRow", "NodeMetricsRow", "Quote", "Reading",
    "SelectedWord", "StatsTable", "SynthParams", "Token", "VerificationReport",
    "WeightedGraph", "WordSelectionParams", "attention_quotes", "betweenness",
    "build_an", "build_cn_bipartite", "build_in", "closeness", "cosine",
    "degree_centralization", "descriptive_stats", "embed_quotes", "filter_nouns",
    "generate", "hash_embed", "joint_pairs", "lemmatize", "load_corpus",
    "load_embeddings", "network_report", "node_report", "non_isolated_subgraph",
    "project", "quote_similarity", "save_corpus", "save_embeddings",
    "select_cn_words", "thread_root", "tfidf", "tokenize", "transitivity",
    "verify",
]
