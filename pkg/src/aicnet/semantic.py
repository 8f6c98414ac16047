"""Quote embeddings and similarity.

Vectors normally arrive from a file produced by an external sentence encoder
(JSONL or a binary columnar format, both documented below). For tests and for
corpora without precomputed vectors there is :func:`hash_embed`, a fully
deterministic character-n-gram hashing embedder.

Embedding file formats:

* JSONL: one ``{"quote_id": str, "vector": [float, ...]}`` object per line.
* Binary: magic bytes ``AICEMB01``, then two little-endian uint32 (dimension,
  record count), then per record a little-endian uint16 id byte-length, the
  UTF-8 id, and ``dimension`` little-endian float32 components.
"""

from __future__ import annotations

import json
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import Quote, normalize_text
from .errors import DimensionMismatch, EmptyText, MissingEmbedding, ZeroVector

_MAGIC = b"AICEMB01"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


@dataclass
class EmbeddingStore:
    """Validated quote-id -> vector map; every vector shares one dimension."""

    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, quote_id: str) -> bool:
        return quote_id in self.vectors

    def get(self, quote_id: str) -> np.ndarray:
        try:
            return self.vectors[quote_id]
        except KeyError:
            raise MissingEmbedding(quote_id) from None


@dataclass(frozen=True)
class JointPair:
    """An unordered quote pair whose similarity cleared the threshold."""

    quote_a: str
    quote_b: str
    similarity: float


def _validated_store(records: Iterable[tuple[str, np.ndarray]]) -> EmbeddingStore:
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    for quote_id, vec in records:
        if dim is None:
            dim = int(vec.shape[0])
        elif vec.shape[0] != dim:
            raise DimensionMismatch(quote_id, dim, int(vec.shape[0]))
        if not np.any(vec):
            raise ZeroVector(quote_id)
        vectors[quote_id] = vec.astype(np.float64)
    return EmbeddingStore(dim=dim or 0, vectors=vectors)


def load_embeddings(path: str | Path, known_quote_ids: set[str] | None = None) -> EmbeddingStore:
    """Load a vector file (JSONL or binary, sniffed by magic bytes).

    Ids not present in ``known_quote_ids`` (when given) are kept but reported
    through a :class:`UserWarning` listing the orphans.
    """
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(_MAGIC):
        store = _validated_store(_read_binary(raw))
    else:
        store = _validated_store(_read_jsonl(raw.decode("utf-8")))
    if known_quote_ids is not None:
        orphans = sorted(set(store.vectors) - known_quote_ids)
        if orphans:
            warnings.warn(f"embeddings for unknown quote ids: {', '.join(orphans)}", stacklevel=2)
    return store


def _read_jsonl(text: str) -> Iterable[tuple[str, np.ndarray]]:
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        yield str(rec["quote_id"]), np.asarray(rec["vector"], dtype=np.float64)


def _read_binary(raw: bytes) -> Iterable[tuple[str, np.ndarray]]:
    dim, count = struct.unpack_from("<II", raw, len(_MAGIC))
    offset = len(_MAGIC) + 8
    for _ in range(count):
        (id_len,) = struct.unpack_from("<H", raw, offset)
        offset += 2
        quote_id = raw[offset : offset + id_len].decode("utf-8")
        offset += id_len
        vec = np.frombuffer(raw, dtype="<f4", count=dim, offset=offset).astype(np.float64)
        offset += 4 * dim
        yield quote_id, vec


def save_embeddings(store: EmbeddingStore, path: str | Path, format: str = "jsonl") -> None:
    path = Path(path)
    if format == "jsonl":
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for quote_id in sorted(store.vectors):
                vec = [float(x) for x in store.vectors[quote_id]]
                fh.write(json.dumps({"quote_id": quote_id, "vector": vec}) + "\n")
    elif format == "binary":
        with path.open("wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<II", store.dim, len(store.vectors)))
            for quote_id in sorted(store.vectors):
                encoded = quote_id.encode("utf-8")
                fh.write(struct.pack("<H", len(encoded)))
                fh.write(encoded)
                fh.write(store.vectors[quote_id].astype("<f4").tobytes())
    else:
        raise ValueError(f"unknown embedding format {format!r}")


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def hash_embed(text: str, dim: int = 256) -> np.ndarray:
    """Deterministic n-gram hashing embedder (test-time stand-in for a model).

    Character 3-to-5-grams of the normalized text (wrapped in sentinel bytes)
    are hashed with 64-bit FNV-1a into ``dim`` signed buckets; the count vector
    is then L2-normalized. Identical normalized texts give identical vectors on
    every platform.
    """
    if dim < 8:
        raise ValueError("embedding dimension must be >= 8")
    normalized = normalize_text(text)
    if not normalized:
        raise EmptyText()
    marked = "\x02" + normalized + "\x03"
    vec = np.zeros(dim, dtype=np.float64)
    encoded = marked.encode("utf-8")
    for n in (3, 4, 5):
        for i in range(len(encoded) - n + 1):
            h = _fnv1a(encoded[i : i + n])
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            vec[h % dim] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        # all buckets cancelled; salt with the whole string so no text maps to zero
        h = _fnv1a(encoded)
        vec[h % dim] = 1.0
        norm = 1.0
    return vec / norm


def embed_quotes(quotes: Iterable[Quote], dim: int = 256) -> EmbeddingStore:
    """Hash-embed every quote's text into a store."""
    vectors = {q.id: hash_embed(q.text, dim) for q in quotes}
    return EmbeddingStore(dim=dim, vectors=vectors)


_CLAMP_TOL = 1e-9


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped into [-1, 1].

    Values within 1e-9 of an endpoint snap to it, so identical vectors give
    exactly 1.0 despite float rounding.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch("", u.shape[0], v.shape[0])
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector()
    value = float(np.dot(u, v)) / (nu * nv)
    if abs(value - 1.0) <= _CLAMP_TOL:
        return 1.0
    if abs(value + 1.0) <= _CLAMP_TOL:
        return -1.0
    return max(-1.0, min(1.0, value))


def quote_similarity(q1: Quote, q2: Quote, store: EmbeddingStore) -> float:
    """Similarity of two quotes.

    Exactly 1.0 for a common reference (same quote, or textually identical
    after normalization) regardless of stored vectors; cosine of the stored
    vectors otherwise.
    """
    if q1.id == q2.id or q1.normalized_text == q2.normalized_text:
        return 1.0
    return cosine(store.get(q1.id), store.get(q2.id))


def joint_pairs(
    quotes_u: Iterable[Quote],
    quotes_v: Iterable[Quote],
    store: EmbeddingStore,
    tau: float = 0.8,
) -> list[JointPair]:
    """All unordered quote pairs across the two sets with similarity >= tau.

    A quote occurring in both sets pairs with itself exactly once, at 1.0.
    Results are sorted by (quote_a, quote_b) id.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    by_id_u = {q.id: q for q in quotes_u}
    by_id_v = {q.id: q for q in quotes_v}
    pairs: list[JointPair] = []
    seen: set[tuple[str, str]] = set()
    for qu_id in sorted(by_id_u):
        for qv_id in sorted(by_id_v):
            key = (qu_id, qv_id) if qu_id <= qv_id else (qv_id, qu_id)
            if key in seen:
                continue
            seen.add(key)
            sim = quote_similarity(by_id_u[qu_id], by_id_v[qv_id], store)
            if sim >= tau:
                pairs.append(JointPair(key[0], key[1], sim))
    pairs.sort(key=lambda p: (p.quote_a, p.quote_b))
    return pairs
