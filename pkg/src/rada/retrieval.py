"""Lexical (BM25) and embedding indices over a data store with exact top-k search.

Corpora here stay small enough (a few hundred thousand entries at most) that an
exact scan is both simpler and easier to make reproducible than an ANN
structure. Ranking is fully deterministic: score ties break by ascending
entry id.
"""

from __future__ import annotations

import hashlib
import logging
import math
import re
from dataclasses import dataclass, field

import httpx
import numpy as np

from .corpus import DataStore, StoreEntry

logger = logging.getLogger(__name__)

FIELD_CONTEXT = "context"
FIELD_QUESTION = "question"
FIELD_CONTEXT_AND_QUESTION = "context_and_question"
FIELD_SELECTORS = (FIELD_CONTEXT, FIELD_QUESTION, FIELD_CONTEXT_AND_QUESTION)

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class RetrievalError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercase Unicode-alphanumeric word tokens (underscores split)."""
    return _TOKEN_RE.findall(text.lower())


def entry_field_text(entry: StoreEntry, field_selector: str) -> str | None:
    if field_selector == FIELD_CONTEXT:
        return entry.context
    if field_selector == FIELD_QUESTION:
        return entry.question
    if field_selector == FIELD_CONTEXT_AND_QUESTION:
        parts = [p for p in (entry.context, entry.question) if p]
        return " ".join(parts) if parts else None
    raise RetrievalError(f"unknown field selector {field_selector!r}")


@dataclass
class RetrievalHit:
    entry_id: str
    score: float
    rank: int


@dataclass
class LexicalIndex:
    """Inverted index with per-entry lengths for Okapi BM25 scoring."""

    entry_ids: list[str]
    postings: dict[str, list[tuple[int, int]]]  # term -> [(entry position, tf)]
    idf: dict[str, float]
    doc_lens: list[int]
    avgdl: float
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    def __len__(self) -> int:
        return len(self.entry_ids)


def build_lexical_index(
    store: DataStore,
    field_selector: str = FIELD_CONTEXT,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> LexicalIndex:
    """Index the selected text field of every store entry.

    Entries lacking the field are indexed with zero tokens (they can never
    match); it is an error if the field is absent from every entry or yields
    no tokens at all.
    """
    if len(store) == 0:
        raise RetrievalError("cannot index an empty store")
    if field_selector not in FIELD_SELECTORS:
        raise RetrievalError(f"unknown field selector {field_selector!r}")

    entry_ids = [e.id for e in store.entries]
    texts = [entry_field_text(e, field_selector) for e in store.entries]
    if all(t is None for t in texts):
        raise RetrievalError(f"field {field_selector!r} absent from every entry")

    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lens: list[int] = []
    for pos, text in enumerate(texts):
        tokens = tokenize(text) if text is not None else []
        doc_lens.append(len(tokens))
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for tok, tf in counts.items():
            postings.setdefault(tok, []).append((pos, tf))

    total = sum(doc_lens)
    if total == 0:
        raise RetrievalError(f"field {field_selector!r} yields no tokens in any entry")
    n = len(entry_ids)
    avgdl = total / n
    idf = {
        tok: math.log(1 + (n - len(plist) + 0.5) / (len(plist) + 0.5))
        for tok, plist in postings.items()
    }
    return LexicalIndex(
        entry_ids=entry_ids,
        postings=postings,
        idf=idf,
        doc_lens=doc_lens,
        avgdl=avgdl,
        k1=k1,
        b=b,
    )


def lexical_topk(index: LexicalIndex, query: str, k: int) -> list[RetrievalHit]:
    """Top-k entries by Okapi BM25, ties broken by ascending entry id.

    An empty query after tokenization returns an empty list (logged).
    """
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    query_tokens = tokenize(query)
    if not query_tokens:
        logger.warning("lexical_topk: query tokenized to nothing, returning no hits")
        return []
    n = len(index)
    scores = [0.0] * n
    k1, b, avgdl = index.k1, index.b, index.avgdl
    for tok in query_tokens:
        plist = index.postings.get(tok)
        if plist is None:
            continue
        tok_idf = index.idf[tok]
        for pos, tf in plist:
            dl = index.doc_lens[pos]
            scores[pos] += tok_idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl))
    order = sorted(range(n), key=lambda i: (-scores[i], index.entry_ids[i]))[:k]
    return [
        RetrievalHit(entry_id=index.entry_ids[i], score=scores[i], rank=rank)
        for rank, i in enumerate(order, start=1)
    ]


class EmbeddingProviderError(RuntimeError):
    pass


class HashedBowEmbedder:
    """Deterministic local embedder: hashed bag-of-words token counts.

    Vectors are integer-valued (unnormalized counts per hash bucket), which
    keeps dot products exact; cosine scoring normalizes at query time. Meant
    for offline tests and as a fallback when no embedding service is wired.
    """

    def __init__(self, dim: int = 64):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.fingerprint = f"hashed-bow-v1:d={dim}"

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed(self, texts: list[str]) -> np.ndarray:
        vectors = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            for tok in tokenize(text):
                vectors[row, self._bucket(tok)] += 1.0
        return vectors


class HttpEmbeddingProvider:
    """Client for an embedding endpoint: POST {"texts": [...]} -> {"vectors": [[...]]}."""

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        timeout: float = 30.0,
        max_retries: int = 3,
        transport: httpx.BaseTransport | None = None,
    ):
        self.endpoint = endpoint
        self.fingerprint = f"http:{endpoint}"
        self.max_retries = max_retries
        headers = {}
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    def embed(self, texts: list[str]) -> np.ndarray:
        last_error: Exception | None = None
        for _attempt in range(self.max_retries + 1):
            try:
                response = self._client.post(self.endpoint, json={"texts": texts})
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code in (408, 429) or response.status_code >= 500:
                last_error = EmbeddingProviderError(f"HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise EmbeddingProviderError(
                    f"embedding endpoint returned HTTP {response.status_code}"
                )
            try:
                vectors = response.json()["vectors"]
            except (KeyError, ValueError) as exc:
                raise EmbeddingProviderError(f"malformed embedding response: {exc}")
            return np.asarray(vectors, dtype=np.float64)
        raise EmbeddingProviderError(
            f"embedding request failed after {self.max_retries + 1} attempts: {last_error}"
        )


@dataclass
class EmbeddingIndex:
    """Per-entry embedding vectors plus the fingerprint of their producer."""

    entry_ids: list[str]
    vectors: np.ndarray  # (n, dim) float64
    dim: int
    provider_fingerprint: str
    norms: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.norms is None:
            self.norms = np.linalg.norm(self.vectors, axis=1)

    def __len__(self) -> int:
        return len(self.entry_ids)


def build_embedding_index(
    store: DataStore,
    provider,
    field_selector: str = FIELD_CONTEXT,
    batch_size: int = 64,
) -> EmbeddingIndex:
    """Embed the selected field of every entry; entries lacking it embed as empty text."""
    if len(store) == 0:
        raise RetrievalError("cannot index an empty store")
    texts = [entry_field_text(e, field_selector) for e in store.entries]
    if all(t is None for t in texts):
        raise RetrievalError(f"field {field_selector!r} absent from every entry")
    texts = [t if t is not None else "" for t in texts]

    blocks: list[np.ndarray] = []
    dim: int | None = None
    for start in range(0, len(texts), batch_size):
        block = np.asarray(provider.embed(texts[start : start + batch_size]), dtype=np.float64)
        if block.ndim != 2 or block.shape[0] != len(texts[start : start + batch_size]):
            raise RetrievalError(f"provider returned bad shape {block.shape}")
        if dim is None:
            dim = block.shape[1]
        elif block.shape[1] != dim:
            raise RetrievalError(
                f"embedding dimension mismatch across batches: {dim} vs {block.shape[1]}"
            )
        blocks.append(block)
    vectors = np.vstack(blocks)
    if not np.isfinite(vectors).all():
        raise RetrievalError("provider returned non-finite vector components")
    if dim is None or dim < 1:
        raise RetrievalError("provider returned zero-dimensional vectors")
    return EmbeddingIndex(
        entry_ids=[e.id for e in store.entries],
        vectors=vectors,
        dim=dim,
        provider_fingerprint=getattr(provider, "fingerprint", "unknown"),
    )


def embedding_topk(index: EmbeddingIndex, query_vector: np.ndarray, k: int) -> list[RetrievalHit]:
    """Top-k entries by cosine similarity, ties broken by ascending entry id.

    Entries with zero-norm vectors score 0.0; a zero-norm query is an error.
    """
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    query = np.asarray(query_vector, dtype=np.float64)
    if query.shape != (index.dim,):
        raise RetrievalError(
            f"query dimension {query.shape} does not match index dimension ({index.dim},)"
        )
    qnorm = float(np.linalg.norm(query))
    if qnorm == 0.0:
        raise RetrievalError("zero-norm query vector")
    dots = index.vectors @ query
    denom = index.norms * qnorm
    scores = np.where(denom > 0.0, dots / np.where(denom > 0.0, denom, 1.0), 0.0)
    n = len(index)
    order = sorted(range(n), key=lambda i: (-scores[i], index.entry_ids[i]))[:k]
    return [
        RetrievalHit(entry_id=index.entry_ids[i], score=float(scores[i]), rank=rank)
        for rank, i in enumerate(order, start=1)
    ]
