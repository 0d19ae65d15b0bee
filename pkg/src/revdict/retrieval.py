"""Exact cosine-similarity retrieval over the vocabulary.

Brute-force search is exact and fast enough at the ~1e5 vocabulary sizes
this engine targets; no approximate index is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Vocabulary
from .errors import DegenerateVector, InvalidArgument


@dataclass(frozen=True)
class ScoredWord:
    word: str
    similarity: float
    vocab_index: int
    degenerate: bool = False


class RetrievalIndex:
    """Immutable vocabulary matrix with precomputed L2 norms."""

    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab
        self.matrix = np.asarray(vocab.vectors, dtype=np.float64)
        self.norms = np.linalg.norm(self.matrix, axis=1)

    def __len__(self):
        return len(self.vocab)


def cosine(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise InvalidArgument(f"length mismatch {x.shape} vs {y.shape}")
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise DegenerateVector("cosine similarity is undefined for zero vectors")
    return float(np.clip(np.dot(x, y) / (nx * ny), -1.0, 1.0))


def _similarities(index: RetrievalIndex, q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (index.matrix.shape[1],):
        raise InvalidArgument(
            f"query has dim {q.shape}, index expects ({index.matrix.shape[1]},)")
    qn = np.linalg.norm(q)
    if qn == 0.0:
        raise DegenerateVector("query vector has zero norm")
    sims = np.full(len(index), -np.inf)
    ok = index.norms > 0.0
    sims[ok] = np.clip((index.matrix[ok] @ q) / (index.norms[ok] * qn), -1.0, 1.0)
    return sims


def score_all(index: RetrievalIndex, q) -> list:
    """One ScoredWord per vocabulary word, in vocabulary order. Zero-norm
    vocabulary vectors get a -inf sentinel and are flagged degenerate."""
    sims = _similarities(index, q)
    return [
        ScoredWord(word=w, similarity=float(s), vocab_index=i,
                   degenerate=not np.isfinite(s))
        for i, (w, s) in enumerate(zip(index.vocab.words, sims))
    ]


def top_k(index: RetrievalIndex, q, k: int) -> list:
    """Top-k by similarity descending, ties broken by ascending index."""
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    sims = _similarities(index, q)
    # stable sort on -sim keeps ascending-index order within ties
    order = np.argsort(-sims, kind="stable")[:k]
    return [
        ScoredWord(word=index.vocab.words[i], similarity=float(sims[i]),
                   vocab_index=int(i), degenerate=not np.isfinite(sims[i]))
        for i in order
    ]


def rank_of_gold(index: RetrievalIndex, q, gold_index: int) -> float:
    """Normalized rank of the gold word among all candidates: strictly-better
    competitors count 1, exact ties count 0.5, divided by |V|-1. 0 best."""
    n = len(index)
    if n < 2:
        raise InvalidArgument("rank requires a vocabulary of at least 2 words")
    if not (0 <= gold_index < n):
        raise InvalidArgument(f"gold_index {gold_index} out of range for |V|={n}")
    sims = _similarities(index, q)
    gold = sims[gold_index]
    others = np.delete(sims, gold_index)
    raw = np.count_nonzero(others > gold) + 0.5 * np.count_nonzero(others == gold)
    return float(raw / (n - 1))
