"""Encoder backends.

Two kinds of model identifier are understood:

- "hash:<dim>" — a deterministic, dependency-free encoder that maps each
  whitespace token to a fixed pseudo-random direction (seeded from the
  token's SHA-256) and returns the normalized sum. It has no semantics but
  honours every contract the service relies on (fixed dimension,
  determinism, batch consistency), which makes it the test and offline
  default.
- anything else — treated as a sentence-transformers model name and loaded
  lazily so the hash path never imports torch.
"""

from __future__ import annotations

import hashlib

import numpy as np


class EncoderError(RuntimeError):
    pass


class HashEncoder:
    def __init__(self, dim: int):
        if dim < 1:
            raise EncoderError(f"dim must be >= 1, got {dim}")
        self.dim = dim

    def _token_vector(self, token: str) -> np.ndarray:
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "little")
        rng = np.random.default_rng(seed)
        return rng.standard_normal(self.dim)

    def encode(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise EncoderError("cannot encode empty text")
        total = np.zeros(self.dim)
        for token in text.split():
            total += self._token_vector(token)
        norm = np.linalg.norm(total)
        return total / norm if norm > 0 else total

    def encode_batch(self, texts: list) -> np.ndarray:
        return np.stack([self.encode(t) for t in texts])


class SentenceTransformerEncoder:
    def __init__(self, model_id: str):
        from sentence_transformers import SentenceTransformer
        self.model = SentenceTransformer(model_id)
        self.dim = int(self.model.get_sentence_embedding_dimension())

    def encode(self, text: str) -> np.ndarray:
        if not text or not text.strip():
            raise EncoderError("cannot encode empty text")
        return np.asarray(
            self.model.encode([text], convert_to_numpy=True)[0],
            dtype=np.float64)

    def encode_batch(self, texts: list) -> np.ndarray:
        for t in texts:
            if not t or not t.strip():
                raise EncoderError("cannot encode empty text")
        return np.asarray(self.model.encode(list(texts),
                                            convert_to_numpy=True),
                          dtype=np.float64)


def load_encoder(model_id: str):
    if model_id.startswith("hash:"):
        try:
            dim = int(model_id.split(":", 1)[1])
        except ValueError:
            raise EncoderError(f"bad hash encoder id {model_id!r}, "
                               "expected hash:<dim>")
        return HashEncoder(dim)
    return SentenceTransformerEncoder(model_id)
