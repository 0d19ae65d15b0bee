"""Reverse-dictionary engine: definition-embedding to word-embedding
regression with cosine retrieval, rank metrics, and gloss-quality linting."""

__version__ = "0.1.0"
