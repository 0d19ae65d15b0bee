"""Text-to-vector sidecar: encodes words and glosses with a configurable
sentence encoder, serves live embeddings over HTTP, and builds engine-format
JSONL datasets from raw TSV tables."""

__version__ = "0.1.0"
