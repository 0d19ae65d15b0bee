"""Build engine-format JSONL datasets from raw word<TAB>gloss tables."""

from __future__ import annotations

import json
import logging

logger = logging.getLogger(__name__)


def build_dataset(tsv_path, out_path, encoder) -> tuple:
    """Encode every (word, gloss) row of a two-column UTF-8 TSV into the
    engine's JSONL schema: def_emb = encode(gloss), word_emb = encode(word).

    Malformed rows (wrong column count, empty fields) are skipped with a
    warning. Returns (written, skipped); duplicates are written as-is —
    deduplication is the engine's job.
    """
    written = 0
    skipped = 0
    with open(tsv_path, encoding="utf-8") as src, \
            open(out_path, "w", encoding="utf-8") as dst:
        for lineno, line in enumerate(src, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                logger.warning("%s line %d: malformed row skipped",
                               tsv_path, lineno)
                skipped += 1
                continue
            word, gloss = parts
            dst.write(json.dumps({
                "word": word,
                "gloss": gloss,
                "def_emb": encoder.encode(gloss).tolist(),
                "word_emb": encoder.encode(word).tolist(),
            }, ensure_ascii=False) + "\n")
            written += 1
    return written, skipped
