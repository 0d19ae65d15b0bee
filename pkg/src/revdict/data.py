"""Dataset ingestion (JSONL), merging, vocabulary extraction, and seeded
batch iteration.

JSONL schema: one object per line with "word" (required), "gloss" (string,
may be ""), optional "id", "def_emb", "word_emb" arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .errors import EmptyDataset, ParseError, SchemaError


@dataclass
class Entry:
    word: str
    gloss: str = ""
    id: Optional[str] = None
    def_emb: Optional[np.ndarray] = None
    word_emb: Optional[np.ndarray] = None


@dataclass
class Dataset:
    entries: list
    d: Optional[int] = None
    b: Optional[int] = None
    source_tags: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def def_matrix(self) -> np.ndarray:
        return np.stack([e.def_emb for e in self.entries])

    def word_matrix(self) -> np.ndarray:
        return np.stack([e.word_emb for e in self.entries])


@dataclass
class Vocabulary:
    words: list
    vectors: np.ndarray  # (|V|, b)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)


def _as_vector(value, key, lineno):
    try:
        vec = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise SchemaError(f"line {lineno}: {key} is not a numeric array")
    if vec.ndim != 1:
        raise SchemaError(f"line {lineno}: {key} is not a flat array")
    return vec


def load_jsonl(path, expected_d: Optional[int] = None,
               expected_b: Optional[int] = None,
               source_tag: Optional[str] = None) -> Dataset:
    """Load a dataset, inferring d/b from the first entries carrying vectors
    when not given and validating every later line against them."""
    entries = []
    d, b = expected_d, expected_b
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: malformed JSON: {exc.msg}")
            if not isinstance(obj, dict):
                raise ParseError(f"line {lineno}: expected a JSON object")
            word = obj.get("word")
            if not isinstance(word, str) or not word:
                raise SchemaError(f"line {lineno}: missing or empty \"word\"")
            entry = Entry(word=word, gloss=obj.get("gloss", "") or "",
                          id=obj.get("id"))
            if obj.get("def_emb") is not None:
                entry.def_emb = _as_vector(obj["def_emb"], "def_emb", lineno)
                if d is None:
                    d = entry.def_emb.shape[0]
                elif entry.def_emb.shape[0] != d:
                    raise SchemaError(
                        f"line {lineno}: def_emb has dim "
                        f"{entry.def_emb.shape[0]}, expected {d}")
            if obj.get("word_emb") is not None:
                entry.word_emb = _as_vector(obj["word_emb"], "word_emb", lineno)
                if b is None:
                    b = entry.word_emb.shape[0]
                elif entry.word_emb.shape[0] != b:
                    raise SchemaError(
                        f"line {lineno}: word_emb has dim "
                        f"{entry.word_emb.shape[0]}, expected {b}")
            entries.append(entry)
    if not entries:
        raise EmptyDataset(f"{path} contains no entries")
    return Dataset(entries=entries, d=d, b=b,
                   source_tags=[source_tag or str(path)])


def save_jsonl(dataset: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in dataset.entries:
            obj = {"word": e.word, "gloss": e.gloss}
            if e.id is not None:
                obj["id"] = e.id
            if e.def_emb is not None:
                obj["def_emb"] = e.def_emb.tolist()
            if e.word_emb is not None:
                obj["word_emb"] = e.word_emb.tolist()
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def merge_datasets(datasets: list) -> Dataset:
    """Concatenate in argument order; dims must agree across inputs."""
    if not datasets:
        raise EmptyDataset("no datasets to merge")
    first = datasets[0]
    d, b = first.d, first.b
    for other in datasets[1:]:
        if other.d is not None and d is not None and other.d != d:
            raise SchemaError(
                f"def dim mismatch: {first.source_tags} has d={d}, "
                f"{other.source_tags} has d={other.d}")
        if other.b is not None and b is not None and other.b != b:
            raise SchemaError(
                f"word dim mismatch: {first.source_tags} has b={b}, "
                f"{other.source_tags} has b={other.b}")
        d = d if d is not None else other.d
        b = b if b is not None else other.b
    entries = []
    tags = []
    for ds in datasets:
        entries.extend(ds.entries)
        tags.extend(ds.source_tags)
    return Dataset(entries=entries, d=d, b=b, source_tags=tags)


def build_vocabulary(datasets: list) -> Vocabulary:
    """Unique words in first-seen order; duplicates keep the first vector."""
    if not datasets or all(len(ds) == 0 for ds in datasets):
        raise EmptyDataset("no entries to build a vocabulary from")
    words = []
    vectors = []
    seen = {}
    for ds in datasets:
        for i, e in enumerate(ds.entries):
            if e.word_emb is None:
                where = e.id if e.id is not None else f"entry {i}"
                raise SchemaError(
                    f"{where} (word {e.word!r}) has no word_emb")
            if e.word in seen:
                continue
            seen[e.word] = len(words)
            words.append(e.word)
            vectors.append(e.word_emb)
    return Vocabulary(words=words, vectors=np.stack(vectors), index=seen)


def batch_iter(dataset: Dataset, batch_size: int, shuffle_seed: int = 0,
               epoch: int = 0) -> Iterator[list]:
    """Yield batches of entries in a permutation determined by
    (shuffle_seed, epoch); the last batch may be short."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    n = len(dataset)
    rng = np.random.default_rng([shuffle_seed, epoch])
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield [dataset.entries[i] for i in order[start:start + batch_size]]
