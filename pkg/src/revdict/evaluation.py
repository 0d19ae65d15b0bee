"""End-to-end scoring of a trained model on a test set: MSE (batch and
per-dimension), mean cosine similarity, normalized rank statistics, and
top-k hit rates."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .data import Dataset
from .errors import EmptyDataset, MissingGold
from .model import SemiEncoder, forward
from .retrieval import RetrievalIndex, cosine, rank_of_gold, top_k

REPORT_FIELDS = ("n_items", "mse_eq2", "mse_per_dim", "mean_cosine",
                 "mean_rank", "median_rank", "top1", "top10", "top100",
                 "language_tag")


@dataclass
class EvalReport:
    n_items: int
    mse_eq2: float
    mse_per_dim: float
    mean_cosine: float
    mean_rank: float
    median_rank: float
    top1: float
    top10: float
    top100: float
    language_tag: Optional[str] = None


def evaluate(model: SemiEncoder, test: Dataset, index: RetrievalIndex,
             language_tag: Optional[str] = None) -> EvalReport:
    if len(test) == 0:
        raise EmptyDataset("test set is empty")
    missing = sorted({e.word for e in test.entries
                      if e.word not in index.vocab.index})
    if missing:
        raise MissingGold(
            f"{len(missing)} test words absent from the index: "
            + ", ".join(missing[:20]))

    sq_errors = []
    cosines = []
    ranks = []
    hits = {1: 0, 10: 0, 100: 0}
    for e in test.entries:
        q, _ = forward(model, e.def_emb, train_mode=False)
        q = q[0]
        sq_errors.append(float(np.sum((q - e.word_emb) ** 2)))
        cosines.append(cosine(q, e.word_emb))
        gold_idx = index.vocab.index[e.word]
        ranks.append(rank_of_gold(index, q, gold_idx))
        for k in hits:
            if any(sw.vocab_index == gold_idx for sw in top_k(index, q, k)):
                hits[k] += 1

    n = len(test)
    # exactly-rounded sums keep every aggregate invariant to item order
    mse_eq2 = math.fsum(sq_errors) / n
    return EvalReport(
        n_items=n,
        mse_eq2=mse_eq2,
        mse_per_dim=mse_eq2 / model.b,
        mean_cosine=math.fsum(cosines) / n,
        mean_rank=math.fsum(ranks) / n,
        median_rank=float(np.median(ranks)),
        top1=hits[1] / n,
        top10=hits[10] / n,
        top100=hits[100] / n,
        language_tag=language_tag,
    )


def write_report(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(report), fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def read_report(path) -> EvalReport:
    with open(path, encoding="utf-8") as fh:
        return EvalReport(**json.load(fh))
