"""Rendering of run artifacts: matplotlib figures plus CSV files written
alongside the JSON/JSONL outputs."""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .lint import LintSummary
from .trainer import TrainHistory


def save_history_csv(history: TrainHistory, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "val_mse_per_dim", "seconds"])
        for r in history.records:
            writer.writerow([r.epoch, r.train_loss,
                             "" if r.val_mse_per_dim is None else r.val_mse_per_dim,
                             r.seconds])


def save_training_curves(history: TrainHistory, path) -> None:
    epochs = [r.epoch for r in history.records]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(epochs, [r.train_loss for r in history.records],
            label="train loss (squared L2)", color="tab:blue")
    if any(r.val_mse_per_dim is not None for r in history.records):
        ax2 = ax.twinx()
        ax2.plot(epochs, [r.val_mse_per_dim for r in history.records],
                 label="val MSE / dim", color="tab:orange")
        ax2.set_ylabel("validation MSE per dimension")
        ax2.legend(loc="upper right")
    ax.set_xlabel("epoch")
    ax.set_ylabel("training loss")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_score_histogram(summary: LintSummary, path) -> None:
    scores = sorted(summary.histogram)
    counts = [summary.histogram[s] for s in scores]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(scores, counts, color="tab:green")
    ax.set_xlabel("quality score")
    ax.set_ylabel("entries")
    ax.set_xticks(scores)
    ax.set_title(f"mean score {summary.mean_score:.2f} over "
                 f"{summary.n_linted} entries")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_lint_scores_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "score", "rules"])
        for r in rows:
            writer.writerow([r.word, r.score,
                             " ".join(sorted({f.rule.value for f in r.flags}))])
