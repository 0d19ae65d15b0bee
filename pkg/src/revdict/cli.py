"""Command-line entry points: train, eval, query, lint, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .data import Dataset, load_jsonl, build_vocabulary
from .errors import InvalidArgument, RevdictError
from .evaluation import evaluate, write_report
from .lint import LintConfig, lint_dataset, row_to_json
from .model import load_checkpoint
from .retrieval import RetrievalIndex, top_k
from .trainer import TrainConfig, train


def _load_index(vocab_path) -> RetrievalIndex:
    vocab_ds = load_jsonl(vocab_path)
    return RetrievalIndex(build_vocabulary([vocab_ds]))


def cmd_train(args) -> int:
    cfg = TrainConfig.from_file(args.config)
    cfg.checkpoint_path = args.out
    train_set = load_jsonl(args.data)
    val_set = load_jsonl(args.val_data) if args.val_data else None
    model, history = train(train_set, val_set, cfg)
    base, _ = os.path.splitext(args.out)
    history.write_jsonl(base + ".history.jsonl")
    from .report import save_history_csv, save_training_curves
    save_history_csv(history, base + ".history.csv")
    save_training_curves(history, base + ".loss.png")
    last = history.records[-1]
    print(f"trained {cfg.epochs} epochs; final train loss {last.train_loss:.6g}"
          + (f", val MSE/dim {last.val_mse_per_dim:.6g}"
             if last.val_mse_per_dim is not None else ""))
    print(f"checkpoint written to {args.out}")
    return 0


def cmd_eval(args) -> int:
    model = load_checkpoint(args.model)
    test = load_jsonl(args.data)
    index = _load_index(args.vocab)
    report = evaluate(model, test, index, language_tag=args.language_tag)
    write_report(report, args.out)
    print(json.dumps({
        "n_items": report.n_items,
        "mse_eq2": report.mse_eq2,
        "mse_per_dim": report.mse_per_dim,
        "mean_cosine": report.mean_cosine,
        "mean_rank": report.mean_rank,
        "median_rank": report.median_rank,
        "top1": report.top1, "top10": report.top10, "top100": report.top100,
    }, indent=2))
    if args.figures:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        base, _ = os.path.splitext(args.out)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.bar(["top1", "top10", "top100"],
               [report.top1, report.top10, report.top100], color="tab:blue")
        ax.set_ylim(0, 1)
        ax.set_ylabel("hit rate")
        fig.tight_layout()
        fig.savefig(base + ".topk.png", dpi=150)
        plt.close(fig)
    return 0


def cmd_query(args) -> int:
    if (args.embedding_file is None) == (args.text is None):
        raise InvalidArgument(
            "provide exactly one of --embedding-file or --text")
    model = load_checkpoint(args.model)
    index = _load_index(args.vocab)
    if args.embedding_file is not None:
        with open(args.embedding_file, encoding="utf-8") as fh:
            emb = json.load(fh)
    else:
        if not args.bridge_url:
            raise InvalidArgument("--text requires --bridge-url "
                                  "(an embedding bridge is required)")
        import requests
        resp = requests.post(f"{args.bridge_url.rstrip('/')}/embed",
                             json={"text": args.text}, timeout=30)
        resp.raise_for_status()
        emb = resp.json()["embedding"]
    from .model import forward
    import numpy as np
    q, _ = forward(model, np.asarray(emb, dtype=np.float64)[None, :],
                   train_mode=False)
    for sw in top_k(index, q[0], args.k):
        print(f"{sw.word}\t{sw.similarity:.6f}")
    return 0


def cmd_lint(args) -> int:
    dataset = load_jsonl(args.data)
    cfg = LintConfig()
    rows, summary = lint_dataset(dataset, cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row_to_json(row), ensure_ascii=False) + "\n")
    base, _ = os.path.splitext(args.out)
    with open(base + ".summary.json", "w", encoding="utf-8") as fh:
        fh.write(json.dumps({
            "histogram": {str(k): v for k, v in summary.histogram.items()},
            "mean_score": summary.mean_score,
            "n_linted": summary.n_linted,
            "n_skipped": summary.n_skipped,
        }, ensure_ascii=False) + "\n")
    from .report import save_lint_scores_csv, save_score_histogram
    save_lint_scores_csv(rows, base + ".scores.csv")
    save_score_histogram(summary, base + ".histogram.png")
    print(f"linted {summary.n_linted} entries "
          f"(skipped {summary.n_skipped} empty glosses); "
          f"mean score {summary.mean_score:.2f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app
    model = load_checkpoint(args.checkpoint)
    index = _load_index(args.vocab)
    app = create_app(model, index, bridge_url=args.bridge_url, max_k=args.max_k)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revdict",
                                     description="reverse-dictionary engine")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from a JSONL dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--val-data")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a checkpoint on a test set")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--language-tag")
    p.add_argument("--figures", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("query", help="retrieve top-k words for a definition")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--embedding-file")
    p.add_argument("--text")
    p.add_argument("--bridge-url")
    p.add_argument("--k", type=int, default=10)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("lint", help="lint definitions against the S1-S8 rules")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--bridge-url")
    p.add_argument("--max-k", type=int, default=100)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RevdictError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io-error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
