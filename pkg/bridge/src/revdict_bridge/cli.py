"""Command-line entry points: serve, build-dataset."""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .dataset import build_dataset
from .encoder import EncoderError, load_encoder
from .service import BridgeConfig, serve_bridge


def cmd_serve(args) -> int:
    cfg = BridgeConfig(model_id=args.model, dim=args.dim, host=args.host,
                       port=args.port, batch_size=args.batch_size)
    serve_bridge(cfg)
    return 0


def cmd_build_dataset(args) -> int:
    encoder = load_encoder(args.model)
    written, skipped = build_dataset(args.input, args.out, encoder)
    print(f"wrote {written} entries to {args.out}"
          + (f" ({skipped} malformed rows skipped)" if skipped else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revdict-bridge",
                                     description="embedding bridge sidecar")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the embedding HTTP service")
    p.add_argument("--model", default="hash:256",
                   help="encoder id: hash:<dim> or a sentence-transformers name")
    p.add_argument("--dim", type=int,
                   help="declared output dimension, verified at startup")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8081)
    p.add_argument("--batch-size", type=int, default=32)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("build-dataset",
                       help="encode a word<TAB>gloss TSV into engine JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model", default="hash:256")
    p.set_defaults(func=cmd_build_dataset)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EncoderError as exc:
        print(f"error: encoder: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io-error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
