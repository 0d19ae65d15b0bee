"""Configuration-driven training loop with per-epoch validation and
best-checkpoint selection."""

from __future__ import annotations

import copy
import json
import math
import time
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from .data import Dataset, batch_iter
from .errors import ConfigError, NumericError, SchemaError
from .model import SemiEncoder, backward, build_model, forward, mse_loss, save_checkpoint
from .optim import AdamWState, OptimConfig, adamw_step


@dataclass
class TrainConfig:
    d: int = 256
    b: int = 256
    s: int = 256
    dropout_rate: float = 0.3
    epochs: int = 50
    batch_size: int = 256
    seed: int = 0
    optim: OptimConfig = field(default_factory=OptimConfig)
    val_fraction: float = 0.05
    checkpoint_path: Optional[str] = None
    metric_for_best: str = "val_mse"

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not (0.0 <= self.val_fraction < 1.0):
            raise ConfigError(f"val_fraction must be in [0,1), got {self.val_fraction}")
        if self.metric_for_best != "val_mse":
            raise ConfigError(f"unsupported metric_for_best {self.metric_for_best!r}")

    @classmethod
    def from_dict(cls, obj: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(obj) - known)
        if unknown:
            raise ConfigError("unknown config keys: " + ", ".join(unknown))
        kwargs = dict(obj)
        if "optim" in kwargs:
            optim_obj = kwargs["optim"]
            optim_known = {f.name for f in fields(OptimConfig)}
            optim_unknown = sorted(set(optim_obj) - optim_known)
            if optim_unknown:
                raise ConfigError("unknown optim keys: " + ", ".join(optim_unknown))
            kwargs["optim"] = OptimConfig(**optim_obj)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "TrainConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: malformed JSON: {exc.msg}")
        if not isinstance(obj, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(obj)


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float  # batch-mean of the squared-L2 loss
    val_mse_per_dim: Optional[float]
    seconds: float


@dataclass
class TrainHistory:
    records: list = field(default_factory=list)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in self.records:
                fh.write(json.dumps({
                    "epoch": r.epoch,
                    "train_loss": r.train_loss,
                    "val_mse_per_dim": r.val_mse_per_dim,
                    "seconds": r.seconds,
                }) + "\n")


def _check_trainable(dataset: Dataset, cfg: TrainConfig, name: str) -> None:
    for i, e in enumerate(dataset.entries):
        if e.def_emb is None or e.word_emb is None:
            raise SchemaError(f"{name} entry {i} ({e.word!r}) lacks embeddings")
    if dataset.d != cfg.d or dataset.b != cfg.b:
        raise SchemaError(
            f"{name} dims d={dataset.d} b={dataset.b} do not match "
            f"config d={cfg.d} b={cfg.b}")


def _split_holdout(train_set: Dataset, cfg: TrainConfig):
    n_val = int(round(len(train_set) * cfg.val_fraction))
    if n_val == 0:
        return train_set, None
    rng = np.random.default_rng([cfg.seed, 0x56414C])  # holdout split stream
    order = rng.permutation(len(train_set))
    val_idx = set(order[:n_val].tolist())
    tr = [e for i, e in enumerate(train_set.entries) if i not in val_idx]
    va = [e for i, e in enumerate(train_set.entries) if i in val_idx]
    mk = lambda es: Dataset(entries=es, d=train_set.d, b=train_set.b,
                            source_tags=list(train_set.source_tags))
    return mk(tr), mk(va)


def _val_mse_per_dim(model: SemiEncoder, val_set: Dataset) -> float:
    pred, _ = forward(model, val_set.def_matrix(), train_mode=False)
    loss, _ = mse_loss(pred, val_set.word_matrix())
    return loss / model.b


def train(train_set: Dataset, val_set: Optional[Dataset], cfg: TrainConfig):
    """Run the full training loop; returns (model, history) where the model
    carries the parameters from the best-validation epoch (final epoch when
    no validation data exists)."""
    _check_trainable(train_set, cfg, "train set")
    if val_set is not None:
        _check_trainable(val_set, cfg, "validation set")
    elif cfg.val_fraction > 0:
        train_set, val_set = _split_holdout(train_set, cfg)

    model = build_model(cfg.d, cfg.b, cfg.s, cfg.dropout_rate, cfg.seed)
    state = AdamWState.fresh(model)
    history = TrainHistory()
    best_val = math.inf
    best_params = None

    for epoch in range(cfg.epochs):
        t0 = time.monotonic()
        batch_losses = []
        for bi, batch in enumerate(batch_iter(train_set, cfg.batch_size,
                                              shuffle_seed=cfg.seed, epoch=epoch)):
            x = np.stack([e.def_emb for e in batch])
            y = np.stack([e.word_emb for e in batch])
            dropout_seed = (cfg.seed * 1_000_003 + epoch * 10_007 + bi) & 0xFFFFFFFF
            pred, cache = forward(model, x, train_mode=True,
                                  dropout_seed=dropout_seed)
            loss, _ = mse_loss(pred, y)
            if not math.isfinite(loss):
                raise NumericError(f"non-finite loss at epoch {epoch}, batch {bi}")
            grads = backward(model, cache, pred, y)
            adamw_step(model, grads, state, cfg.optim)
            batch_losses.append(loss)

        val_mse = _val_mse_per_dim(model, val_set) if val_set is not None else None
        history.records.append(EpochRecord(
            epoch=epoch,
            train_loss=float(np.mean(batch_losses)),
            val_mse_per_dim=val_mse,
            seconds=time.monotonic() - t0,
        ))
        if val_set is not None and val_mse < best_val:
            best_val = val_mse
            best_params = [(w.copy(), b.copy()) for _, w, b in model.layers]

    if best_params is not None:
        model.layers = [(spec, w, b) for (spec, _, _), (w, b)
                        in zip(model.layers, best_params)]
    if cfg.checkpoint_path:
        save_checkpoint(model, cfg.checkpoint_path)
    return model, history
