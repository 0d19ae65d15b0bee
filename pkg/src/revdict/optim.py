"""AdamW with decoupled weight decay and a constant learning rate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NumericError
from .model import GradientSet, SemiEncoder


@dataclass(frozen=True)
class OptimConfig:
    learning_rate: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.01

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InvalidArgument(f"learning_rate must be > 0, got {self.learning_rate}")
        if not (0 < self.beta1 < 1) or not (0 < self.beta2 < 1):
            raise InvalidArgument(
                f"betas must be in (0,1), got {self.beta1}, {self.beta2}")
        if self.epsilon <= 0:
            raise InvalidArgument(f"epsilon must be > 0, got {self.epsilon}")
        if self.weight_decay < 0:
            raise InvalidArgument(f"weight_decay must be >= 0, got {self.weight_decay}")


@dataclass
class AdamWState:
    t: int
    m_weights: list
    v_weights: list
    m_biases: list
    v_biases: list

    @classmethod
    def fresh(cls, model: SemiEncoder) -> "AdamWState":
        return cls(
            t=0,
            m_weights=[np.zeros_like(w) for _, w, _ in model.layers],
            v_weights=[np.zeros_like(w) for _, w, _ in model.layers],
            m_biases=[np.zeros_like(b) for _, _, b in model.layers],
            v_biases=[np.zeros_like(b) for _, _, b in model.layers],
        )


def _update(theta, g, m, v, t, cfg: OptimConfig, decay: bool):
    m[...] = cfg.beta1 * m + (1.0 - cfg.beta1) * g
    v[...] = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g
    m_hat = m / (1.0 - cfg.beta1 ** t)
    v_hat = v / (1.0 - cfg.beta2 ** t)
    theta -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
    if decay and cfg.weight_decay > 0:
        theta -= cfg.learning_rate * cfg.weight_decay * theta


def adamw_step(model: SemiEncoder, grads: GradientSet, state: AdamWState,
               cfg: OptimConfig) -> None:
    """One AdamW step, in place on the model's parameters and the state.

    Decoupled decay is applied to weight matrices only, never biases.
    """
    for i, (gw, gb) in enumerate(zip(grads.weight_grads, grads.bias_grads)):
        if not (np.all(np.isfinite(gw)) and np.all(np.isfinite(gb))):
            raise NumericError(f"non-finite gradient in layer {i}")
    state.t += 1
    t = state.t
    for i, (_, w, b) in enumerate(model.layers):
        _update(w, grads.weight_grads[i], state.m_weights[i], state.v_weights[i],
                t, cfg, decay=True)
        _update(b, grads.bias_grads[i], state.m_biases[i], state.v_biases[i],
                t, cfg, decay=False)
