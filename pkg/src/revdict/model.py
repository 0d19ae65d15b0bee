"""Semi-encoder network: a fixed 5-layer MLP mapping definition vectors to
word vectors, with manual forward/backward in float64.

Hidden widths shrink geometrically (8s -> 4s -> 2s -> s) and a final affine
projection maps s -> b so the output dimension may differ from the base width.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptCheckpoint, DimensionMismatch, InvalidArgument, InvalidState

GELU_C = 0.7978845608028654  # sqrt(2/pi)
GELU_A = 0.044715

CHECKPOINT_MAGIC = b"RDCK"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    has_activation: bool

    def __post_init__(self):
        if self.in_dim <= 0 or self.out_dim <= 0:
            raise InvalidArgument(
                f"layer dims must be positive, got {self.in_dim}x{self.out_dim}"
            )


@dataclass
class SemiEncoder:
    """Weights/biases for the five layers plus the hyperparameters that
    built them. Weights are (out_dim, in_dim) float64; biases (out_dim,)."""

    layers: list  # of (LayerSpec, weights, bias)
    d: int
    b: int
    s: int
    dropout_rate: float
    init_seed: int = 0

    @property
    def hidden_widths(self):
        return [spec.out_dim for spec, _, _ in self.layers if spec.has_activation]


@dataclass
class ForwardCache:
    """Per-layer intermediates from one forward pass, consumed by backward."""

    x: np.ndarray
    pre_activations: list = field(default_factory=list)
    post_activations: list = field(default_factory=list)  # after dropout
    dropout_masks: list = field(default_factory=list)  # None in eval mode
    batch_size: int = 0


@dataclass
class GradientSet:
    """d(loss)/d(weights) and d(loss)/d(bias) per layer, shape-congruent
    with the model that produced it."""

    weight_grads: list
    bias_grads: list


def layer_specs(d: int, b: int, s: int) -> list:
    widths = [d, 8 * s, 4 * s, 2 * s, s, b]
    specs = []
    for i in range(5):
        specs.append(LayerSpec(widths[i], widths[i + 1], has_activation=(i < 4)))
    return specs


def build_model(d: int, b: int, s: int, dropout_rate: float, init_seed: int) -> SemiEncoder:
    """He-style init: weights ~ N(0, 2/in_dim), biases zero. Same seed gives
    identical parameters."""
    if d <= 0 or b <= 0 or s <= 0:
        raise InvalidArgument(f"dimensions must be positive, got d={d} b={b} s={s}")
    if not (0.0 <= dropout_rate < 1.0):
        raise InvalidArgument(f"dropout_rate must be in [0,1), got {dropout_rate}")
    rng = np.random.default_rng(init_seed)
    layers = []
    for spec in layer_specs(d, b, s):
        std = np.sqrt(2.0 / spec.in_dim)
        w = rng.normal(0.0, std, size=(spec.out_dim, spec.in_dim))
        bias = np.zeros(spec.out_dim)
        layers.append((spec, w, bias))
    return SemiEncoder(layers=layers, d=d, b=b, s=s,
                       dropout_rate=float(dropout_rate), init_seed=int(init_seed))


def param_count(model: SemiEncoder) -> int:
    return sum(spec.in_dim * spec.out_dim + spec.out_dim for spec, _, _ in model.layers)


def gelu(x):
    """tanh-approximation GELU, applied elementwise."""
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * x * (1.0 + np.tanh(GELU_C * (x + GELU_A * x ** 3)))


def gelu_grad(x):
    x = np.asarray(x, dtype=np.float64)
    u = GELU_C * (x + GELU_A * x ** 3)
    t = np.tanh(u)
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t ** 2) * GELU_C * (1.0 + 3.0 * GELU_A * x ** 2)


def forward(model: SemiEncoder, x, train_mode: bool = False, dropout_seed: int = 0):
    """Run a batch through the network.

    x is (n, d) or (d,). Hidden layers: affine, GELU, then (train_mode only)
    inverted dropout. Output layer is affine only. Returns (out, cache).
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.d:
        raise DimensionMismatch(
            f"input has dim {x.shape[1]}, model expects {model.d}"
        )
    cache = ForwardCache(x=x, batch_size=x.shape[0])
    rng = np.random.default_rng(dropout_seed) if train_mode else None
    a = x
    rate = model.dropout_rate
    for spec, w, bias in model.layers:
        z = a @ w.T + bias
        cache.pre_activations.append(z)
        if spec.has_activation:
            a = gelu(z)
            if train_mode and rate > 0.0:
                mask = (rng.random(a.shape) >= rate).astype(np.float64)
                a = a * mask / (1.0 - rate)
                cache.dropout_masks.append(mask)
            else:
                cache.dropout_masks.append(None)
        else:
            a = z
            cache.dropout_masks.append(None)
        cache.post_activations.append(a)
    return a, cache


def mse_loss(pred, target):
    """Mean over the batch of squared L2 distances.

    Returns (loss, per_sample_sq_norms). Divide by the output dim for the
    per-dimension variant used in reports.
    """
    pred = np.atleast_2d(np.asarray(pred, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target, dtype=np.float64))
    if pred.shape != target.shape:
        raise DimensionMismatch(
            f"pred shape {pred.shape} != target shape {target.shape}"
        )
    per_sample = np.sum((pred - target) ** 2, axis=1)
    return float(np.mean(per_sample)), per_sample


def per_dim_mse(pred, target):
    loss, _ = mse_loss(pred, target)
    return loss / np.atleast_2d(pred).shape[1]


def backward(model: SemiEncoder, cache: ForwardCache, pred, target) -> GradientSet:
    """Analytic gradients of the MSE loss w.r.t. every weight and bias.

    Dropout masks recorded in the cache are replayed exactly.
    """
    pred = np.atleast_2d(np.asarray(pred, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target, dtype=np.float64))
    n = cache.batch_size
    if pred.shape[0] != n or len(cache.pre_activations) != len(model.layers):
        raise InvalidState("cache does not match the batch that produced pred")
    if pred.shape != target.shape:
        raise DimensionMismatch(
            f"pred shape {pred.shape} != target shape {target.shape}"
        )

    weight_grads = [None] * len(model.layers)
    bias_grads = [None] * len(model.layers)
    # d(mean_i ||p_i - t_i||^2)/dp = 2 (p - t) / n
    delta = 2.0 * (pred - target) / n
    rate = model.dropout_rate
    for i in range(len(model.layers) - 1, -1, -1):
        spec, w, _ = model.layers[i]
        a_prev = cache.x if i == 0 else cache.post_activations[i - 1]
        weight_grads[i] = delta.T @ a_prev
        bias_grads[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ w
            prev_spec = model.layers[i - 1][0]
            if prev_spec.has_activation:
                mask = cache.dropout_masks[i - 1]
                if mask is not None:
                    delta = delta * mask / (1.0 - rate)
                delta = delta * gelu_grad(cache.pre_activations[i - 1])
    return GradientSet(weight_grads=weight_grads, bias_grads=bias_grads)


def save_checkpoint(model: SemiEncoder, path) -> None:
    """Binary format: magic RDCK, u32 version, u32 d/b/s/n_layers, f32
    dropout_rate, then per layer u32 out_dim, u32 in_dim, f32 weights
    row-major, f32 biases. Little-endian throughout; parameters are stored
    at 32-bit precision."""
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<IIIII", CHECKPOINT_VERSION, model.d, model.b,
                             model.s, len(model.layers)))
        fh.write(struct.pack("<f", model.dropout_rate))
        for spec, w, bias in model.layers:
            fh.write(struct.pack("<II", spec.out_dim, spec.in_dim))
            fh.write(np.ascontiguousarray(w, dtype="<f4").tobytes())
            fh.write(np.ascontiguousarray(bias, dtype="<f4").tobytes())


def load_checkpoint(path) -> SemiEncoder:
    with open(path, "rb") as fh:
        data = fh.read()

    def need(offset, n, what):
        if offset + n > len(data):
            raise CorruptCheckpoint(f"truncated checkpoint while reading {what}",
                                    offset=offset)

    need(0, 4, "magic")
    if data[:4] != CHECKPOINT_MAGIC:
        raise CorruptCheckpoint(f"bad magic {data[:4]!r}", offset=0)
    off = 4
    need(off, 20, "header")
    version, d, b, s, n_layers = struct.unpack_from("<IIIII", data, off)
    if version != CHECKPOINT_VERSION:
        raise CorruptCheckpoint(f"unsupported version {version}", offset=off)
    off += 20
    need(off, 4, "dropout_rate")
    (dropout_rate,) = struct.unpack_from("<f", data, off)
    off += 4
    if n_layers != 5:
        raise CorruptCheckpoint(f"expected 5 layers, got {n_layers}", offset=8)

    expected = layer_specs(d, b, s)
    layers = []
    for i in range(n_layers):
        need(off, 8, f"layer {i} header")
        out_dim, in_dim = struct.unpack_from("<II", data, off)
        off += 8
        spec = expected[i]
        if (out_dim, in_dim) != (spec.out_dim, spec.in_dim):
            raise CorruptCheckpoint(
                f"layer {i} dims {out_dim}x{in_dim} inconsistent with "
                f"d={d} b={b} s={s}", offset=off - 8)
        nw = out_dim * in_dim
        need(off, 4 * nw, f"layer {i} weights")
        w = np.frombuffer(data, dtype="<f4", count=nw, offset=off)
        w = w.reshape(out_dim, in_dim).astype(np.float64)
        off += 4 * nw
        need(off, 4 * out_dim, f"layer {i} biases")
        bias = np.frombuffer(data, dtype="<f4", count=out_dim, offset=off)
        bias = bias.astype(np.float64)
        off += 4 * out_dim
        layers.append((spec, w, bias))
    return SemiEncoder(layers=layers, d=d, b=b, s=s,
                       dropout_rate=float(dropout_rate), init_seed=0)
