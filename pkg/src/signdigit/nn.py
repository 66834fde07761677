"""CNN building blocks with hand-written forward and backward passes.

Tensors are plain float64 numpy arrays (row-major).  The public layer
functions operate on single samples exactly as documented; the training loop
uses the batched engine (`forward_batch` / `backward_batch`) which computes
identical math over a leading batch axis.

The supported network is a sequence of: conv2d (3x3, valid, stride 1), relu,
maxpool2x2 (floor), inverted dropout, flatten, dense, and a final softmax.
Backward fuses softmax with categorical cross-entropy, so the gradient
entering the last dense layer is simply probs - onehot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Tensor = np.ndarray

KERNEL = 3


class ShapeMismatchError(ValueError):
    pass


class StaleCacheError(RuntimeError):
    pass


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    out_channels: int | None = None
    rate: float | None = None
    out_features: int | None = None

    @classmethod
    def conv(cls, out_channels: int) -> "LayerSpec":
        if out_channels < 1:
            raise ValueError("out_channels must be >= 1")
        return cls("conv2d", out_channels=out_channels)

    @classmethod
    def relu(cls) -> "LayerSpec":
        return cls("relu")

    @classmethod
    def pool(cls) -> "LayerSpec":
        return cls("maxpool2x2")

    @classmethod
    def dropout(cls, rate: float) -> "LayerSpec":
        if not 0 <= rate < 1:
            raise ValueError("dropout rate must lie in [0, 1)")
        return cls("dropout", rate=rate)

    @classmethod
    def flatten(cls) -> "LayerSpec":
        return cls("flatten")

    @classmethod
    def dense(cls, out_features: int) -> "LayerSpec":
        if out_features < 1:
            raise ValueError("out_features must be >= 1")
        return cls("dense", out_features=out_features)

    @classmethod
    def softmax(cls) -> "LayerSpec":
        return cls("softmax")


@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]
    input_shape: tuple[int, int, int] = (1, 32, 32)

    def shape_chain(self) -> list[tuple[int, ...]]:
        """Output shape after each layer; raises if the chain is illegal."""
        shapes = []
        cur: tuple[int, ...] = tuple(self.input_shape)
        for i, layer in enumerate(self.layers):
            if layer.kind == "conv2d":
                if len(cur) != 3 or cur[1] < KERNEL or cur[2] < KERNEL:
                    raise ShapeMismatchError(f"layer {i}: conv2d cannot take {cur}")
                cur = (layer.out_channels, cur[1] - KERNEL + 1, cur[2] - KERNEL + 1)
            elif layer.kind == "relu":
                pass
            elif layer.kind == "maxpool2x2":
                if len(cur) != 3 or cur[1] < 2 or cur[2] < 2:
                    raise ShapeMismatchError(f"layer {i}: maxpool2x2 cannot take {cur}")
                cur = (cur[0], cur[1] // 2, cur[2] // 2)
            elif layer.kind == "dropout":
                pass
            elif layer.kind == "flatten":
                if len(cur) != 3:
                    raise ShapeMismatchError(f"layer {i}: flatten expects rank 3, got {cur}")
                cur = (cur[0] * cur[1] * cur[2],)
            elif layer.kind == "dense":
                if len(cur) != 1:
                    raise ShapeMismatchError(f"layer {i}: dense expects rank 1, got {cur}")
                cur = (layer.out_features,)
            elif layer.kind == "softmax":
                if len(cur) != 1:
                    raise ShapeMismatchError(f"layer {i}: softmax expects rank 1, got {cur}")
                if i != len(self.layers) - 1:
                    raise ShapeMismatchError("softmax must be the final layer")
            else:
                raise ValueError(f"unknown layer kind {layer.kind!r}")
            shapes.append(cur)
        if not self.layers or self.layers[-1].kind != "softmax":
            raise ShapeMismatchError("network must end in softmax")
        return shapes

    @property
    def num_classes(self) -> int:
        return self.shape_chain()[-1][0]

    def parameter_shapes(self) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
        """(weight shape, bias shape) for every parametric layer, by index."""
        out = {}
        cur: tuple[int, ...] = tuple(self.input_shape)
        for i, (layer, shape) in enumerate(zip(self.layers, self.shape_chain())):
            if layer.kind == "conv2d":
                out[i] = ((layer.out_channels, cur[0], KERNEL, KERNEL), (layer.out_channels,))
            elif layer.kind == "dense":
                out[i] = ((layer.out_features, cur[0]), (layer.out_features,))
            cur = shape
        return out

    def parameter_count(self) -> int:
        return sum(
            math.prod(w) + math.prod(b) for w, b in self.parameter_shapes().values()
        )


# Parameters map layer index -> (weights, bias).
Parameters = dict[int, tuple[Tensor, Tensor]]


def default_architecture(
    hidden: int = 128, dropout_rates: tuple[float, float] = (0.25, 0.5)
) -> NetworkSpec:
    """Two 3x3 conv blocks (32 then 64 filters) with pooling and dropout,
    then a relu dense head into 10-way softmax."""
    return NetworkSpec(
        layers=(
            LayerSpec.conv(32),
            LayerSpec.relu(),
            LayerSpec.pool(),
            LayerSpec.dropout(dropout_rates[0]),
            LayerSpec.conv(64),
            LayerSpec.relu(),
            LayerSpec.pool(),
            LayerSpec.dropout(dropout_rates[1]),
            LayerSpec.flatten(),
            LayerSpec.dense(hidden),
            LayerSpec.relu(),
            LayerSpec.dense(10),
            LayerSpec.softmax(),
        )
    )


def init_params(spec: NetworkSpec, seed: int) -> Parameters:
    """He-normal weights (output dense layer scaled 1/fan_in), zero biases."""
    rng = np.random.default_rng(seed)
    dense_idx = [i for i, l in enumerate(spec.layers) if l.kind == "dense"]
    last_dense = dense_idx[-1] if dense_idx else -1
    params: Parameters = {}
    for i, (w_shape, b_shape) in spec.parameter_shapes().items():
        if spec.layers[i].kind == "conv2d":
            fan_in = w_shape[1] * KERNEL * KERNEL
            std = math.sqrt(2.0 / fan_in)
        else:
            fan_in = w_shape[1]
            std = math.sqrt((1.0 if i == last_dense else 2.0) / fan_in)
        params[i] = (rng.normal(0.0, std, w_shape), np.zeros(b_shape))
    return params


# --- single-sample layer operations ---------------------------------------


def conv2d(x: Tensor, weights: Tensor, bias: Tensor) -> Tensor:
    """Valid 3x3 convolution, stride 1: (C,H,W) -> (F,H-2,W-2)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or weights.ndim != 4 or weights.shape[1:] != (x.shape[0], KERNEL, KERNEL):
        raise ShapeMismatchError(f"conv2d: input {x.shape} vs weights {weights.shape}")
    if bias.shape != (weights.shape[0],):
        raise ShapeMismatchError(f"conv2d: bias {bias.shape} vs {weights.shape[0]} filters")
    if x.shape[1] < KERNEL or x.shape[2] < KERNEL:
        raise ShapeMismatchError(f"conv2d: spatial dims of {x.shape} below kernel size")
    out, _ = _conv_forward(x[None], weights, bias)
    return out[0]


def relu(x: Tensor) -> Tensor:
    return np.maximum(x, 0.0)


def maxpool2x2(x: Tensor) -> tuple[Tensor, Tensor]:
    """Non-overlapping 2x2 max pooling; odd trailing row/column dropped.

    Returns (pooled, argmax) where argmax holds each window's winning offset
    in row-major window order (ties -> first).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[1] < 2 or x.shape[2] < 2:
        raise ShapeMismatchError(f"maxpool2x2 cannot take {x.shape}")
    out, idx = _pool_forward(x[None])
    return out[0], idx[0]


def dropout(
    x: Tensor, p: float, mode: str, rng: np.random.Generator | None = None
) -> tuple[Tensor, Tensor | None]:
    """Inverted dropout: train-mode survivors scale by 1/(1-p); infer is identity."""
    if not 0 <= p < 1:
        raise ValueError("dropout rate must lie in [0, 1)")
    if mode == "infer":
        return x, None
    if mode != "train":
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    if rng is None:
        raise ValueError("train-mode dropout needs an rng")
    mask = (rng.random(np.shape(x)) >= p) / (1.0 - p)
    return x * mask, mask


def flatten(x: Tensor) -> Tensor:
    x = np.asarray(x)
    if x.ndim != 3:
        raise ShapeMismatchError(f"flatten expects rank 3, got {x.shape}")
    return x.reshape(-1)


def dense(x: Tensor, weights: Tensor, bias: Tensor) -> Tensor:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or weights.ndim != 2 or weights.shape[1] != x.shape[0]:
        raise ShapeMismatchError(f"dense: input {x.shape} vs weights {weights.shape}")
    if bias.shape != (weights.shape[0],):
        raise ShapeMismatchError(f"dense: bias {bias.shape} vs {weights.shape[0]} outputs")
    return weights @ x + bias


def softmax(logits: Tensor) -> Tensor:
    """Numerically stable softmax: exp(x - max) normalized."""
    z = np.asarray(logits, dtype=np.float64)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


# --- batched engine ---------------------------------------------------------


def _im2col(xb: Tensor) -> Tensor:
    """(N,C,H,W) -> (N, (H-2)*(W-2), C*9) patch matrix for 3x3 valid conv."""
    n = xb.shape[0]
    win = np.lib.stride_tricks.sliding_window_view(xb, (KERNEL, KERNEL), axis=(2, 3))
    # (N, C, H-2, W-2, 3, 3) -> (N, H-2, W-2, C, 3, 3) -> (N, P, C*9)
    return win.transpose(0, 2, 3, 1, 4, 5).reshape(n, win.shape[2] * win.shape[3], -1)


def _conv_forward(xb: Tensor, w: Tensor, b: Tensor) -> tuple[Tensor, Tensor]:
    n, c, h, wd = xb.shape
    f = w.shape[0]
    cols = _im2col(xb)
    out = cols @ w.reshape(f, -1).T + b
    return out.transpose(0, 2, 1).reshape(n, f, h - 2, wd - 2), cols


def _conv_backward(
    dout: Tensor, cols: Tensor, w: Tensor, x_shape: tuple[int, ...]
) -> tuple[Tensor, Tensor, Tensor]:
    n, c, h, wd = x_shape
    f = w.shape[0]
    dout2 = dout.reshape(n, f, -1).transpose(0, 2, 1).reshape(-1, f)  # (N*P, F)
    cols2 = cols.reshape(-1, cols.shape[-1])  # (N*P, C*9)
    dw = (dout2.T @ cols2).reshape(w.shape)
    db = dout2.sum(axis=0)
    dcols = (dout2 @ w.reshape(f, -1)).reshape(n, h - 2, wd - 2, c, KERNEL, KERNEL)
    dcols = dcols.transpose(0, 3, 1, 2, 4, 5)
    dx = np.zeros(x_shape)
    for i in range(KERNEL):
        for j in range(KERNEL):
            dx[:, :, i : i + h - 2, j : j + wd - 2] += dcols[:, :, :, :, i, j]
    return dx, dw, db


def _pool_forward(xb: Tensor) -> tuple[Tensor, Tensor]:
    n, c, h, w = xb.shape
    h2, w2 = h // 2, w // 2
    windows = (
        xb[:, :, : h2 * 2, : w2 * 2]
        .reshape(n, c, h2, 2, w2, 2)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(n, c, h2, w2, 4)
    )
    idx = windows.argmax(axis=-1)
    out = np.take_along_axis(windows, idx[..., None], axis=-1)[..., 0]
    return out, idx


def _pool_backward(dout: Tensor, idx: Tensor, x_shape: tuple[int, ...]) -> Tensor:
    n, c, h, w = x_shape
    h2, w2 = h // 2, w // 2
    scatter = np.zeros((n, c, h2, w2, 4))
    np.put_along_axis(scatter, idx[..., None], dout[..., None], axis=-1)
    block = scatter.reshape(n, c, h2, w2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    dx = np.zeros(x_shape)
    dx[:, :, : h2 * 2, : w2 * 2] = block.reshape(n, c, h2 * 2, w2 * 2)
    return dx


@dataclass
class ForwardCache:
    """Everything backward needs, captured by one train-mode forward call."""

    n_layers: int
    batch: int
    entries: list


def forward_batch(
    spec: NetworkSpec,
    params: Parameters,
    xb: Tensor,
    mode: str = "infer",
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, ForwardCache | None]:
    """Run the network over a (N, C, H, W) batch.

    Returns (probs (N, K), cache); the cache is populated only in train mode.
    """
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    spec.shape_chain()
    _check_params(spec, params)
    train = mode == "train"
    a = np.asarray(xb, dtype=np.float64)
    entries: list = []
    for i, layer in enumerate(spec.layers):
        if layer.kind == "conv2d":
            w, b = params[i]
            out, cols = _conv_forward(a, w, b)
            entries.append((cols, a.shape))
            a = out
        elif layer.kind == "relu":
            entries.append(a > 0)
            a = np.maximum(a, 0.0)
        elif layer.kind == "maxpool2x2":
            out, idx = _pool_forward(a)
            entries.append((idx, a.shape))
            a = out
        elif layer.kind == "dropout":
            if train and layer.rate > 0:
                if rng is None:
                    raise ValueError("train-mode forward through dropout needs an rng")
                mask = (rng.random(a.shape) >= layer.rate) / (1.0 - layer.rate)
                entries.append(mask)
                a = a * mask
            else:
                entries.append(None)
        elif layer.kind == "flatten":
            entries.append(a.shape)
            a = a.reshape(a.shape[0], -1)
        elif layer.kind == "dense":
            w, b = params[i]
            entries.append(a)
            a = a @ w.T + b
        elif layer.kind == "softmax":
            a = softmax(a)
            entries.append(a)
    cache = ForwardCache(len(spec.layers), a.shape[0], entries) if train else None
    return a, cache


def backward_batch(
    spec: NetworkSpec,
    params: Parameters,
    cache: ForwardCache | None,
    probs: Tensor,
    onehot: Tensor,
) -> dict[int, tuple[Tensor, Tensor]]:
    """Parameter gradients of total cross-entropy loss over the batch.

    The softmax/cross-entropy pair is fused: the gradient at the logits is
    probs - onehot.  Gradients are summed over the batch (divide by N for
    the mean).
    """
    if cache is None or cache.n_layers != len(spec.layers) or cache.batch != probs.shape[0]:
        raise StaleCacheError("backward needs the cache from a matching train-mode forward")
    grads: dict[int, tuple[Tensor, Tensor]] = {}
    g = np.asarray(probs - onehot, dtype=np.float64)
    for i in range(len(spec.layers) - 1, -1, -1):
        layer = spec.layers[i]
        entry = cache.entries[i]
        if layer.kind == "softmax":
            continue  # fused with cross-entropy above
        if layer.kind == "dense":
            w, _ = params[i]
            grads[i] = (g.T @ entry, g.sum(axis=0))
            g = g @ w
        elif layer.kind == "flatten":
            g = g.reshape(entry)
        elif layer.kind == "dropout":
            if entry is not None:
                g = g * entry
        elif layer.kind == "maxpool2x2":
            idx, in_shape = entry
            g = _pool_backward(g, idx, in_shape)
        elif layer.kind == "relu":
            g = g * entry
        elif layer.kind == "conv2d":
            cols, in_shape = entry
            w, _ = params[i]
            g, dw, db = _conv_backward(g, cols, w, in_shape)
            grads[i] = (dw, db)
    return grads


def network_forward(
    spec: NetworkSpec,
    params: Parameters,
    x: Tensor,
    mode: str = "infer",
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, ForwardCache | None]:
    """Single-sample forward: (C, H, W) in, class probabilities out."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != tuple(spec.input_shape):
        raise ShapeMismatchError(f"input {x.shape} vs spec input {spec.input_shape}")
    probs, cache = forward_batch(spec, params, x[None], mode, rng)
    return probs[0], cache


def network_backward(
    spec: NetworkSpec,
    params: Parameters,
    cache: ForwardCache | None,
    probs: Tensor,
    onehot: Tensor,
) -> dict[int, tuple[Tensor, Tensor]]:
    """Single-sample gradients, shaped exactly like the Parameters."""
    return backward_batch(spec, params, cache, np.asarray(probs)[None], np.asarray(onehot)[None])


def _check_params(spec: NetworkSpec, params: Parameters) -> None:
    for i, (w_shape, b_shape) in spec.parameter_shapes().items():
        if i not in params:
            raise ShapeMismatchError(f"missing parameters for layer {i}")
        w, b = params[i]
        if tuple(w.shape) != w_shape or tuple(b.shape) != b_shape:
            raise ShapeMismatchError(
                f"layer {i}: have {w.shape}/{b.shape}, expected {w_shape}/{b_shape}"
            )
