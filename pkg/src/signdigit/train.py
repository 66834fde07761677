"""RMSProp training loop with categorical cross-entropy.

One optimizer step per mini-batch using batch-mean gradients; optional
on-the-fly augmentation keyed by (epoch, sample index) so runs are exactly
reproducible from the config seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import nn
from .augment import AugmentPolicy, epoch_stream_position, random_augment
from .dataset import EmptyDatasetError, batches
from .imaging import validate_gray32

PROB_FLOOR = 1e-12  # keeps -log finite; the fused backward never clamps


class MalformedOnehotError(ValueError):
    pass


@dataclass(frozen=True)
class RmsPropState:
    v: dict[int, tuple[np.ndarray, np.ndarray]]
    lr: float = 0.001
    rho: float = 0.9
    eps: float = 1e-8

    def __post_init__(self):
        # lr == 0 is allowed as the explicit "frozen optimizer" degenerate case
        if self.lr < 0 or not 0 <= self.rho < 1 or self.eps <= 0:
            raise ValueError("need lr >= 0, rho in [0, 1), eps > 0")

    @classmethod
    def zeros(cls, params: nn.Parameters, **kwargs) -> "RmsPropState":
        v = {i: (np.zeros_like(w), np.zeros_like(b)) for i, (w, b) in params.items()}
        return cls(v=v, **kwargs)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0
    augment: bool = False
    policy: AugmentPolicy | None = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float

    def __post_init__(self):
        for acc in (self.train_acc, self.val_acc):
            if not 0 <= acc <= 1:
                raise ValueError(f"accuracy {acc} outside [0, 1]")
        if self.train_loss < 0 or self.val_loss < 0:
            raise ValueError("losses must be >= 0")


def onehot(label: int, num_classes: int = 10) -> np.ndarray:
    y = np.zeros(num_classes)
    y[label] = 1.0
    return y


def cross_entropy(probs: np.ndarray, target: np.ndarray) -> float:
    """-sum(y * log(max(p, 1e-12))) for a one-hot target."""
    target = np.asarray(target, dtype=np.float64)
    if target.ndim != 1 or np.count_nonzero(target == 1.0) != 1 or target.sum() != 1.0:
        raise MalformedOnehotError("target must be one-hot")
    p = np.maximum(np.asarray(probs, dtype=np.float64), PROB_FLOOR)
    return float(-(target * np.log(p)).sum())


def rmsprop_step(
    params: nn.Parameters, grads: dict[int, tuple[np.ndarray, np.ndarray]], state: RmsPropState
) -> tuple[nn.Parameters, RmsPropState]:
    """v <- rho*v + (1-rho)*g^2;  w <- w - lr*g/(sqrt(v) + eps).  Pure update."""
    new_params: nn.Parameters = {}
    new_v: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for i, (w, b) in params.items():
        gw, gb = grads[i]
        if gw.shape != w.shape or gb.shape != b.shape:
            raise nn.ShapeMismatchError(f"layer {i}: gradient shape mismatch")
        vw, vb = state.v[i]
        vw = state.rho * vw + (1 - state.rho) * gw * gw
        vb = state.rho * vb + (1 - state.rho) * gb * gb
        new_params[i] = (w - state.lr * gw / (np.sqrt(vw) + state.eps),
                         b - state.lr * gb / (np.sqrt(vb) + state.eps))
        new_v[i] = (vw, vb)
    return new_params, replace(state, v=new_v)


def _batch_loss_acc(probs: np.ndarray, labels: np.ndarray) -> tuple[float, int]:
    p = np.maximum(probs[np.arange(len(labels)), labels], PROB_FLOOR)
    return float(-np.log(p).sum()), int((probs.argmax(axis=1) == labels).sum())


def train_epoch(
    spec: nn.NetworkSpec,
    params: nn.Parameters,
    state: RmsPropState,
    train_set: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    epoch: int,
) -> tuple[nn.Parameters, RmsPropState, float, float]:
    """One pass over the training set; returns mean loss/accuracy over the
    (augmented) samples as seen during the pass."""
    x, y = train_set
    n = len(x)
    if n == 0:
        raise EmptyDatasetError("training set is empty")
    policy = config.policy or AugmentPolicy(seed=config.seed)
    drop_rng = np.random.default_rng((config.seed, epoch, 0xD0))

    loss_sum = 0.0
    hit_sum = 0
    for batch in batches(range(n), config.batch_size, config.seed, epoch):
        if config.augment:
            imgs = [
                random_augment(x[i], policy, epoch_stream_position(epoch, i)) for i in batch
            ]
        else:
            imgs = [x[i] for i in batch]
        xb = np.stack(imgs)[:, None, :, :]
        yb = y[batch]
        probs, cache = nn.forward_batch(spec, params, xb, mode="train", rng=drop_rng)
        loss, hits = _batch_loss_acc(probs, yb)
        loss_sum += loss
        hit_sum += hits
        target = np.zeros_like(probs)
        target[np.arange(len(yb)), yb] = 1.0
        grads = nn.backward_batch(spec, params, cache, probs, target)
        grads = {i: (gw / len(yb), gb / len(yb)) for i, (gw, gb) in grads.items()}
        params, state = rmsprop_step(params, grads, state)
    return params, state, loss_sum / n, hit_sum / n


def evaluate(
    spec: nn.NetworkSpec,
    params: nn.Parameters,
    x: np.ndarray,
    y: np.ndarray,
    batch_size: int = 256,
) -> tuple[float, float]:
    """Mean loss and accuracy in infer mode (dropout inactive)."""
    if len(x) == 0:
        raise EmptyDatasetError("evaluation set is empty")
    loss_sum = 0.0
    hit_sum = 0
    for start in range(0, len(x), batch_size):
        xb = x[start : start + batch_size][:, None, :, :]
        yb = y[start : start + batch_size]
        probs, _ = nn.forward_batch(spec, params, xb, mode="infer")
        loss, hits = _batch_loss_acc(probs, yb)
        loss_sum += loss
        hit_sum += hits
    return loss_sum / len(x), hit_sum / len(x)


def fit(
    spec: nn.NetworkSpec,
    split: tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]],
    config: TrainConfig,
    state: RmsPropState | None = None,
) -> tuple[nn.Parameters, list[EpochRecord]]:
    """Train for config.epochs, evaluating the validation set after each."""
    (xtr, ytr), (xval, yval) = split
    params = nn.init_params(spec, config.seed)
    if state is None:
        state = RmsPropState.zeros(params)
    history: list[EpochRecord] = []
    for epoch in range(config.epochs):
        params, state, tr_loss, tr_acc = train_epoch(
            spec, params, state, (xtr, ytr), config, epoch
        )
        val_loss, val_acc = evaluate(spec, params, xval, yval)
        history.append(EpochRecord(epoch, tr_loss, tr_acc, val_loss, val_acc))
    return params, history


def predict(spec: nn.NetworkSpec, params: nn.Parameters, image: np.ndarray) -> tuple[int, np.ndarray]:
    """Classify one 32x32 image; ties resolve to the lowest class index."""
    img = validate_gray32(image)
    probs, _ = nn.network_forward(spec, params, img[None], mode="infer")
    return int(np.argmax(probs)), probs


def history_to_csv(history: list[EpochRecord]) -> str:
    lines = ["epoch,train_loss,train_acc,val_loss,val_acc"]
    for r in history:
        lines.append(f"{r.epoch},{r.train_loss!r},{r.train_acc!r},{r.val_loss!r},{r.val_acc!r}")
    return "\n".join(lines) + "\n"
