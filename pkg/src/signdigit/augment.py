"""Training-set augmentation: rotation, horizontal shear, horizontal flip.

All transforms operate on the 32x32 normalized grayscale images, inverse-map
each output pixel through the affine transform about the image center
(15.5, 15.5), sample bilinearly and fill with 0 outside the frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .imaging import GRAY_SIZE

CENTER = (GRAY_SIZE - 1) / 2.0  # 15.5


@dataclass(frozen=True)
class AugmentPolicy:
    rotate_max: float = 30.0
    shear_max: float = 0.2
    flip_prob: float = 0.5
    apply_prob: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.rotate_max < 360:
            raise ValueError("rotate_max must lie in [0, 360)")
        if self.shear_max < 0:
            raise ValueError("shear_max must be >= 0")
        for p in (self.flip_prob, self.apply_prob):
            if not 0 <= p <= 1:
                raise ValueError("probabilities must lie in [0, 1]")


def _warp(img: np.ndarray, src_x: np.ndarray, src_y: np.ndarray) -> np.ndarray:
    """Bilinear gather at fractional source coordinates, 0 outside the frame."""
    if img.shape != (GRAY_SIZE, GRAY_SIZE):
        raise ValueError(f"augmentation expects a (32, 32) image, got {img.shape}")
    x0 = np.floor(src_x).astype(int)
    y0 = np.floor(src_y).astype(int)
    fx = src_x - x0
    fy = src_y - y0

    out = np.zeros_like(img)
    for dy, dx, w in (
        (0, 0, (1 - fy) * (1 - fx)),
        (0, 1, (1 - fy) * fx),
        (1, 0, fy * (1 - fx)),
        (1, 1, fy * fx),
    ):
        xi = x0 + dx
        yi = y0 + dy
        inside = (xi >= 0) & (xi < GRAY_SIZE) & (yi >= 0) & (yi < GRAY_SIZE)
        vals = img[np.clip(yi, 0, GRAY_SIZE - 1), np.clip(xi, 0, GRAY_SIZE - 1)]
        out += w * np.where(inside, vals, 0.0)
    return np.clip(out, 0.0, 1.0)


_GRID_Y, _GRID_X = np.mgrid[0:GRAY_SIZE, 0:GRAY_SIZE].astype(np.float64)


def rotate(img: np.ndarray, theta: float) -> np.ndarray:
    """Rotate by theta degrees about the image center."""
    rad = math.radians(theta)
    c, s = math.cos(rad), math.sin(rad)
    dx = _GRID_X - CENTER
    dy = _GRID_Y - CENTER
    src_x = dx * c - dy * s + CENTER
    src_y = dx * s + dy * c + CENTER
    return _warp(img, src_x, src_y)


def shear(img: np.ndarray, k: float) -> np.ndarray:
    """Horizontal shear: output (x, y) samples source (x + k*(y - 15.5), y)."""
    src_x = _GRID_X + k * (_GRID_Y - CENTER)
    return _warp(img, src_x, _GRID_Y)


def hflip(img: np.ndarray) -> np.ndarray:
    """Mirror columns: c -> 31 - c."""
    return img[:, ::-1].copy()


def random_augment(img: np.ndarray, policy: AugmentPolicy, position: int) -> np.ndarray:
    """Seeded augmentation, a pure function of (image, policy, position).

    Draw order: apply-rotation Bernoulli, theta if applied; apply-shear
    Bernoulli, factor if applied; flip Bernoulli.  Transforms compose
    rotate -> shear -> flip.
    """
    rng = np.random.default_rng((policy.seed, position))
    out = img
    if rng.random() < policy.apply_prob:
        out = rotate(out, rng.uniform(0.0, policy.rotate_max))
    if rng.random() < policy.apply_prob:
        out = shear(out, rng.uniform(-policy.shear_max, policy.shear_max))
    if rng.random() < policy.flip_prob:
        out = hflip(out)
    return out.copy() if out is img else out


def epoch_stream_position(epoch: int, sample_index: int) -> int:
    """Pack (epoch, sample) into the single stream position the policy keys on."""
    return (epoch << 32) | sample_index
