"""Procedural 10-class glyph dataset.

Stands in for hand-sign photos in tests and demos: class k renders the
binary code of k+1 as horizontal bands, jittered in position, intensity and
noise per sample.  Band patterns carry no left/right information, so labels
survive the horizontal flips used in augmentation.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .imaging import GRAY_SIZE, RasterImage, encode_netpbm

_BAND_ROWS = 3
_BAND_STRIDE = 5
_BAND_X0, _BAND_X1 = 4, 28  # horizontally centered span


def glyph_image(digit: int, rng: np.random.Generator) -> np.ndarray:
    """One noisy 32x32 glyph for the given class."""
    code = digit + 1  # 1..10, so every class lights at least one band
    img = rng.normal(0.18, 0.10, (GRAY_SIZE, GRAY_SIZE))
    dy = rng.integers(-2, 3)
    dx = rng.integers(-2, 3)
    for band in range(4):
        if not (code >> (3 - band)) & 1:
            continue
        level = rng.uniform(0.35, 0.75)
        r0 = 4 + band * _BAND_STRIDE + dy
        for r in range(max(r0, 0), min(r0 + _BAND_ROWS, GRAY_SIZE)):
            c0 = max(_BAND_X0 + dx, 0)
            c1 = min(_BAND_X1 + dx, GRAY_SIZE)
            img[r, c0:c1] = level + rng.normal(0.0, 0.07, c1 - c0)
    # bright distractor blobs so backgrounds are not a free cue
    for _ in range(rng.integers(2, 4)):
        br = rng.integers(0, GRAY_SIZE - 3)
        bc = rng.integers(0, GRAY_SIZE - 3)
        img[br : br + 3, bc : bc + 3] += rng.uniform(0.25, 0.5)
    return np.clip(img, 0.0, 1.0)


def make_dataset(
    train_per_class: int, test_per_class: int, seed: int = 0
) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Seeded train/test arrays: ((xtr, ytr), (xte, yte))."""
    rng = np.random.default_rng(seed)
    xtr, ytr, xte, yte = [], [], [], []
    for digit in range(10):
        for _ in range(train_per_class):
            xtr.append(glyph_image(digit, rng))
            ytr.append(digit)
        for _ in range(test_per_class):
            xte.append(glyph_image(digit, rng))
            yte.append(digit)
    return (
        (np.stack(xtr), np.array(ytr, dtype=np.int64)),
        (np.stack(xte), np.array(yte, dtype=np.int64)),
    )


def write_dataset_tree(root: str | Path, per_class: int, seed: int = 0) -> int:
    """Materialize a class-per-directory PGM tree; returns files written."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    count = 0
    for digit in range(10):
        class_dir = root / str(digit)
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            img = glyph_image(digit, rng)
            raster = RasterImage.from_array(np.floor(img * 255.0 + 0.5).astype(np.uint8))
            (class_dir / f"glyph_{i:04d}.pgm").write_bytes(encode_netpbm(raster))
            count += 1
    return count
