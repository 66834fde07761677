"""Labeled sign-digit images from a directory tree, split and batched.

Layout convention: ``root/<digit 0..9>/*.pgm|*.ppm``.  Files are decoded and
pushed through the preprocessing chain at load time, so a manifest holds
ready-to-train 32x32 images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import imaging


class DatasetError(ValueError):
    pass


class UnknownClassDirectoryError(DatasetError):
    pass


class EmptyDatasetError(DatasetError):
    pass


class ClassTooSmallError(DatasetError):
    pass


@dataclass(frozen=True)
class LabeledImage:
    image: np.ndarray  # (32, 32) float64 in [0, 1]
    label: int
    path: str

    def __post_init__(self):
        if not 0 <= self.label <= 9:
            raise ValueError(f"label must be a digit, got {self.label}")


@dataclass
class DatasetManifest:
    entries: list[LabeledImage]
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (path, reason)

    def per_class_counts(self) -> list[int]:
        counts = [0] * 10
        for e in self.entries:
            counts[e.label] += 1
        return counts

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.stack([e.image for e in self.entries])
        y = np.array([e.label for e in self.entries], dtype=np.int64)
        return x, y

    def to_csv(self) -> str:
        lines = ["path,label"]
        lines += [f"{e.path},{e.label}" for e in self.entries]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 70 / 320  # the published per-class 250/70 counts
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must lie in (0, 1)")


def load_dataset(
    root: str | Path, th: imaging.HsvThreshold = imaging.DEFAULT_SKIN_THRESHOLD
) -> DatasetManifest:
    """Build a manifest from a class-per-directory tree.

    Undecodable files are recorded in ``manifest.skipped`` and loading
    continues; an unrecognized class directory or a fully empty tree aborts.
    """
    root = Path(root)
    if not root.is_dir():
        raise EmptyDatasetError(f"{root} is not a directory")
    digit_names = {str(d) for d in range(10)}
    bad_dirs = sorted(p.name for p in root.iterdir() if p.is_dir() and p.name not in digit_names)
    if bad_dirs:
        raise UnknownClassDirectoryError(f"non-digit class directories: {', '.join(bad_dirs)}")

    entries: list[LabeledImage] = []
    skipped: list[tuple[str, str]] = []
    for digit in range(10):
        class_dir = root / str(digit)
        if not class_dir.is_dir():
            continue
        paths = sorted(p for p in class_dir.iterdir() if p.suffix in (".pgm", ".ppm"))
        for p in paths:
            try:
                img = imaging.preprocess(imaging.decode_netpbm(p.read_bytes()), th)
            except imaging.NetpbmError as exc:
                skipped.append((str(p), str(exc)))
                continue
            entries.append(LabeledImage(img, digit, str(p)))
    if not entries:
        raise EmptyDatasetError(f"no decodable .pgm/.ppm files under {root}")
    return DatasetManifest(entries, skipped)


def stratified_split(
    manifest: DatasetManifest, spec: SplitSpec = SplitSpec()
) -> tuple[list[int], list[int]]:
    """Per-class seeded shuffle; the last ceil(fraction * n) indices go to test."""
    rng = np.random.default_rng(spec.seed)
    by_class: list[list[int]] = [[] for _ in range(10)]
    for i, e in enumerate(manifest.entries):
        by_class[e.label].append(i)
    train: list[int] = []
    test: list[int] = []
    for digit, idxs in enumerate(by_class):
        if len(idxs) < 2:
            raise ClassTooSmallError(f"class {digit} has {len(idxs)} samples, needs >= 2")
        order = rng.permutation(len(idxs))
        shuffled = [idxs[j] for j in order]
        n_test = int(np.ceil(len(idxs) * spec.test_fraction))
        train += shuffled[: len(idxs) - n_test]
        test += shuffled[len(idxs) - n_test :]
    return train, test


def batches(indices, batch_size: int, seed: int, epoch: int) -> list[list[int]]:
    """Shuffle with a generator seeded by seed XOR epoch, chunk, keep the tail."""
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    idx = list(indices)
    rng = np.random.default_rng(seed ^ epoch)
    order = rng.permutation(len(idx))
    shuffled = [idx[j] for j in order]
    return [shuffled[i : i + batch_size] for i in range(0, len(shuffled), batch_size)]
