"""Evaluation suite: confusion matrix, accuracy, precision/recall, and
one-vs-all ROC curves with trapezoidal AUC.

A confusion matrix is a (10, 10) integer array with rows = actual class and
columns = predicted class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

NUM_CLASSES = 10


class LengthMismatchError(ValueError):
    pass


class EmptyMatrixError(ValueError):
    pass


class ClassAbsentError(ValueError):
    pass


@dataclass(frozen=True)
class RocCurve:
    points: tuple[tuple[float, float], ...]  # (fpr, tpr), (0,0) .. (1,1)
    auc: float


def confusion(preds, labels) -> np.ndarray:
    preds = np.asarray(preds, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if preds.shape != labels.shape or preds.ndim != 1 or len(preds) == 0:
        raise LengthMismatchError("preds and labels must be equal-length, non-empty")
    cm = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    np.add.at(cm, (labels, preds), 1)
    return cm


def accuracy(cm: np.ndarray) -> float:
    total = int(cm.sum())
    if total == 0:
        raise EmptyMatrixError("confusion matrix has no samples")
    return float(np.trace(cm)) / total


def precision_recall(cm: np.ndarray, k: int) -> tuple[float, float]:
    """Per-class precision and recall; 0 when the denominator is empty."""
    col = int(cm[:, k].sum())
    row = int(cm[k, :].sum())
    tp = int(cm[k, k])
    precision = tp / col if col else 0.0
    recall = tp / row if row else 0.0
    return precision, recall


def roc_one_vs_all(scores: np.ndarray, labels, k: int) -> RocCurve:
    """ROC of class k against the rest, sweeping descending unique scores.

    scores is (N, 10) of softmax probabilities; a sample is predicted
    positive at threshold t when scores[:, k] >= t.  Tied scores flip
    together, so constant scores give exactly the chance diagonal.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.ndim != 2 or scores.shape[0] != len(labels):
        raise LengthMismatchError("scores must be (N, 10) aligned with labels")
    s = scores[:, k]
    pos = labels == k
    p = int(pos.sum())
    n = int(len(labels) - p)
    if p == 0 or n == 0:
        raise ClassAbsentError(f"class {k} needs both positives and negatives")

    points = [(0.0, 0.0)]
    for t in sorted(set(s.tolist()), reverse=True):
        predicted = s >= t
        tpr = float((predicted & pos).sum()) / p
        fpr = float((predicted & ~pos).sum()) / n
        points.append((fpr, tpr))

    auc = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        auc += (x1 - x0) * (y0 + y1) / 2.0
    return RocCurve(tuple(points), auc)


def confusion_to_csv(cm: np.ndarray) -> str:
    return "\n".join(",".join(str(int(v)) for v in row) for row in cm) + "\n"


def roc_to_csv(curve: RocCurve) -> str:
    lines = ["fpr,tpr"]
    lines += [f"{fpr!r},{tpr!r}" for fpr, tpr in curve.points]
    return "\n".join(lines) + "\n"


def export_report(
    cm: np.ndarray,
    curves: dict[int, RocCurve],
    history_csv: str,
    out_dir: str | Path,
) -> list[Path]:
    """Write confusion/ROC/history CSVs plus a JSON summary; returns paths.

    Output is deterministic: identical inputs produce identical bytes.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    p = out / "confusion.csv"
    p.write_text(confusion_to_csv(cm))
    written.append(p)

    for k in sorted(curves):
        p = out / f"roc_class_{k}.csv"
        p.write_text(roc_to_csv(curves[k]))
        written.append(p)

    p = out / "history.csv"
    p.write_text(history_csv)
    written.append(p)

    per_class = {}
    for k in range(NUM_CLASSES):
        precision, recall = precision_recall(cm, k)
        entry = {"precision": precision, "recall": recall}
        if k in curves:
            entry["auc"] = curves[k].auc
        per_class[str(k)] = entry
    summary = {"accuracy": accuracy(cm), "per_class": per_class}
    p = out / "summary.json"
    p.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(p)
    return written
