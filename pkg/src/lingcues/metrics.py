"""Precision-recall curve, average precision and F1 (positive class = FAKE)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .corpus_io import Label
from .errors import LengthMismatch, NoPositives


class Confusion(NamedTuple):
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class PRCurve:
    """Sweep points in order of descending threshold, preceded by the (0, 1) anchor."""

    recall: np.ndarray
    precision: np.ndarray
    thresholds: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.recall.tolist(), self.precision.tolist()))


def _prepare(scores, labels, positive):
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise LengthMismatch(f"{scores.shape} scores vs {labels.shape} labels")
    if len(scores) == 0:
        raise NoPositives("empty score vector")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    y = labels == int(positive)
    if not y.any():
        raise NoPositives("no positive labels; precision-recall is undefined")
    return scores, y


def pr_curve(scores, labels, positive: Label = Label.FAKE) -> PRCurve:
    scores, y = _prepare(scores, labels, positive)
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], y[order]
    # last index of every group of tied scores
    ends = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    tp = np.cumsum(y)[ends].astype(np.float64)
    predicted = (ends + 1).astype(np.float64)
    precision = tp / predicted
    recall = tp / y.sum()
    return PRCurve(
        recall=np.r_[0.0, recall],
        precision=np.r_[1.0, precision],
        thresholds=np.r_[np.inf, s[ends]],
    )


def auc_pr(scores, labels, positive: Label = Label.FAKE) -> float:
    """Average precision: sum over the sweep of (R_i - R_{i-1}) * P_i."""
    curve = pr_curve(scores, labels, positive)
    return float(np.sum(np.diff(curve.recall) * curve.precision[1:]))


def confusion(predicted, truth, positive: Label = Label.FAKE) -> Confusion:
    predicted = np.asarray(predicted) == int(positive)
    truth = np.asarray(truth) == int(positive)
    if predicted.shape != truth.shape:
        raise LengthMismatch(f"{predicted.shape} predictions vs {truth.shape} labels")
    tp = int(np.sum(predicted & truth))
    fp = int(np.sum(predicted & ~truth))
    fn = int(np.sum(~predicted & truth))
    tn = int(np.sum(~predicted & ~truth))
    return Confusion(tp, fp, tn, fn)


def f1(cm: Confusion) -> float:
    """F1 = 2 * Precision * Recall / (Precision + Recall); 0 when tp = 0."""
    tp, fp, _, fn = cm
    if min(cm) < 0:
        raise ValueError("confusion counts must be nonnegative")
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)
