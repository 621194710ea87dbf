"""Binary-classification metrics computed from first principles.

Conventions, fixed here so results are reproducible:

* AUC is the Mann-Whitney rank statistic: the fraction of
  (positive, negative) pairs ranked concordantly, with ties between a
  positive and a negative score counted as 1/2.
* Average precision is the step-wise sum (no interpolation): walk the
  samples in descending score order (ties broken by original index via a
  stable sort) and average precision-at-k over the positions k that hold
  a positive.
* Accuracy and F1 classify a sample positive when score >= threshold.
  F1 is defined as 0 (not NaN) when precision + recall is 0.
* ROC points step once per distinct score value, so tied scores form a
  single diagonal segment and trapezoidal area over the exported points
  reproduces the rank-statistic AUC.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateLabelsError, ShapeError


def _validated(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.ndim != 1:
        raise ShapeError("scores and labels must be 1-D")
    if s.shape[0] != y.shape[0]:
        raise ShapeError(f"length mismatch: {s.shape[0]} scores vs {y.shape[0]} labels")
    if s.shape[0] == 0:
        raise ShapeError("scores and labels must be non-empty")
    if not np.all((y == 0) | (y == 1)):
        raise ShapeError("labels must be 0 or 1")
    return s, y.astype(np.int64)


def _require_both_classes(y: np.ndarray) -> tuple[int, int]:
    n_pos = int(y.sum())
    n_neg = int(y.shape[0] - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelsError(
            f"ranking metrics need both classes, got {n_pos} positives / {n_neg} negatives"
        )
    return n_pos, n_neg


def _average_ranks(s: np.ndarray) -> np.ndarray:
    """1-based ranks of s, ascending, with tied values sharing their mean rank."""
    n = s.shape[0]
    order = np.argsort(s, kind="stable")
    sv = s[order]
    first = np.r_[True, sv[1:] != sv[:-1]]
    group = np.cumsum(first) - 1
    counts = np.bincount(group)
    ends = np.cumsum(counts)
    starts = ends - counts + 1
    mean_rank = (starts + ends) / 2.0
    ranks = np.empty(n)
    ranks[order] = mean_rank[group]
    return ranks


def roc_auc(scores, labels) -> float:
    """Rank-statistic AUC with half credit for score ties."""
    s, y = _validated(scores, labels)
    n_pos, n_neg = _require_both_classes(y)
    rank_sum = _average_ranks(s)[y == 1].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def average_precision(scores, labels) -> float:
    """Step-wise average precision over descending scores."""
    s, y = _validated(scores, labels)
    n_pos, _ = _require_both_classes(y)
    order = np.argsort(-s, kind="stable")
    ys = y[order]
    precision_at_k = np.cumsum(ys) / np.arange(1, s.shape[0] + 1)
    return float(precision_at_k[ys == 1].sum() / n_pos)


def roc_points(scores, labels) -> np.ndarray:
    """(fpr, tpr) pairs from (0, 0) to (1, 1), one step per distinct score."""
    s, y = _validated(scores, labels)
    n_pos, n_neg = _require_both_classes(y)
    order = np.argsort(-s, kind="stable")
    ys = y[order]
    sv = s[order]
    last_of_group = np.r_[sv[1:] != sv[:-1], True]
    tp = np.cumsum(ys)[last_of_group]
    k = np.arange(1, s.shape[0] + 1)[last_of_group]
    fp = k - tp
    pts = np.column_stack([fp / n_neg, tp / n_pos])
    return np.vstack([[0.0, 0.0], pts])


def accuracy(scores, labels, threshold: float = 0.5) -> float:
    """Fraction of samples classified correctly at the threshold."""
    s, y = _validated(scores, labels)
    return float(np.mean((s >= threshold).astype(np.int64) == y))


def f1(scores, labels, threshold: float = 0.5) -> float:
    """F1 at the threshold; 0.0 when there are no true or predicted positives."""
    s, y = _validated(scores, labels)
    pred = s >= threshold
    tp = int(np.sum(pred & (y == 1)))
    fp = int(np.sum(pred & (y == 0)))
    fn = int(np.sum(~pred & (y == 1)))
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 0.0
    return 2.0 * tp / denom


@dataclass(frozen=True, eq=False)
class EvalReport:
    """The four headline metrics plus the ROC polyline and class counts."""

    accuracy: float
    auc: float
    average_precision: float
    f1: float
    roc_points: np.ndarray
    n_pos: int
    n_neg: int


def evaluate(scores, labels, threshold: float = 0.5) -> EvalReport:
    """Compute accuracy, AUC, average precision and F1 in one pass.

    Requires at least one positive and one negative label (the ranking
    metrics are undefined otherwise); for single-class data call
    :func:`accuracy` / :func:`f1` directly.
    """
    s, y = _validated(scores, labels)
    n_pos, n_neg = _require_both_classes(y)
    return EvalReport(
        accuracy=accuracy(s, y, threshold),
        auc=roc_auc(s, y),
        average_precision=average_precision(s, y),
        f1=f1(s, y, threshold),
        roc_points=roc_points(s, y),
        n_pos=n_pos,
        n_neg=n_neg,
    )


def export_roc(report: EvalReport, path: str | Path) -> None:
    """Write the ROC polyline as ``fpr,tpr`` rows (text, LF endings)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fpr,tpr\n")
        for fpr, tpr in report.roc_points:
            fh.write(f"{float(fpr)!r},{float(tpr)!r}\n")
