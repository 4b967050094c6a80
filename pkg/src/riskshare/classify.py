"""Multinomial-logistic baseline for incident-type probabilities.

The engine only needs a probability vector over incident types; any
upstream classifier may supply it.  This module provides the softmax
baseline so the pipeline runs end-to-end on user data, plus the
balanced-accuracy metric used to judge such classifiers.

Training minimizes l2-penalized cross-entropy with full-batch gradient
descent and a backtracking line search: deterministic, dependency-free,
and initialized at zero.  An intercept column is prepended internally
and left unpenalized.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .lossmodel import IncidentMix

__all__ = [
    "MlrModel",
    "LabeledDataset",
    "BalancedAccuracy",
    "softmax_probs",
    "train_mlr",
    "balanced_accuracy",
    "read_dataset_csv",
]


@dataclass(frozen=True)
class MlrModel:
    """Per-class weight vectors; column 0 is the intercept."""

    coefficients: np.ndarray  # shape (K, F + 1)
    converged: bool = True
    iterations: int = 0

    def __post_init__(self) -> None:
        coef = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", coef)
        if coef.ndim != 2 or coef.shape[0] < 2 or coef.shape[1] < 2:
            raise ValueError("coefficients must be a (K >= 2, F+1 >= 2) matrix")
        if not np.isfinite(coef).all():
            raise ValueError("coefficients must be finite")

    @property
    def n_classes(self) -> int:
        return self.coefficients.shape[0]

    @property
    def n_features(self) -> int:
        return self.coefficients.shape[1] - 1

    def to_json(self) -> str:
        return json.dumps({"coefficients": self.coefficients.tolist()})

    @staticmethod
    def from_json(text: str) -> "MlrModel":
        return MlrModel(coefficients=np.array(json.loads(text)["coefficients"]))


@dataclass(frozen=True)
class LabeledDataset:
    """Feature rows with class labels in 1..K."""

    features: np.ndarray  # (n, F)
    labels: np.ndarray  # (n,), values in 1..K
    n_classes: int

    def __post_init__(self) -> None:
        x = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        if x.ndim != 2 or len(y) != x.shape[0]:
            raise ValueError("features must be (n, F) with one label per row")
        if not np.isfinite(x).all():
            raise ValueError("features must be finite")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")
        if y.min() < 1 or y.max() > self.n_classes:
            raise ValueError(f"labels must lie in 1..{self.n_classes}")


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_probs(model: MlrModel, x) -> IncidentMix:
    """Class probabilities for one feature vector, max-shift stabilized."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {x.shape}")
    scores = model.coefficients @ np.concatenate([[1.0], x])
    probs = _softmax_rows(scores[None, :])[0]
    return IncidentMix(probs=tuple(probs / probs.sum()))


def train_mlr(
    data: LabeledDataset, l2: float = 0.01, max_iter: int = 500
) -> MlrModel:
    """Fit the softmax model; converged when the gradient inf-norm <= 1e-6.

    The l2 penalty applies to the non-intercept weights only, so the
    optimum is unique and the run is deterministic from the zero start.
    """
    present = np.unique(data.labels)
    if len(present) < 2:
        raise ValueError("training data must contain at least 2 classes")
    n, k = len(data.labels), data.n_classes
    x = np.hstack([np.ones((n, 1)), data.features])
    onehot = np.zeros((n, k))
    onehot[np.arange(n), data.labels - 1] = 1.0

    def loss_grad(w: np.ndarray) -> tuple[float, np.ndarray]:
        p = _softmax_rows(x @ w.T)
        nll = -float(np.log(np.clip(p[onehot == 1], 1e-300, None)).sum()) / n
        penalty = 0.5 * l2 * float((w[:, 1:] ** 2).sum())
        grad = (p - onehot).T @ x / n
        grad[:, 1:] += l2 * w[:, 1:]
        return nll + penalty, grad

    w = np.zeros((k, x.shape[1]))
    value, grad = loss_grad(w)
    it = 0
    while it < max_iter and np.abs(grad).max() > 1e-6:
        it += 1
        step = 1.0
        descent = float((grad**2).sum())
        accepted = False
        while step > 1e-16:
            trial = w - step * grad
            trial_value, trial_grad = loss_grad(trial)
            if trial_value <= value - 0.5 * step * descent:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break  # stalled at numerical precision
        w, value, grad = trial, trial_value, trial_grad
    converged = bool(np.abs(grad).max() <= 1e-6)
    return MlrModel(coefficients=w, converged=converged, iterations=it)


@dataclass(frozen=True)
class BalancedAccuracy:
    """Mean over classes of (sensitivity + specificity) / 2, one-vs-all.

    Classes absent from the truth vector have undefined sensitivity; they
    are listed in ``skipped`` and the mean renormalizes over the rest.
    """

    score: float
    per_class: dict[int, float]
    skipped: tuple[int, ...]


def balanced_accuracy(y_true, y_pred, k: int) -> BalancedAccuracy:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if len(y_true) == 0:
        raise ValueError("empty input")
    if len(y_true) != len(y_pred):
        raise ValueError("y_true and y_pred must have equal length")
    for arr, name in ((y_true, "y_true"), (y_pred, "y_pred")):
        if arr.min() < 1 or arr.max() > k:
            raise ValueError(f"{name} labels must lie in 1..{k}")
    per_class: dict[int, float] = {}
    skipped: list[int] = []
    for cls in range(1, k + 1):
        pos = y_true == cls
        neg = ~pos
        if not pos.any():
            skipped.append(cls)
            continue
        sens = float((y_pred[pos] == cls).mean())
        # with a single class in y_true there are no negatives to judge
        spec = float((y_pred[neg] != cls).mean()) if neg.any() else 1.0
        per_class[cls] = 0.5 * (sens + spec)
    if not per_class:
        raise ValueError("no class of 1..k appears in y_true")
    score = float(np.mean(list(per_class.values())))
    return BalancedAccuracy(
        score=score, per_class=per_class, skipped=tuple(skipped)
    )


def read_dataset_csv(path: str) -> LabeledDataset:
    """Read a dataset CSV with header f1..fF,label."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[-1].strip() != "label":
            raise ValueError("expected header f1..fF,label")
        n_feat = len(header) - 1
        if n_feat < 1:
            raise ValueError("need at least one feature column")
        rows, labels = [], []
        for i, row in enumerate(reader, start=2):
            if len(row) != n_feat + 1:
                raise ValueError(f"line {i}: expected {n_feat + 1} columns")
            rows.append([float(v) for v in row[:-1]])
            labels.append(int(row[-1]))
    if not rows:
        raise ValueError("no data rows")
    return LabeledDataset(
        features=np.array(rows), labels=np.array(labels), n_classes=max(labels)
    )
