"""Standardization, stratified folds and classification metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..genmodels import sample_rng

CLASSES = ("PA", "CL", "ER", "CFG")


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) / self.std


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray  # standardized features, one row per sample
    y: np.ndarray  # integer labels indexing CLASSES
    standardizer: Standardizer

    def subset(self, idx) -> "Dataset":
        return Dataset(self.x[idx], self.y[idx], self.standardizer)


def standardize_fit(rows, labels=None, min_std: float = 1e-12) -> Dataset:
    """Fit per-column mean/std on ``rows`` and return them standardized.

    Columns with std below ``min_std`` keep std 1, so constant features are
    centered to zero instead of blowing up.
    """
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("standardize_fit needs at least two feature rows")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std < min_std, 1.0, std)
    st = Standardizer(mean, std)
    y = np.zeros(x.shape[0], dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
    return Dataset(st.transform(x), y, st)


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> np.ndarray:
    """Fold id per sample.  Members of each class are shuffled and dealt
    round-robin, continuing the deal across classes so folds stay balanced."""
    labels = np.asarray(labels)
    folds = np.empty(labels.size, dtype=np.int64)
    rng = sample_rng(seed)
    pos = 0
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if members.size < k:
            raise ValueError(f"class {c} has {members.size} members, fewer than k={k}")
        members = rng.permutation(members)
        folds[members] = (pos + np.arange(members.size)) % k
        pos += members.size
    return folds


def holdout_split(labels, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Stratified 50/50 split into (train, holdout) index arrays."""
    folds = stratified_kfold(labels, 2, seed)
    return np.flatnonzero(folds == 0), np.flatnonzero(folds == 1)


def accuracy(y_true, y_pred) -> float:
    return float(np.mean(np.asarray(y_true) == np.asarray(y_pred)))


def per_class_metrics(y_true, y_pred, n_classes: int = len(CLASSES)) -> dict[str, dict[str, float]]:
    """Precision, recall and F1 per class plus their macro average."""
    y_true, y_pred = np.asarray(y_true), np.asarray(y_pred)
    out = {}
    for c in range(n_classes):
        tp = int(np.sum((y_pred == c) & (y_true == c)))
        fp = int(np.sum((y_pred == c) & (y_true != c)))
        fn = int(np.sum((y_pred != c) & (y_true == c)))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        out[CLASSES[c]] = {"precision": precision, "recall": recall, "f1": f1}
    out["macro"] = {
        key: float(np.mean([out[CLASSES[c]][key] for c in range(n_classes)]))
        for key in ("precision", "recall", "f1")
    }
    return out
