"""One-versus-rest linear SVMs trained by subgradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..genmodels import sample_rng
from .data import Dataset


@dataclass(frozen=True)
class HyperplaneModel:
    w: np.ndarray  # (n_features, n_classes), one hyperplane per column
    b: np.ndarray  # (n_classes,)
    reg: str
    C: float
    objective: np.ndarray  # final primal objective per class


def _signs(y: np.ndarray, n_classes: int) -> np.ndarray:
    return np.where(y[:, None] == np.arange(n_classes)[None, :], 1.0, -1.0)


def svm_objective(w, b, x, signs, reg: str, C: float) -> np.ndarray:
    """``R(w) + C * sum(hinge)`` for every class column."""
    hinge = np.maximum(0.0, 1.0 - signs * (x @ w + b)).sum(axis=0)
    penalty = 0.5 * (w * w).sum(axis=0) if reg == "l2" else np.abs(w).sum(axis=0)
    return penalty + C * hinge


def _descend(x, signs, reg, C, epochs, batch, rng, lr):
    """Mini-batch subgradient descent with AdaGrad step scaling.

    The returned iterate per class is the best (by primal objective) of the
    epoch-end iterates and the average of the second-half iterates.
    """
    n, d = x.shape
    k = signs.shape[1]
    w = np.zeros((d, k))
    b = np.zeros(k)
    # objective divided by C*n so step sizes do not depend on C or n
    lam = 1.0 / (C * n)
    acc_w = np.full((d, k), 1e-12)
    acc_b = np.full(k, 1e-12)
    avg_w, avg_b, avg_count = np.zeros((d, k)), np.zeros(k), 0
    best_obj = svm_objective(w, b, x, signs, reg, C)
    best_w, best_b = w.copy(), b.copy()

    def keep_if_better(cw, cb):
        nonlocal best_obj
        obj = svm_objective(cw, cb, x, signs, reg, C)
        better = obj < best_obj
        best_obj = np.where(better, obj, best_obj)
        best_w[:, better] = cw[:, better]
        best_b[better] = cb[better]

    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            xb, sb = x[idx], signs[idx]
            active = (sb * (xb @ w + b) < 1.0) * sb
            grad_w = lam * (w if reg == "l2" else np.sign(w)) - xb.T @ active / idx.size
            grad_b = -active.sum(axis=0) / idx.size
            acc_w += grad_w * grad_w
            acc_b += grad_b * grad_b
            w -= lr * grad_w / np.sqrt(acc_w)
            b -= lr * grad_b / np.sqrt(acc_b)
            if 2 * epoch >= epochs:
                avg_w += w
                avg_b += b
                avg_count += 1
        keep_if_better(w, b)
    if avg_count:
        keep_if_better(avg_w / avg_count, avg_b / avg_count)
    return best_w, best_b, best_obj


def train_svm(
    data: Dataset,
    reg: str = "l2",
    C: float = 1.0,
    epochs: int = 200,
    batch: int = 16,
    restarts: int = 5,
    seed: int = 0,
    lr: float = 1.0,
    n_classes: int = 4,
) -> HyperplaneModel:
    """Fit one hyperplane per class against the rest.

    Each restart reshuffles the mini-batches with its own seed; per class the
    restart with the lowest primal objective is kept.
    """
    if reg not in ("l1", "l2"):
        raise ValueError(f"unknown regularizer {reg!r}")
    if np.unique(data.y).size < 2:
        raise ValueError("SVM training needs at least two classes")
    signs = _signs(data.y, n_classes)
    best = None
    for r in range(restarts):
        w, b, obj = _descend(data.x, signs, reg, C, epochs, batch, sample_rng(seed, r), lr)
        if best is None:
            best = [w, b, obj]
            continue
        better = obj < best[2]
        best[0][:, better] = w[:, better]
        best[1][better] = b[better]
        best[2] = np.where(better, obj, best[2])
    return HyperplaneModel(best[0], best[1], reg, C, best[2])


def svm_scores(model: HyperplaneModel, x) -> np.ndarray:
    """Signed distance of standardized ``x`` to each class hyperplane.

    Works on a single vector or a matrix of rows.  A class whose weight
    vector is zero scores 0.
    """
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(model.w, axis=0)
    raw = x @ model.w + model.b
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms > 0, raw / safe, 0.0)


def degenerate_classes(model: HyperplaneModel) -> list[int]:
    return [int(c) for c in np.flatnonzero(np.linalg.norm(model.w, axis=0) == 0)]
