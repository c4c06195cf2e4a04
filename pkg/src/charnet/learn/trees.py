"""CART decision trees, random forests and SAMME AdaBoost."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..genmodels import sample_rng
from .data import Dataset


@dataclass
class DecisionTree:
    """Binary tree in flat arrays; ``feature[i] < 0`` marks a leaf."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[np.ndarray] = field(default_factory=list)

    def _add(self, dist: np.ndarray) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(dist)
        return len(self.feature) - 1

    @property
    def depth(self) -> int:
        def walk(i):
            return 0 if self.feature[i] < 0 else 1 + max(walk(self.left[i]), walk(self.right[i]))
        return walk(0)

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.empty((x.shape[0], self.value[0].size))
        stack = [(0, np.arange(x.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if self.feature[node] < 0:
                out[rows] = self.value[node]
                continue
            go_left = x[rows, self.feature[node]] <= self.threshold[node]
            stack.append((self.left[node], rows[go_left]))
            stack.append((self.right[node], rows[~go_left]))
        return out

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.predict_proba(x).argmax(axis=1)


def _best_split(x, onehot_w, features, min_leaf):
    """Lowest weighted Gini split over ``features``; None if no valid split."""
    xs = x[:, features]
    order = np.argsort(xs, axis=0, kind="stable")
    sorted_x = np.take_along_axis(xs, order, axis=0)
    cum = np.cumsum(onehot_w[order], axis=0)  # (m, f, K)
    total = cum[-1]
    left, right = cum[:-1], total[None] - cum[:-1]
    wl, wr = left.sum(axis=2), right.sum(axis=2)
    cnt = np.arange(1, xs.shape[0])[:, None]
    valid = (sorted_x[1:] > sorted_x[:-1]) & (cnt >= min_leaf) & (xs.shape[0] - cnt >= min_leaf)
    with np.errstate(divide="ignore", invalid="ignore"):
        gl = wl - (left * left).sum(axis=2) / wl
        gr = wr - (right * right).sum(axis=2) / wr
    score = np.where(valid & (wl > 0) & (wr > 0), gl + gr, np.inf)
    flat = int(np.argmin(score))
    i, j = divmod(flat, len(features))
    if not np.isfinite(score[i, j]):
        return None
    return features[j], 0.5 * (sorted_x[i, j] + sorted_x[i + 1, j]), score[i, j]


def fit_tree(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    sample_weight: np.ndarray | None = None,
    max_depth: int | None = None,
    max_features: int | None = None,
    min_leaf: int = 1,
    rng: np.random.Generator | None = None,
) -> DecisionTree:
    """Grow a Gini CART tree until nodes are pure, smaller than two samples,
    or ``max_depth`` is reached.

    With ``max_features`` each split examines that many randomly drawn
    features, falling back to the rest only when none of them can split.
    """
    w = np.ones(y.size) if sample_weight is None else np.asarray(sample_weight, dtype=float)
    keep = w > 0
    x, y, w = x[keep], y[keep], w[keep]
    onehot_w = np.zeros((y.size, n_classes))
    onehot_w[np.arange(y.size), y] = w
    d = x.shape[1]
    tree = DecisionTree()

    def dist(rows):
        v = onehot_w[rows].sum(axis=0)
        return v / v.sum()

    stack = [(tree._add(dist(np.arange(y.size))), np.arange(y.size), 0)]
    while stack:
        node, rows, depth = stack.pop()
        if rows.size < 2 or np.count_nonzero(tree.value[node]) <= 1:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if max_features is None or max_features >= d:
            split = _best_split(x[rows], onehot_w[rows], np.arange(d), min_leaf)
        else:
            perm = rng.permutation(d)
            split = _best_split(x[rows], onehot_w[rows], np.sort(perm[:max_features]), min_leaf)
            if split is None:
                split = _best_split(x[rows], onehot_w[rows], np.sort(perm[max_features:]), min_leaf)
        if split is None:
            continue
        feat, thr, _ = split
        go_left = x[rows, feat] <= thr
        lrows, rrows = rows[go_left], rows[~go_left]
        li, ri = tree._add(dist(lrows)), tree._add(dist(rrows))
        tree.feature[node], tree.threshold[node] = int(feat), float(thr)
        tree.left[node], tree.right[node] = li, ri
        stack.append((ri, rrows, depth + 1))
        stack.append((li, lrows, depth + 1))
    return tree


# ---------------------------------------------------------------------------
# random forest


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[DecisionTree, ...]
    max_features: int
    seed: int
    oob_accuracy: float | None = None

    @property
    def trees_count(self) -> int:
        return len(self.trees)


def train_forest(data: Dataset, trees: int = 100, seed: int = 0, n_classes: int = 4) -> ForestModel:
    """Bagged CART trees with ceil(sqrt(d)) candidate features per split."""
    n, d = data.x.shape
    max_features = math.ceil(math.sqrt(d))
    grown = []
    oob_votes = np.zeros((n, n_classes))
    for t in range(trees):
        rng = sample_rng(seed, t)
        counts = np.bincount(rng.integers(n, size=n), minlength=n)
        tree = fit_tree(data.x, data.y, n_classes, sample_weight=counts,
                        max_features=max_features, rng=rng)
        grown.append(tree)
        oob = counts == 0
        if oob.any():
            oob_votes[oob] += tree.predict_proba(data.x[oob])
    seen = oob_votes.sum(axis=1) > 0
    oob_acc = float(np.mean(oob_votes[seen].argmax(axis=1) == data.y[seen])) if seen.any() else None
    return ForestModel(tuple(grown), max_features, seed, oob_acc)


def forest_scores(model: ForestModel, x, trees: int | None = None) -> np.ndarray:
    """Mean leaf class distribution over the first ``trees`` trees."""
    use = model.trees if trees is None else model.trees[:trees]
    if not use:
        raise ValueError("forest has no trees")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    total = sum(t.predict_proba(np.atleast_2d(x)) for t in use) / len(use)
    return total[0] if single else total


# ---------------------------------------------------------------------------
# AdaBoost (SAMME)


@dataclass(frozen=True)
class BoostModel:
    stages: tuple[tuple[DecisionTree, float], ...]
    n_classes: int
    depth: int
    train_errors: tuple[float, ...] = ()  # weighted error of each accepted stage


def train_adaboost(
    data: Dataset, rounds: int = 50, seed: int = 0, depth: int = 2, n_classes: int = 4
) -> BoostModel:
    """Multi-class SAMME boosting of depth-limited CART trees.

    Stage weight is ``ln((1-err)/err) + ln(K-1)``.  Boosting stops early when
    a stage is no better than chance (err >= 1 - 1/K) or fits perfectly.
    """
    n = data.y.size
    k = n_classes
    weights = np.full(n, 1.0 / n)
    stages, errors = [], []
    for r in range(rounds):
        tree = fit_tree(data.x, data.y, k, sample_weight=weights, max_depth=depth, rng=sample_rng(seed, r))
        miss = tree.predict(data.x) != data.y
        err = float(weights[miss].sum() / weights.sum())
        if err >= 1.0 - 1.0 / k:
            break
        alpha = math.log((1.0 - err) / max(err, 1e-10)) + math.log(k - 1)
        stages.append((tree, alpha))
        errors.append(err)
        if err <= 0.0:
            break
        weights = weights * np.exp(alpha * miss)
        weights /= weights.sum()
    return BoostModel(tuple(stages), k, depth, tuple(errors))


def boost_scores(model: BoostModel, x, rounds: int | None = None) -> np.ndarray:
    """Sum of stage weights voting for each class (first ``rounds`` stages)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    xx = np.atleast_2d(x)
    out = np.zeros((xx.shape[0], model.n_classes))
    for tree, alpha in model.stages[:rounds]:
        out[np.arange(xx.shape[0]), tree.predict(xx)] += alpha
    return out[0] if single else out
