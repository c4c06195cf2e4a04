"""Model selection: train classifiers on random-graph samples and ask which
model a given network resembles most."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..features import feature_vector
from ..genmodels import MODELS, ModelParams, generate_samples, match_parameters
from ..graph import Graph
from .data import CLASSES, Dataset, accuracy, holdout_split, per_class_metrics, standardize_fit, stratified_kfold
from .svm import degenerate_classes, svm_scores, train_svm
from .trees import boost_scores, forest_scores, train_adaboost, train_forest

CLASSIFIERS = ("SVM-l2", "SVM-l1", "Forest", "AdaBoost")

# ordered from strongest to weakest regularization; CV ties keep the earlier point
DEFAULT_GRIDS: dict[str, list[dict]] = {
    "SVM-l2": [{"C": c} for c in (0.01, 0.1, 1.0, 10.0, 100.0)],
    "SVM-l1": [{"C": c} for c in (0.01, 0.1, 1.0, 10.0, 100.0)],
    "Forest": [{"trees": t} for t in (50, 100, 200)],
    "AdaBoost": [{"rounds": r, "depth": d} for d in (1, 2) for r in (25, 50, 100)],
}

assert CLASSES == MODELS


def fit_classifier(kind: str, data: Dataset, params: dict, seed: int, svm_restarts: int = 5):
    if kind in ("SVM-l2", "SVM-l1"):
        return train_svm(data, reg=kind[-2:], C=params["C"], seed=seed, restarts=svm_restarts)
    if kind == "Forest":
        return train_forest(data, trees=params["trees"], seed=seed)
    if kind == "AdaBoost":
        return train_adaboost(data, rounds=params["rounds"], depth=params["depth"], seed=seed)
    raise ValueError(f"unknown classifier {kind!r}")


def classifier_scores(kind: str, model, x) -> np.ndarray:
    if kind in ("SVM-l2", "SVM-l1"):
        return svm_scores(model, x)
    if kind == "Forest":
        return forest_scores(model, x)
    return boost_scores(model, x)


def _grid_scorers(kind: str, data: Dataset, grid: list[dict], seed: int) -> list[Callable]:
    """Scoring functions for every grid point.

    Forest and AdaBoost grid points that differ only in ensemble size share
    one fit of the largest size: the first t trees of a forest (or the first
    r boosting stages) are exactly what a smaller fit with the same seed
    would produce.
    """
    if kind == "Forest":
        model = train_forest(data, trees=max(p["trees"] for p in grid), seed=seed)
        return [lambda x, t=p["trees"]: forest_scores(model, x, trees=t) for p in grid]
    if kind == "AdaBoost":
        fits = {}
        for p in grid:
            if p["depth"] not in fits:
                rounds = max(q["rounds"] for q in grid if q["depth"] == p["depth"])
                fits[p["depth"]] = train_adaboost(data, rounds=rounds, depth=p["depth"], seed=seed)
        return [lambda x, p=p: boost_scores(fits[p["depth"]], x, rounds=p["rounds"]) for p in grid]
    # a single SVM restart per grid point keeps CV affordable
    return [lambda x, m=fit_classifier(kind, data, p, seed, svm_restarts=1): classifier_scores(kind, m, x)
            for p in grid]


@dataclass(frozen=True)
class CVResult:
    best: dict
    mean_accuracy: list[float]


def cross_validate_select(
    data: Dataset, kind: str, grid: list[dict] | None = None, k: int = 5, seed: int = 0
) -> CVResult:
    """Stratified k-fold CV over ``grid``; the first grid point with the
    highest mean validation accuracy wins."""
    grid = DEFAULT_GRIDS[kind] if grid is None else grid
    if not grid:
        raise ValueError("empty hyperparameter grid")
    if len(grid) == 1:
        return CVResult(grid[0], [float("nan")])
    folds = stratified_kfold(data.y, k, seed)
    acc = np.zeros((k, len(grid)))
    for f in range(k):
        train, val = data.subset(folds != f), data.subset(folds == f)
        for j, score in enumerate(_grid_scorers(kind, train, grid, seed)):
            acc[f, j] = accuracy(val.y, score(val.x).argmax(axis=1))
    mean = acc.mean(axis=0)
    best = int(np.flatnonzero(mean >= mean.max() - 1e-12)[0])
    return CVResult(grid[best], mean.tolist())


@dataclass
class SelectionReport:
    mode: str
    seed: int
    samples: int
    scores: dict[str, dict[str, float]]
    selected: dict[str, str]
    hyperparameters: dict[str, dict]
    holdout: dict[str, dict[str, dict[str, float]]]
    params: dict[str, dict]
    flags: dict[str, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "classifiers": {
                c: {"scores": self.scores[c], "selected": self.selected[c], "hyperparameters": self.hyperparameters[c]}
                for c in CLASSIFIERS
            },
            "holdout": self.holdout,
            "params": self.params,
            "flags": self.flags,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        """Classifier rows by model columns; the selected model is starred."""
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["Classifier", *MODELS, "Selected"])
        for c in CLASSIFIERS:
            cells = [f"{self.scores[c][m]:.6g}" + ("*" if self.selected[c] == m else "") for m in MODELS]
            out.writerow([c, *cells, self.selected[c]])
        return buf.getvalue()

    def majority(self) -> str | None:
        votes = [self.selected[c] for c in CLASSIFIERS]
        best = max(MODELS, key=votes.count)
        return best if votes.count(best) > len(votes) / 2 else None


def training_set(g: Graph, mode: str, seed: int, samples: int):
    """Matched parameters plus raw features and labels for ``samples``
    graphs per model."""
    params = {m: match_parameters(g, m) for m in MODELS}
    rows, labels = [], []
    for k, model in enumerate(MODELS):
        for sample in generate_samples(params[model], seed, samples, stream=k):
            rows.append(feature_vector(sample, mode).values)
            labels.append(k)
    return params, np.array(rows), np.array(labels)


def select_model(
    g: Graph,
    mode: str = "full",
    seed: int = 0,
    samples: int = 100,
    grids: dict[str, list[dict]] | None = None,
) -> SelectionReport:
    """Decide which random graph model ``g`` resembles.

    The generated samples are split 50/50.  Hyperparameters are chosen by
    5-fold CV on the training half and checked on the holdout half; the
    chosen settings are then refit on all samples and applied to ``g``.
    """
    if g.n < 5:
        raise ValueError(f"model selection needs at least 5 nodes, got {g.n}")
    grids = {**DEFAULT_GRIDS, **(grids or {})}
    g = g.unweighted()
    params, raw, labels = training_set(g, mode, seed, samples)
    target = feature_vector(g, mode).values

    train_idx, hold_idx = holdout_split(labels, seed)
    half = standardize_fit(raw[train_idx], labels[train_idx])
    hold_x = half.standardizer.transform(raw[hold_idx])
    full = standardize_fit(raw, labels)
    x = full.standardizer.transform(target)

    scores, selected, hyper, holdout, flags = {}, {}, {}, {}, {}
    for kind in CLASSIFIERS:
        cv = cross_validate_select(half, kind, grids[kind], seed=seed)
        hyper[kind] = cv.best
        model = fit_classifier(kind, half, cv.best, seed)
        pred = classifier_scores(kind, model, hold_x).argmax(axis=1)
        holdout[kind] = per_class_metrics(labels[hold_idx], pred)
        model = fit_classifier(kind, full, cv.best, seed)
        s = classifier_scores(kind, model, x)
        scores[kind] = {m: float(s[i]) for i, m in enumerate(MODELS)}
        selected[kind] = MODELS[int(np.argmax(s))]
        if kind.startswith("SVM") and degenerate_classes(model):
            flags[kind] = [f"zero hyperplane for {MODELS[c]}" for c in degenerate_classes(model)]
    return SelectionReport(
        mode=mode, seed=seed, samples=samples, scores=scores, selected=selected,
        hyperparameters=hyper, holdout=holdout, params={m: p.as_dict() for m, p in params.items()},
        flags=flags,
    )
