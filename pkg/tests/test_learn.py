import numpy as np
import pytest

from charnet.genmodels import sample_rng
from charnet.learn import (
    CLASSIFIERS, accuracy, boost_scores, cross_validate_select, fit_tree, forest_scores,
    holdout_split, per_class_metrics, standardize_fit, stratified_kfold, svm_scores,
    train_adaboost, train_forest, train_svm,
)
from charnet.learn.select import classifier_scores, fit_classifier
from charnet.learn.svm import svm_objective


def blobs(seed=0, per_class=30, spread=0.3, d=3):
    rng = sample_rng(seed)
    centers = np.eye(4, d) * 4
    x = np.concatenate([c + spread * rng.standard_normal((per_class, d)) for c in centers])
    y = np.repeat(np.arange(4), per_class)
    return standardize_fit(x, y)


def xor(per_quadrant=25, seed=0):
    rng = sample_rng(seed)
    pts, labels = [], []
    for sx, sy in [(1, 1), (-1, -1), (1, -1), (-1, 1)]:
        pts.append(np.array([sx, sy]) * rng.uniform(0.5, 1.5, (per_quadrant, 2)))
        labels += [int(sx * sy < 0)] * per_quadrant
    return standardize_fit(np.concatenate(pts), labels)


def test_standardize_examples():
    data = standardize_fit([[1.0, 5.0], [3.0, 5.0]])
    assert data.x.tolist() == [[-1.0, 0.0], [1.0, 0.0]]
    assert data.standardizer.transform([2.0, 7.0]).tolist() == [0.0, 2.0]
    with pytest.raises(ValueError):
        standardize_fit([[1.0, 2.0]])


def test_stratified_kfold_balance():
    labels = np.repeat(np.arange(4), 50)
    folds = stratified_kfold(labels, 5, seed=3)
    for f in range(5):
        assert np.bincount(labels[folds == f], minlength=4).tolist() == [10] * 4
    assert np.array_equal(folds, stratified_kfold(labels, 5, seed=3))
    train, hold = holdout_split(labels, 1)
    assert train.size == hold.size == 100 and not set(train) & set(hold)
    with pytest.raises(ValueError):
        stratified_kfold([0, 0, 1, 1, 1], 3)


def test_metrics():
    m = per_class_metrics([0, 0, 1, 1], [0, 1, 1, 1], n_classes=2)
    assert m["PA"] == {"precision": 1.0, "recall": 0.5, "f1": pytest.approx(2 / 3)}
    assert m["CL"]["precision"] == pytest.approx(2 / 3) and m["CL"]["recall"] == 1.0
    assert m["macro"]["f1"] == pytest.approx(2 / 3 + (2 * (2 / 3) / (5 / 3) - 2 / 3) / 2)
    assert accuracy([1, 2, 3], [1, 2, 0]) == pytest.approx(2 / 3)


def test_xor_linear_vs_forest():
    data = xor()
    for reg in ("l1", "l2"):
        model = train_svm(data, reg=reg, C=1.0, n_classes=2, restarts=2)
        assert accuracy(data.y, svm_scores(model, data.x).argmax(axis=1)) <= 0.75
    forest = train_forest(data, trees=25, n_classes=2)
    assert accuracy(data.y, forest_scores(forest, data.x).argmax(axis=1)) == 1.0


@pytest.mark.parametrize("kind", CLASSIFIERS)
def test_separable_blobs_perfect(kind):
    data = blobs()
    params = {"C": 1.0, "trees": 30, "rounds": 25, "depth": 2}
    model = fit_classifier(kind, data, params, seed=0)
    assert accuracy(data.y, classifier_scores(kind, model, data.x).argmax(axis=1)) == 1.0


def test_svm_duplicated_data_same_predictions():
    data = blobs(seed=1, spread=1.2)
    doubled = standardize_fit(np.concatenate([data.x, data.x]), np.concatenate([data.y, data.y]))
    a = train_svm(data, C=1.0, restarts=2)
    b = train_svm(doubled, C=0.5, restarts=2)
    agree = np.mean(svm_scores(a, data.x).argmax(1) == svm_scores(b, data.x).argmax(1))
    assert agree >= 0.95


def test_svm_scores_invariant_to_affine_feature_rescaling():
    rng = sample_rng(4)
    raw = rng.standard_normal((80, 5)) + np.repeat(np.eye(4, 5), 20, axis=0) * 2
    labels = np.repeat(np.arange(4), 20)
    target = rng.standard_normal(5)
    scale, shift = rng.uniform(0.5, 20, 5), rng.uniform(-100, 100, 5)
    a = standardize_fit(raw, labels)
    b = standardize_fit(raw * scale + shift, labels)
    assert np.allclose(a.x, b.x, atol=1e-12)
    model = train_svm(a, C=1.0, restarts=1, epochs=50)
    sa = svm_scores(model, a.standardizer.transform(target))
    sb = svm_scores(model, b.standardizer.transform(target * scale + shift))
    assert sa == pytest.approx(sb, abs=1e-9)
    # scores are distances: rescaling a hyperplane leaves them unchanged
    scaled = type(model)(model.w * 7.0, model.b * 7.0, model.reg, model.C, model.objective)
    assert svm_scores(scaled, a.x) == pytest.approx(svm_scores(model, a.x), abs=1e-9)


def test_svm_objective_matches_restart_bookkeeping():
    data = blobs(seed=2, spread=1.5)
    signs = np.where(data.y[:, None] == np.arange(4), 1.0, -1.0)
    for reg in ("l1", "l2"):
        model = train_svm(data, reg=reg, C=1.0, restarts=3)
        assert svm_objective(model.w, model.b, data.x, signs, reg, 1.0) == pytest.approx(model.objective)
        one = train_svm(data, reg=reg, C=1.0, restarts=1)
        assert np.all(model.objective <= one.objective + 1e-12)


def test_svm_near_optimum_at_small_c():
    # at C=0.01 the optimum has w near zero; compare against a fine 1-d grid on b
    data = blobs(seed=5, spread=2.0)
    model = train_svm(data, reg="l2", C=0.01)
    signs = np.where(data.y[:, None] == np.arange(4), 1.0, -1.0)
    grid = np.linspace(-2, 2, 4001)
    floor = [min(0.01 * np.maximum(0, 1 - signs[:, c] * b).sum() for b in grid) for c in range(4)]
    # the objective with w=0 upper-bounds the optimum, so being below it is fine
    assert np.all(model.objective <= np.array(floor) + 1e-6)


def test_svm_rejects_single_class():
    data = standardize_fit(np.arange(10.0).reshape(5, 2), [0] * 5)
    with pytest.raises(ValueError):
        train_svm(data)


def test_forest_scores_are_distributions():
    data = blobs(seed=3, spread=2.0)
    forest = train_forest(data, trees=20, seed=1)
    s = forest_scores(forest, data.x)
    assert np.all((s >= 0) & (s <= 1))
    assert np.allclose(s.sum(axis=1), 1.0, atol=1e-12)
    assert forest_scores(forest, data.x[0]).shape == (4,)
    assert np.array_equal(forest_scores(forest, data.x, trees=5),
                          forest_scores(train_forest(data, trees=5, seed=1), data.x))


def test_tree_fits_training_data():
    data = blobs(seed=6, spread=2.5)
    tree = fit_tree(data.x, data.y, 4)
    assert accuracy(data.y, tree.predict(data.x)) == 1.0
    stump = fit_tree(data.x, data.y, 4, max_depth=1)
    assert stump.depth == 1


def test_adaboost_single_stump_on_threshold_data():
    x = np.linspace(-1, 1, 40)[:, None]
    data = standardize_fit(x, (x[:, 0] > 0.1).astype(int))
    model = train_adaboost(data, rounds=10, depth=1, n_classes=2)
    assert len(model.stages) == 1 and model.train_errors == (0.0,)
    assert accuracy(data.y, boost_scores(model, data.x).argmax(1)) == 1.0


def test_adaboost_stage_errors_below_chance():
    data = blobs(seed=7, spread=2.5)
    model = train_adaboost(data, rounds=40, depth=1)
    assert model.stages
    assert all(e < 1 - 1 / 4 for e in model.train_errors)
    full = boost_scores(model, data.x)
    assert np.allclose(full, boost_scores(model, data.x, rounds=len(model.stages)))


def test_cv_selection():
    data = blobs(seed=8, spread=1.0, per_class=20)
    single = cross_validate_select(data, "SVM-l2", [{"C": 3.0}])
    assert single.best == {"C": 3.0}
    cv = cross_validate_select(data, "Forest", [{"trees": 5}, {"trees": 10}], k=4)
    assert cv.best in ({"trees": 5}, {"trees": 10}) and len(cv.mean_accuracy) == 2
    # ties keep the first grid point
    assert cv.best == {"trees": 5} or cv.mean_accuracy[1] > cv.mean_accuracy[0]
    with pytest.raises(ValueError):
        cross_validate_select(data, "Forest", [])


def test_adaboost_prefix_equals_shorter_fit():
    data = blobs(seed=9, spread=2.5)
    long = train_adaboost(data, rounds=30, depth=2, seed=4)
    short = train_adaboost(data, rounds=10, depth=2, seed=4)
    assert np.array_equal(boost_scores(long, data.x, rounds=10), boost_scores(short, data.x))
