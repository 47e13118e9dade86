import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lingcues.classifiers import (
    DEFAULT_PARAMS,
    ClassifierKind,
    Metric,
    fit,
    grid_search,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_labels,
    predict_scores,
    resolve_params,
    save_model,
)
from lingcues.classifiers.adaboost import AdaBoost
from lingcues.classifiers.knn import KNearestNeighbors
from lingcues.classifiers.svm import LinearSVM
from lingcues.classifiers.tree import DecisionTree, RandomForest, resolve_max_features
from lingcues.errors import ColumnMismatch, ConfigError, ModelFormatError, NonFiniteFeature, SingleClassCorpus
from lingcues.features import FeatureMatrix
from lingcues.metrics import auc_pr

ALL_KINDS = list(ClassifierKind)


def matrix(X, y, names=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    names = names or tuple(f"f{i}" for i in range(X.shape[1]))
    return FeatureMatrix(X, np.asarray(y), tuple(names))


def blobs(n=200, d=4, shift=1.5, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.normal(size=(n, d)) + shift * y[:, None] * (np.arange(d) < 2)
    return matrix(X, y)


def nb_posterior_oracle(train_X, train_y, x, floor=1e-9):
    """P(FAKE | x) from sample moments, written out term by term."""
    logs = []
    for c in (0, 1):
        rows = [r for r, lab in zip(train_X, train_y) if lab == c]
        prior = len(rows) / len(train_X)
        total = math.log(prior)
        for j in range(len(x)):
            col = [r[j] for r in rows]
            mu = sum(col) / len(col)
            var = max(sum((v - mu) ** 2 for v in col) / len(col), floor)
            total += -0.5 * math.log(2 * math.pi * var) - (x[j] - mu) ** 2 / (2 * var)
        logs.append(total)
    m = max(logs)
    return math.exp(logs[1] - m) / (math.exp(logs[0] - m) + math.exp(logs[1] - m))


# Gaussian NB

def test_nb_closed_form_instance():
    m = fit("gaussian_nb", None, matrix([0, 1, 4, 5], [0, 0, 1, 1]))
    np.testing.assert_allclose(m.learner.means.ravel(), [0.5, 4.5])
    np.testing.assert_allclose(m.learner.variances.ravel(), [0.25, 0.25])
    s = predict_scores(m, matrix([1.0, 2.5], [0, 0]))
    assert s[0] < 0.5
    assert s[1] == 0.5
    assert s[0] == pytest.approx(nb_posterior_oracle([[0], [1], [4], [5]], [0, 0, 1, 1], [1.0]), abs=1e-12)


small = st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-20, 20).map(lambda v: v / 4), min_size=2, max_size=2), min_size=n, max_size=n),
    st.permutations([0, 1] + [0] * 0).map(list).flatmap(
        lambda base: st.lists(st.integers(0, 1), min_size=n - 2, max_size=n - 2).map(lambda r: base + r)),
    st.lists(st.integers(-20, 20).map(lambda v: v / 4), min_size=2, max_size=2)))


@given(small, st.integers(1, 2))
def test_nb_matches_oracle_on_small_instances(case, d):
    X, y, x = case
    X = [row[:d] for row in X]
    x = x[:d]
    m = fit("gaussian_nb", None, matrix(X, y))
    got = predict_scores(m, matrix([x], [0]))[0]
    assert got == pytest.approx(nb_posterior_oracle(X, y, x), abs=1e-9)


# trees

def test_cart_single_threshold_one_split():
    X = np.array([0.1, 0.4, 0.35, 0.8, 0.9, 0.7])
    y = np.array([0, 0, 0, 1, 1, 1])
    tree = DecisionTree().fit(X[:, None], y)
    assert tree.n_splits == 1
    assert np.array_equal((tree.score(X[:, None]) >= 0.5).astype(int), y)
    assert tree.nodes[1][0] == pytest.approx((0.4 + 0.7) / 2)


def test_cart_depth_limit_and_weights():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] * X[:, 1] > 0).astype(int)
    assert DecisionTree(max_depth=2).fit(X, y).n_leaves <= 4
    full = DecisionTree().fit(X, y)
    assert np.array_equal(full.score(X), y.astype(float))
    # zero-weight rows do not influence the fit
    w = np.r_[np.ones(40), np.zeros(40)]
    a = DecisionTree().fit(X, y, w).score(X[:40])
    b = DecisionTree().fit(X[:40], y[:40]).score(X[:40])
    np.testing.assert_array_equal(a, b)


def test_resolve_max_features():
    assert resolve_max_features("sqrt", 18) == 5
    assert resolve_max_features("sqrt", 8) == 3
    assert resolve_max_features(None, 7) == 7


def test_forest_scores_pure_regions_at_extremes():
    X = np.r_[np.linspace(0, 1, 10), np.linspace(3, 4, 10)][:, None]
    y = np.r_[np.zeros(10), np.ones(10)].astype(int)
    m = fit("random_forest", {"n_trees": 25}, matrix(X, y))
    s = predict_scores(m, matrix(X, y))
    assert set(s[:10]) == {0.0} and set(s[10:]) == {1.0}


# AdaBoost

def separable_20():
    X = np.linspace(-1, 1, 20)[:, None]
    y = (X[:, 0] > 0.1).astype(int)
    return X, y


def test_adaboost_reaches_zero_training_error():
    X, y = separable_20()
    ada = AdaBoost(n_estimators=10).fit(X, y)
    assert np.array_equal((ada.score(X) >= 0.5).astype(int), y)
    assert len(ada.alphas) <= 10


def test_adaboost_round_invariants():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(150, 3))
    y = (X[:, 0] + X[:, 1] ** 2 > 0.5).astype(int)
    ada = AdaBoost(n_estimators=40).fit(X, y)
    assert all(abs(s - 1.0) <= 1e-9 for s in ada.weight_sums)
    assert all(e < 0.5 for e in ada.errors)
    assert len(ada.errors) == len(ada.alphas) == len(ada.weight_sums)
    # stage weights follow lr * ln((1 - e) / e)
    for e, a in zip(ada.errors, ada.alphas):
        assert a == pytest.approx(math.log((1 - e) / e))


def test_adaboost_scores_in_unit_interval():
    m = fit("adaboost", {"n_estimators": 20}, blobs())
    s = predict_scores(m, blobs(seed=5))
    assert s.min() >= 0 and s.max() <= 1


# KNN and SVM

def test_knn_k1_zero_training_error():
    data = blobs(n=120, d=5)
    m = fit("knn", {"k": 1}, data)
    assert np.array_equal(predict_labels(m, data), data.labels)


def test_knn_scaler_fitted_on_train_only():
    train = blobs(n=50)
    knn = KNearestNeighbors(3).fit(train.X, train.labels)
    before = knn.center.copy()
    knn.score(train.X * 100)
    np.testing.assert_array_equal(knn.center, before)


def test_svm_objective_non_increasing_on_separable_set():
    rng = np.random.default_rng(4)
    X = np.r_[rng.normal(-2, 0.5, (60, 2)), rng.normal(2, 0.5, (60, 2))]
    y = np.r_[np.zeros(60), np.ones(60)].astype(int)
    svm = LinearSVM(epochs=60).fit(X, y)
    h = np.array(svm.objective_history)
    assert np.all(np.diff(h) <= 1e-3)
    assert np.array_equal((svm.score(X) >= 0.5).astype(int), y)


# shared contract

@pytest.mark.parametrize("kind", ALL_KINDS)
def test_deterministic_and_persistable(kind, tmp_path):
    train, test = blobs(seed=1), blobs(seed=2)
    a = fit(kind, {"seed": 7}, train)
    b = fit(kind, {"seed": 7}, train)
    sa = predict_scores(a, test)
    assert np.array_equal(sa, predict_scores(b, test))
    assert sa.min() >= 0 and sa.max() <= 1
    assert auc_pr(sa, test.labels) > 0.65  # prevalence is 0.5
    save_model(a, tmp_path / "m.json")
    assert np.array_equal(predict_scores(load_model(tmp_path / "m.json"), test), sa)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_fit_preconditions(kind):
    with pytest.raises(SingleClassCorpus):
        fit(kind, None, matrix([[1.0], [2.0]], [1, 1]))
    with pytest.raises(NonFiniteFeature) as info:
        fit(kind, None, matrix([[1.0, 0.0], [2.0, np.nan], [3.0, 1.0]], [0, 1, 0], ("a", "b")))
    assert (info.value.row, info.value.column) == (1, "b")


def test_column_mismatch():
    m = fit("gaussian_nb", None, blobs())
    other = blobs()
    renamed = FeatureMatrix(other.X, other.labels, ("f1", "f0", "f2", "f3"))
    with pytest.raises(ColumnMismatch):
        predict_scores(m, renamed)
    with pytest.raises(ColumnMismatch):
        predict_labels(m, renamed)


def test_predict_labels_threshold_rule():
    class Fixed:
        def __init__(self, s):
            self.s = np.asarray(s)

        def score(self, X):
            return self.s

    m = fit("gaussian_nb", None, matrix([0, 1], [0, 1]))
    rows = matrix([0, 1], [0, 1])
    fixed = type(m)(m.kind, m.params, Fixed([0.9, 0.1]), m.feature_names)
    assert list(predict_labels(fixed, rows)) == [1, 0]
    assert list(predict_labels(fixed, rows, threshold=0.0)) == [1, 1]
    ones = type(m)(m.kind, m.params, Fixed([1.0, 0.3]), m.feature_names)
    assert list(predict_labels(ones, rows, threshold=1.0)) == [1, 0]


def test_params_validation():
    assert resolve_params("knn")["k"] == 5
    assert DEFAULT_PARAMS[ClassifierKind.ADABOOST]["n_estimators"] == 50
    with pytest.raises(ConfigError):
        resolve_params("knn", {"kk": 3})
    with pytest.raises(ConfigError):
        resolve_params("adaboost", {"learning_rate": 0})
    with pytest.raises(ConfigError):
        resolve_params("adaboost", {"n_estimators": 0})
    with pytest.raises(ConfigError):
        ClassifierKind.parse("perceptron")


def test_model_version_check():
    d = model_to_dict(fit("knn", None, blobs()))
    assert json.loads(json.dumps(d)) == d
    with pytest.raises(ModelFormatError):
        model_from_dict({**d, "version": 2})
    with pytest.raises(ModelFormatError):
        model_from_dict({**d, "format": "other"})


# grid search

def circle(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(n, 2))
    y = (np.hypot(X[:, 0], X[:, 1]) < 0.7).astype(int)
    return matrix(X, y)


def test_grid_prefers_more_boosting_rounds_when_they_help():
    result = grid_search("adaboost", {"n_estimators": [50, 400]}, circle(600, 0), circle(400, 1))
    assert result.best_params["n_estimators"] == 400
    assert len(result.table) == 2
    assert result.table[1][1] > result.table[0][1]


def test_grid_singleton_and_ties():
    train, val = blobs(seed=1), blobs(seed=2)
    single = grid_search("knn", {"k": [3]}, train, val)
    assert single.best_params["k"] == 3
    # var_floor values this small leave the scores unchanged, so every point ties
    tie = grid_search("gaussian_nb", {"var_floor": [1e-12, 1e-10]}, train, val, Metric.F1)
    assert tie.table[0][1] == tie.table[1][1]
    assert tie.best_params["var_floor"] == 1e-12


def test_monotone_score_maps_leave_auc_unchanged():
    train, test = blobs(seed=1), blobs(seed=3)
    s = predict_scores(fit("linear_svm", None, train), test)
    assert auc_pr(np.log(s / (1 - s)), test.labels) == pytest.approx(auc_pr(s, test.labels), abs=1e-12)
