import json
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lingcues.cli import selection_matrices
from lingcues.config import RunConfig
from lingcues.errors import (
    ColumnMismatch,
    DegenerateColumn,
    EmptySubset,
    LengthMismatch,
    NoFeatureMeetsFloor,
    SingleAlternative,
    SingleClassCorpus,
)
from lingcues.features import ALL_FEATURES, FeatureMatrix
from lingcues.selection import (
    DecisionMatrix,
    Orientation,
    SelectionConfig,
    cfs_merit,
    closeness,
    correlation_stats,
    covariance_summary,
    entropy_weights,
    merit_corr,
    merit_corrcov,
    pearson,
    rank_by_threshold,
    select_features,
    topsis,
    wrapper_filter,
)
from lingcues.synthetic import shuffle_labels, synthetic_corpus


def fm(X, y, names):
    return FeatureMatrix(np.asarray(X, dtype=float), np.asarray(y), tuple(names))


# correlation

def test_pearson_examples():
    assert pearson([1, 2, 3], [2, 4, 6]).r == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]).r == pytest.approx(-1.0)
    assert pearson([5, 5, 5], [1, 2, 3]) == (0.0, True)
    with pytest.raises(LengthMismatch):
        pearson([1, 2], [1, 2, 3])


def test_correlation_stats_flags_constant_columns():
    X = np.c_[[0, 1, 0, 1], [3, 3, 3, 3], [1, 2, 3, 4]]
    s = correlation_stats(fm(X, [0, 1, 0, 1], "abc"))
    assert s.corr_fc[0] == pytest.approx(1.0)
    assert s.corr_fc[1] == 0.0 and s.degenerate == ("b",)
    assert np.allclose(np.diag(s.corr_ff), 1.0)
    assert s.corr_ff[0, 1] == 0.0
    with pytest.raises(EmptySubset):
        s.index([])


def test_covariance_summary():
    X = np.c_[[0, 2, 10, 10], [1, 1, 1, 1]]
    c = covariance_summary(fm(X, [0, 0, 1, 1], "ab"))
    # real class deviations 1, 1; fake class 0, 0
    assert c.mean_sq_dev[0] == pytest.approx(0.5)
    assert list(c.nr_covar) == [1.0, 0.0]
    flat = covariance_summary(fm(np.ones((4, 2)), [0, 0, 1, 1], "ab"))
    assert list(flat.nr_covar) == [0.0, 0.0]
    with pytest.raises(SingleClassCorpus):
        covariance_summary(fm(X, [1, 1, 1, 1], "ab"))


# merit

def test_merit_examples():
    assert cfs_merit(1, 0.8, 0.0) == pytest.approx(0.8)
    assert cfs_merit(2, 0.5, 0.5) == pytest.approx(1 / math.sqrt(3))
    assert cfs_merit(1, 0.8, 0.0, nr_covar=1.0) == pytest.approx(0.4)
    # an exact duplicate adds nothing
    for k in range(1, 6):
        assert cfs_merit(k, 0.6, 1.0) == pytest.approx(0.6)
    with pytest.raises(EmptySubset):
        cfs_merit(0, 0.5, 0.5)


unit = st.floats(0, 1, allow_nan=False)


@given(st.integers(1, 19), unit, unit, unit, st.floats(0.01, 100))
def test_merit_properties(k, fc, ff, nr, scale):
    base = cfs_merit(k, fc, ff)
    assert cfs_merit(k, fc, ff, nr) <= base + 1e-12
    if k > 1:
        assert cfs_merit(k, fc, min(1.0, ff + 0.1)) <= base + 1e-12


@given(arrays(np.float64, (30, 3), elements=st.floats(-5, 5)), st.floats(0.1, 50), st.floats(-10, 10))
def test_merit_invariant_under_affine_rescaling(X, a, b):
    y = np.arange(30) % 2
    assume(all(np.ptp(X[:, j]) > 1e-3 for j in range(3)))
    s1 = correlation_stats(fm(X, y, "abc"))
    s2 = correlation_stats(fm(X * a + b, y, "abc"))
    assert merit_corr("abc", s1) == pytest.approx(merit_corr("abc", s2), abs=1e-9)


def test_merit_subset_averages():
    rng = np.random.default_rng(0)
    y = np.arange(60) % 2
    X = np.c_[y + rng.normal(0, 0.5, 60), y + rng.normal(0, 0.5, 60), rng.normal(size=60)]
    m = fm(X, y, "abc")
    s = correlation_stats(m)
    fc = s.corr_fc[:2].mean()
    ff = abs(pearson(X[:, 0], X[:, 1]).r)
    assert merit_corr("ab", s) == pytest.approx(2 * fc / math.sqrt(2 + 2 * ff))
    cov = covariance_summary(m)
    assert merit_corrcov("ab", s, cov) == pytest.approx(
        2 * fc / (cov.nr_covar[:2].mean() + math.sqrt(2 + 2 * ff)))


# ranking and wrapper

def test_rank_by_threshold():
    scores = {"a": 0.3, "b": 0.05, "c": 0.4, "d": 0.1, "e": 0.3}
    assert rank_by_threshold(scores, 0.1) == ["c", "a", "e"]
    assert rank_by_threshold(scores, 0.1, order="edcba") == ["c", "e", "a"]
    assert rank_by_threshold(scores, 0.5) == []


def planted(n=400, seed=0):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    sep = y * 2.0 + rng.normal(0, 0.6, n)
    noise = rng.normal(size=n)
    return fm(np.c_[sep, sep, noise], y, ("sep", "copy", "noise"))


def test_wrapper_keeps_first_copy_and_drops_noise():
    tr, va = planted(seed=1), planted(seed=2)
    res = wrapper_filter(["sep", "copy", "noise"], tr, va)
    assert res.kept == ("sep",)
    assert [s.accepted for s in res.steps] == [True, False, False]
    assert res.auc_pr == res.steps[0].auc_pr


def test_wrapper_floor():
    tr, va = planted(seed=1), planted(seed=2)
    with pytest.raises(NoFeatureMeetsFloor):
        wrapper_filter(["noise"], tr, va, auc_floor=0.9)
    with pytest.raises(NoFeatureMeetsFloor):
        wrapper_filter([], tr, va)
    # a floor of 0 always admits the first ranked feature
    assert wrapper_filter(["noise", "sep"], tr, va, auc_floor=0.0).kept[0] == "noise"
    with pytest.raises(ColumnMismatch):
        wrapper_filter(["sep"], tr, va.select(["sep", "noise"]))


# entropy weights

def test_entropy_examples():
    third = entropy_weights([[1 / 3], [1 / 3], [1 / 3]])
    assert third.ent[0] == pytest.approx(1.0)
    assert third.div[0] == pytest.approx(0.0, abs=1e-12)
    col = entropy_weights([[0.7], [0.8], [0.6]])
    assert col.ent[0] == pytest.approx(0.6687, abs=1e-4)
    assert col.div[0] == pytest.approx(1 - col.ent[0])
    with pytest.raises(SingleAlternative):
        entropy_weights([[0.4, 0.5]])
    zeros = entropy_weights([[0.0, 1.0], [0.0, 1.0]])
    assert zeros.ent[0] == 0.0


def entropy_oracle(A):
    n, m = len(A), len(A[0])
    ent = []
    for j in range(m):
        total = 0.0
        for i in range(n):
            a = A[i][j]
            if a > 0:
                total += a * math.log(a)
        ent.append(-total / math.log(n))
    div = [1 - e for e in ent]
    pos = [max(d, 0.0) for d in div]
    wgt = [p / sum(pos) for p in pos] if sum(pos) > 0 else [1 / m] * m
    return ent, div, wgt


decision_values = st.integers(2, 7).flatmap(lambda n: st.integers(1, 6).flatmap(
    lambda m: arrays(np.float64, (n, m), elements=st.floats(0, 1))))


@given(decision_values)
def test_entropy_matches_oracle(A):
    got = entropy_weights(A)
    ent, div, wgt = entropy_oracle(A.tolist())
    np.testing.assert_allclose(got.ent, ent, atol=1e-12)
    np.testing.assert_allclose(got.div, div, atol=1e-12)
    np.testing.assert_allclose(got.wgt, wgt, atol=1e-12)
    assert got.wgt.sum() == pytest.approx(1.0)
    assert np.all(got.wgt >= 0)


# TOPSIS

def test_closeness_orientations():
    assert closeness([0.397], [0.16])[0] == pytest.approx(0.397 / 0.557)
    assert closeness([0.397], [0.16], Orientation.STANDARD)[0] == pytest.approx(0.16 / 0.557)


def test_topsis_small_instance():
    A = np.array([[1.0, 1.0], [0.0, 0.0], [0.5, 0.25]])
    w = np.array([0.5, 0.5])
    std = topsis(A, w, Orientation.STANDARD)
    assert std.delta_pis[0] == 0.0 and std.closeness[0] == 1.0
    assert std.delta_nis[1] == 0.0 and std.closeness[1] == 0.0
    assert std.ranking == (0, 2, 1)
    paper = topsis(A, w, Orientation.PAPER)
    assert paper.ranking == (1, 2, 0)
    with pytest.raises(ValueError):
        topsis(A, [0.6, 0.6])
    with pytest.raises(DegenerateColumn):
        topsis(np.full((3, 2), 0.5), w)


@given(decision_values, st.randoms(use_true_random=False))
def test_topsis_permutation_and_ties(A, rnd):
    assume(np.any(A.max(axis=0) > A.min(axis=0)))
    w = np.full(A.shape[1], 1 / A.shape[1])
    base = topsis(A, w, Orientation.STANDARD)
    perm = list(range(len(A)))
    rnd.shuffle(perm)
    moved = topsis(A[perm], w, Orientation.STANDARD)
    np.testing.assert_allclose(moved.closeness, base.closeness[perm], atol=1e-12)
    doubled = topsis(np.r_[A, A[:1]], w, Orientation.STANDARD)
    assert doubled.closeness[0] == pytest.approx(doubled.closeness[-1])
    assert np.all((base.closeness >= 0) & (base.closeness <= 1))


def test_decision_matrix_validation():
    with pytest.raises(SingleAlternative):
        DecisionMatrix(("a",), ("x",), np.array([[0.5]]))
    with pytest.raises(ValueError):
        DecisionMatrix(("a", "b"), ("x",), np.array([[0.5], [1.5]]))


# whole pipeline

def planted_all(n, seed):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = rng.normal(size=(n, len(ALL_FEATURES)))
    signal = ("unique", "negative", "positive", "cn")
    for j, name in enumerate(ALL_FEATURES):
        if name in signal:
            X[:, j] += 1.2 * y
    return fm(X, y, ALL_FEATURES)


def test_select_features_recovers_planted_columns():
    rep = select_features(planted_all(1200, 0), planted_all(600, 1), SelectionConfig(threshold=0.15))
    assert set(rep.ranked_features) == {"unique", "negative", "positive", "cn"}
    assert set(rep.wrapper_kept) == {"unique", "negative", "positive", "cn"}
    assert sorted(rep.topsis_ranking) == sorted(["ranked", "wrapper_kept", "fset1", "fset2", "all"])
    assert rep.entropy_weights.wgt.sum() == pytest.approx(1.0)
    assert np.all((rep.decision_matrix.values >= 0) & (rep.decision_matrix.values <= 1))


def test_select_features_rejects_other_columns():
    m = planted_all(100, 0)
    with pytest.raises(ColumnMismatch):
        select_features(m.select(ALL_FEATURES[:5]), m.select(ALL_FEATURES[:5]))


@pytest.fixture(scope="module")
def synthetic_selection():
    corpus = synthetic_corpus(1500, seed=3, strength=0.5)
    cfg = RunConfig(seed=0)
    fit_m, val_m = selection_matrices(cfg, corpus)
    return fit_m, val_m, select_features(fit_m, val_m)


def test_select_features_on_synthetic_corpus(synthetic_selection):
    _, _, rep = synthetic_selection
    kept = set(rep.wrapper_kept)
    assert {"unique", "cn"} <= kept
    # neutral is 1 - negative - positive, so either route carries the sentiment signal
    assert "neutral" in kept or {"negative", "positive"} <= kept


def test_selection_json_is_deterministic(synthetic_selection):
    fit_m, val_m, rep = synthetic_selection
    again = select_features(fit_m, val_m)
    assert again.to_json() == rep.to_json()
    d = json.loads(rep.to_json())
    for key in ("correlation", "covariance", "ranked_features", "wrapper", "decision_matrix", "entropy", "topsis"):
        assert key in d
    assert d["topsis"]["orientation"] == "paper"


def test_noise_corpus_fails_floor():
    corpus = shuffle_labels(synthetic_corpus(600, seed=4, signal=False), seed=1)
    fit_m, val_m = selection_matrices(RunConfig(), corpus)
    with pytest.raises(NoFeatureMeetsFloor):
        select_features(fit_m, val_m, SelectionConfig(threshold=0.0, auc_floor=0.8))
