"""Correlation/covariance feature ranking, wrapper filtering, and entropy-weighted TOPSIS.

The pipeline in :func:`select_features` runs four stages on a training matrix
built with every feature column:

1. rank features whose absolute class correlation exceeds a threshold;
2. summarize per-feature within-class spread (``nr_covar``);
3. greedily keep ranked features that raise validation PR-AUC;
4. score a handful of candidate subsets and rank them by TOPSIS closeness,
   with attribute weights from the entropy weight method.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, NamedTuple, Sequence

import numpy as np

from .classifiers import ClassifierKind, evaluate
from .corpus_io import Label
from .errors import (
    ColumnMismatch,
    DegenerateColumn,
    EmptySubset,
    LengthMismatch,
    NoFeatureMeetsFloor,
    SingleAlternative,
    SingleClassCorpus,
)
from .features import ALL_FEATURES, FSET1_FEATURES, FSET2_FEATURES, FeatureMatrix


class Pearson(NamedTuple):
    r: float
    degenerate: bool


def pearson(x, y) -> Pearson:
    """Pearson r; a constant column gives ``Pearson(0.0, True)``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"columns of shape {x.shape} and {y.shape}")
    if len(x) < 2:
        raise LengthMismatch("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return Pearson(0.0, True)
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return Pearson(min(1.0, max(-1.0, r)), False)


def _abs_corr_matrix(X: np.ndarray) -> np.ndarray:
    D = X - X.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", D, D))
    safe = np.where(norms > 0, norms, 1.0)
    U = D / safe
    C = np.abs(U.T @ U)
    C[:, norms == 0] = 0.0
    C[norms == 0, :] = 0.0
    np.fill_diagonal(C, 1.0)
    return np.clip(C, 0.0, 1.0)


@dataclass(frozen=True)
class CorrelationStats:
    feature_names: tuple[str, ...]
    corr_fc: np.ndarray
    corr_ff: np.ndarray
    degenerate: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.feature_names)

    def index(self, subset: Sequence[str]) -> list[int]:
        if not subset:
            raise EmptySubset("feature subset is empty")
        return [self.feature_names.index(n) for n in subset]


def correlation_stats(matrix: FeatureMatrix) -> CorrelationStats:
    X = np.asarray(matrix.X, dtype=np.float64)
    y = (np.asarray(matrix.labels) == Label.FAKE).astype(np.float64)
    fc, degenerate = [], []
    for j, name in enumerate(matrix.feature_names):
        p = pearson(X[:, j], y)
        fc.append(abs(p.r))
        if p.degenerate:
            degenerate.append(name)
    return CorrelationStats(tuple(matrix.feature_names), np.array(fc), _abs_corr_matrix(X), tuple(degenerate))


@dataclass(frozen=True)
class CovarianceSummary:
    feature_names: tuple[str, ...]
    mean_sq_dev: np.ndarray
    nr_covar: np.ndarray

    def mean(self, subset: Sequence[str]) -> float:
        return float(np.mean([self.nr_covar[self.feature_names.index(n)] for n in subset]))


def covariance_summary(matrix: FeatureMatrix) -> CovarianceSummary:
    """Per-feature squared deviation from the item's class mean, averaged
    within each class, then across the two classes, then min-max scaled."""
    X = np.asarray(matrix.X, dtype=np.float64)
    fake = np.asarray(matrix.labels) == Label.FAKE
    if fake.all() or not fake.any():
        raise SingleClassCorpus("covariance summary needs both classes")
    real_dev = ((X[~fake] - X[~fake].mean(axis=0)) ** 2).mean(axis=0)
    fake_dev = ((X[fake] - X[fake].mean(axis=0)) ** 2).mean(axis=0)
    dev = 0.5 * (real_dev + fake_dev)
    lo, hi = dev.min(), dev.max()
    nr = (dev - lo) / (hi - lo) if hi > lo else np.zeros_like(dev)
    return CovarianceSummary(tuple(matrix.feature_names), dev, nr)


def cfs_merit(k: int, avg_fc: float, avg_ff: float, nr_covar: float = 0.0) -> float:
    """k * avg_fc / (nr_covar + sqrt(k + k(k-1) * avg_ff))."""
    if k < 1:
        raise EmptySubset("feature subset is empty")
    return k * avg_fc / (nr_covar + math.sqrt(k + k * (k - 1) * avg_ff))


def _subset_averages(subset, stats):
    idx = stats.index(subset)
    k = len(idx)
    avg_fc = float(np.mean(stats.corr_fc[idx]))
    if k < 2:
        return k, avg_fc, 0.0
    block = stats.corr_ff[np.ix_(idx, idx)]
    avg_ff = float((block.sum() - np.trace(block)) / (k * (k - 1)))
    return k, avg_fc, avg_ff


def merit_corr(subset: Sequence[str], stats: CorrelationStats) -> float:
    return cfs_merit(*_subset_averages(subset, stats))


def merit_corrcov(subset: Sequence[str], stats: CorrelationStats, cov: CovarianceSummary) -> float:
    k, avg_fc, avg_ff = _subset_averages(subset, stats)
    return cfs_merit(k, avg_fc, avg_ff, cov.mean(subset))


def rank_by_threshold(scores: Mapping[str, float], threshold: float, order: Sequence[str] | None = None) -> list[str]:
    """Names scoring strictly above ``threshold``, best first.

    Ties keep the position in ``order`` (default: iteration order of ``scores``).
    """
    order = list(order) if order is not None else list(scores)
    pos = {name: i for i, name in enumerate(order)}
    passed = [n for n in scores if scores[n] > threshold]
    return sorted(passed, key=lambda n: (-scores[n], pos.get(n, len(pos)), n))


@dataclass(frozen=True)
class WrapperStep:
    feature: str
    auc_pr: float
    accepted: bool


@dataclass(frozen=True)
class WrapperResult:
    kept: tuple[str, ...]
    auc_pr: float
    steps: tuple[WrapperStep, ...]


def wrapper_filter(
    ranked: Sequence[str],
    train: FeatureMatrix,
    validation: FeatureMatrix,
    learner=ClassifierKind.GAUSSIAN_NB,
    auc_floor: float = 0.0,
    tolerance: float = 0.005,
    params: Mapping[str, Any] | None = None,
) -> WrapperResult:
    """Greedy forward pass over ``ranked``.

    The first feature whose solo validation PR-AUC reaches ``auc_floor`` opens
    the subset. After that a feature is kept only when the subset's PR-AUC
    rises by more than ``tolerance``, so redundant copies and noise columns
    are dropped.
    """
    if tuple(train.feature_names) != tuple(validation.feature_names):
        raise ColumnMismatch(train.feature_names, validation.feature_names)
    if not ranked:
        raise NoFeatureMeetsFloor("no ranked features to filter")
    kept: list[str] = []
    current = -math.inf
    steps = []
    for name in ranked:
        trial = kept + [name]
        auc = evaluate(learner, params, train.select(trial), validation.select(trial))
        accepted = auc >= auc_floor if not kept else auc > current + tolerance
        if accepted:
            kept.append(name)
            current = auc
        steps.append(WrapperStep(name, auc, accepted))
    if not kept:
        raise NoFeatureMeetsFloor(f"no feature reaches validation PR-AUC {auc_floor}")
    return WrapperResult(tuple(kept), current, tuple(steps))


@dataclass(frozen=True)
class DecisionMatrix:
    alternatives: tuple[str, ...]
    attributes: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (len(self.alternatives), len(self.attributes)):
            raise LengthMismatch(f"values of shape {v.shape} for {len(self.alternatives)}x{len(self.attributes)}")
        if len(self.alternatives) < 2:
            raise SingleAlternative("a decision matrix needs at least two alternatives")
        if len(self.attributes) < 1:
            raise LengthMismatch("a decision matrix needs at least one attribute")
        if not np.all((v >= 0.0) & (v <= 1.0)):
            raise ValueError("decision matrix entries must lie in [0, 1]")
        object.__setattr__(self, "values", v)


def _as_values(dm) -> np.ndarray:
    if isinstance(dm, DecisionMatrix):
        return dm.values
    v = np.asarray(dm, dtype=np.float64)
    if v.ndim != 2:
        raise LengthMismatch("decision matrix must be two-dimensional")
    if v.shape[0] < 2:
        raise SingleAlternative("entropy needs at least two alternatives (ln 1 = 0)")
    if not np.all((v >= 0.0) & (v <= 1.0)):
        raise ValueError("decision matrix entries must lie in [0, 1]")
    return v


@dataclass(frozen=True)
class EntropyWeights:
    ent: np.ndarray
    div: np.ndarray
    wgt: np.ndarray


def divergence(ent) -> np.ndarray:
    """Degree of diversification, ``1 - ent``."""
    return 1.0 - np.asarray(ent, dtype=np.float64)


def entropy_weights(dm) -> EntropyWeights:
    """Column entropy over the raw entries, with 0 * ln 0 taken as 0.

    ``div = 1 - ent``. Raw (unnormalized) columns can push ``ent`` above 1;
    such columns get weight 0, and if every column does the weights fall back
    to uniform.
    """
    A = _as_values(dm)
    n = A.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(A > 0, A * np.log(np.where(A > 0, A, 1.0)), 0.0)
    ent = -terms.sum(axis=0) / math.log(n)
    div = divergence(ent)
    pos = np.clip(div, 0.0, None)
    total = pos.sum()
    wgt = pos / total if total > 0 else np.full(len(div), 1.0 / len(div))
    return EntropyWeights(ent, div, wgt)


class Orientation(str, Enum):
    PAPER = "paper"
    STANDARD = "standard"


def closeness(delta_pis, delta_nis, orientation=Orientation.PAPER):
    """PAPER: d_pis / (d_pis + d_nis). STANDARD: d_nis / (d_pis + d_nis)."""
    dp = np.asarray(delta_pis, dtype=np.float64)
    dn = np.asarray(delta_nis, dtype=np.float64)
    num = dp if Orientation(orientation) is Orientation.PAPER else dn
    return num / (dp + dn)


@dataclass(frozen=True)
class TopsisResult:
    delta_pis: np.ndarray
    delta_nis: np.ndarray
    closeness: np.ndarray
    ranking: tuple[int, ...]


def topsis(dm, weights, orientation=Orientation.PAPER) -> TopsisResult:
    """Rank alternatives by closeness; ties keep row order."""
    A = _as_values(dm)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (A.shape[1],):
        raise LengthMismatch(f"{len(w)} weights for {A.shape[1]} attributes")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {w.sum()}")
    V = A * w
    pis, nis = V.max(axis=0), V.min(axis=0)
    if np.all(pis == nis):
        raise DegenerateColumn("every attribute is constant across alternatives")
    d_pis = np.sqrt(((V - pis) ** 2).sum(axis=1))
    d_nis = np.sqrt(((V - nis) ** 2).sum(axis=1))
    c = closeness(d_pis, d_nis, orientation)
    ranking = tuple(int(i) for i in np.argsort(-c, kind="stable"))
    return TopsisResult(d_pis, d_nis, c, ranking)


@dataclass(frozen=True)
class SelectionConfig:
    threshold: float = 0.1
    auc_floor: float = 0.0
    tolerance: float = 0.005
    learner: ClassifierKind = ClassifierKind.GAUSSIAN_NB
    learner_params: Mapping[str, Any] = field(default_factory=dict)
    orientation: Orientation = Orientation.PAPER


ATTRIBUTES = ("merit_corr", "merit_corrcov", "wrapper_auc_pr", "mean_corr_fc", "one_minus_mean_nr_covar")


@dataclass(frozen=True)
class SelectionReport:
    feature_names: tuple[str, ...]
    corr: CorrelationStats
    cov: CovarianceSummary
    threshold: float
    ranked_features: tuple[str, ...]
    covariance_order: tuple[str, ...]
    wrapper: WrapperResult
    candidates: dict[str, tuple[str, ...]]
    merit_corr: dict[str, float]
    merit_corrcov: dict[str, float]
    decision_matrix: DecisionMatrix
    entropy_weights: EntropyWeights
    topsis: TopsisResult
    orientation: Orientation

    @property
    def wrapper_kept(self) -> tuple[str, ...]:
        return self.wrapper.kept

    @property
    def topsis_ranking(self) -> list[str]:
        return [self.decision_matrix.alternatives[i] for i in self.topsis.ranking]

    def to_dict(self) -> dict:
        names = self.feature_names
        alts = self.decision_matrix.alternatives
        return {
            "feature_names": list(names),
            "correlation": {
                "corr_fc": dict(zip(names, self.corr.corr_fc.tolist())),
                "corr_ff": self.corr.corr_ff.tolist(),
                "degenerate": list(self.corr.degenerate),
            },
            "covariance": {
                "mean_sq_dev": dict(zip(names, self.cov.mean_sq_dev.tolist())),
                "nr_covar": dict(zip(names, self.cov.nr_covar.tolist())),
                "descending": list(self.covariance_order),
            },
            "threshold": self.threshold,
            "ranked_features": list(self.ranked_features),
            "wrapper": {
                "steps": [{"feature": s.feature, "auc_pr": s.auc_pr, "accepted": s.accepted}
                          for s in self.wrapper.steps],
                "auc_pr": self.wrapper.auc_pr,
            },
            "wrapper_kept": list(self.wrapper.kept),
            "candidates": {k: list(v) for k, v in self.candidates.items()},
            "merit_corr": dict(self.merit_corr),
            "merit_corrcov": dict(self.merit_corrcov),
            "decision_matrix": {
                "alternatives": list(alts),
                "attributes": list(self.decision_matrix.attributes),
                "values": self.decision_matrix.values.tolist(),
            },
            "entropy": {
                "attributes": list(self.decision_matrix.attributes),
                "ent": self.entropy_weights.ent.tolist(),
                "div": self.entropy_weights.div.tolist(),
                "wgt": self.entropy_weights.wgt.tolist(),
            },
            "topsis": {
                "orientation": self.orientation.value,
                "alternatives": {
                    a: {"delta_pis": float(self.topsis.delta_pis[i]),
                        "delta_nis": float(self.topsis.delta_nis[i]),
                        "closeness": float(self.topsis.closeness[i])}
                    for i, a in enumerate(alts)
                },
                "ranking": self.topsis_ranking,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def select_features(train: FeatureMatrix, validation: FeatureMatrix, config: SelectionConfig | None = None) -> SelectionReport:
    config = config or SelectionConfig()
    names = tuple(train.feature_names)
    if names != ALL_FEATURES:
        raise ColumnMismatch(ALL_FEATURES, names)
    if tuple(validation.feature_names) != names:
        raise ColumnMismatch(names, validation.feature_names)
    for m in (train, validation):
        if len(np.unique(m.labels)) < 2:
            raise SingleClassCorpus("selection needs both classes in train and validation")

    corr = correlation_stats(train)
    cov = covariance_summary(train)
    fc = dict(zip(names, corr.corr_fc.tolist()))
    ranked = rank_by_threshold(fc, config.threshold, names)
    cov_order = rank_by_threshold(dict(zip(names, cov.nr_covar.tolist())), -math.inf, names)
    if not ranked:
        raise NoFeatureMeetsFloor(f"no feature has |corr| above {config.threshold}")
    wrapper = wrapper_filter(ranked, train, validation, config.learner, config.auc_floor,
                             config.tolerance, config.learner_params)

    candidates = {
        "ranked": tuple(ranked),
        "wrapper_kept": wrapper.kept,
        "fset1": FSET1_FEATURES,
        "fset2": FSET2_FEATURES,
        "all": ALL_FEATURES,
    }
    m_corr = {k: merit_corr(v, corr) for k, v in candidates.items()}
    m_cov = {k: merit_corrcov(v, corr, cov) for k, v in candidates.items()}
    rows = []
    for key, subset in candidates.items():
        if key == "wrapper_kept":
            auc = wrapper.auc_pr
        else:
            auc = evaluate(config.learner, config.learner_params, train.select(subset), validation.select(subset))
        idx = corr.index(subset)
        rows.append([m_corr[key], m_cov[key], auc, float(np.mean(corr.corr_fc[idx])), 1.0 - cov.mean(subset)])
    values = np.array(rows)
    for j in (0, 1):
        top = values[:, j].max()
        values[:, j] = values[:, j] / top if top > 0 else 0.0
    dm = DecisionMatrix(tuple(candidates), ATTRIBUTES, np.clip(values, 0.0, 1.0))
    ew = entropy_weights(dm)
    orientation = Orientation(config.orientation)
    tr = topsis(dm, ew.wgt, orientation)
    return SelectionReport(names, corr, cov, config.threshold, tuple(ranked), tuple(cov_order), wrapper,
                           candidates, m_corr, m_cov, dm, ew, tr, orientation)
