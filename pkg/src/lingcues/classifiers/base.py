"""Common train/score interface over the six learners, plus JSON persistence."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from .._io import atomic_write_text
from ..errors import ColumnMismatch, ConfigError, ModelFormatError, NonFiniteFeature, SingleClassCorpus
from ..features import FeatureMatrix
from .adaboost import AdaBoost
from .knn import KNearestNeighbors
from .naive_bayes import GaussianNB
from .svm import LinearSVM
from .tree import DecisionTree, RandomForest

MODEL_FORMAT = "lingcues-model"
MODEL_VERSION = 1


class ClassifierKind(str, Enum):
    GAUSSIAN_NB = "gaussian_nb"
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"
    KNN = "knn"
    ADABOOST = "adaboost"
    LINEAR_SVM = "linear_svm"

    @classmethod
    def parse(cls, value) -> "ClassifierKind":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        for kind in cls:
            if text in (kind.value, kind.name.lower()):
                return kind
        raise ConfigError(f"unknown classifier {value!r}; choose from {[k.value for k in cls]}")


DEFAULT_PARAMS: dict[ClassifierKind, dict[str, Any]] = {
    ClassifierKind.GAUSSIAN_NB: {"var_floor": 1e-9},
    ClassifierKind.DECISION_TREE: {"max_depth": None, "min_samples_leaf": 1},
    ClassifierKind.RANDOM_FOREST: {"n_trees": 100, "max_features": "sqrt", "bootstrap": True,
                                   "max_depth": None, "min_samples_leaf": 1},
    ClassifierKind.KNN: {"k": 5},
    ClassifierKind.ADABOOST: {"n_estimators": 50, "learning_rate": 1.0, "base_depth": 1},
    ClassifierKind.LINEAR_SVM: {"C": 1.0, "epochs": 100, "batch_size": 32},
}


def resolve_params(kind, params: Mapping[str, Any] | None = None) -> dict[str, Any]:
    """Defaults for ``kind`` overlaid with ``params``; unknown keys are rejected."""
    kind = ClassifierKind.parse(kind)
    merged = dict(DEFAULT_PARAMS[kind])
    merged["seed"] = 0
    for key, value in (params or {}).items():
        if key not in merged:
            raise ConfigError(f"unknown {kind.value} parameter {key!r}; allowed: {sorted(merged)}")
        merged[key] = value
    _check(kind, merged)
    return merged


def _check(kind, p):
    def positive(name, integer=True):
        v = p[name]
        if (integer and (not isinstance(v, (int, np.integer)) or isinstance(v, bool))) or v <= 0:
            raise ConfigError(f"{kind.value}.{name} must be a positive {'integer' if integer else 'number'}, got {v!r}")

    if kind is ClassifierKind.GAUSSIAN_NB:
        positive("var_floor", integer=False)
    elif kind in (ClassifierKind.DECISION_TREE, ClassifierKind.RANDOM_FOREST):
        positive("min_samples_leaf")
        if p["max_depth"] is not None:
            positive("max_depth")
        if kind is ClassifierKind.RANDOM_FOREST:
            positive("n_trees")
    elif kind is ClassifierKind.KNN:
        positive("k")
    elif kind is ClassifierKind.ADABOOST:
        positive("n_estimators")
        positive("learning_rate", integer=False)
        positive("base_depth")
    elif kind is ClassifierKind.LINEAR_SVM:
        positive("C", integer=False)
        positive("epochs")
        positive("batch_size")


def _make(kind, p):
    seed = int(p["seed"])
    if kind is ClassifierKind.GAUSSIAN_NB:
        return GaussianNB(p["var_floor"])
    if kind is ClassifierKind.DECISION_TREE:
        return DecisionTree(p["max_depth"], p["min_samples_leaf"], None, seed)
    if kind is ClassifierKind.RANDOM_FOREST:
        return RandomForest(p["n_trees"], p["max_features"], p["bootstrap"], p["max_depth"],
                            p["min_samples_leaf"], seed)
    if kind is ClassifierKind.KNN:
        return KNearestNeighbors(p["k"])
    if kind is ClassifierKind.ADABOOST:
        return AdaBoost(p["n_estimators"], p["learning_rate"], p["base_depth"], seed)
    return LinearSVM(p["C"], p["epochs"], p["batch_size"], seed)


def _restore(kind, p, state):
    if kind is ClassifierKind.GAUSSIAN_NB:
        return GaussianNB.from_state(state, p["var_floor"])
    if kind is ClassifierKind.DECISION_TREE:
        return DecisionTree.from_state(state)
    if kind is ClassifierKind.RANDOM_FOREST:
        return RandomForest.from_state(state)
    if kind is ClassifierKind.KNN:
        return KNearestNeighbors.from_state(state, p["k"])
    if kind is ClassifierKind.ADABOOST:
        return AdaBoost.from_state(state)
    return LinearSVM.from_state(state)


@dataclass(frozen=True)
class Model:
    kind: ClassifierKind
    params: Mapping[str, Any]
    learner: Any
    feature_names: tuple[str, ...]


def _validate_training(train: FeatureMatrix):
    labels = np.asarray(train.labels)
    if len(np.unique(labels)) < 2:
        raise SingleClassCorpus("training data must contain both REAL and FAKE items")
    bad = np.argwhere(~np.isfinite(train.X))
    if len(bad):
        r, c = bad[0]
        raise NonFiniteFeature(int(r), train.feature_names[c])


def fit(kind, params: Mapping[str, Any] | None, train: FeatureMatrix) -> Model:
    kind = ClassifierKind.parse(kind)
    p = resolve_params(kind, params)
    _validate_training(train)
    learner = _make(kind, p).fit(train.X, np.asarray(train.labels, dtype=np.int64))
    return Model(kind, MappingProxyType(p), learner, tuple(train.feature_names))


def _check_columns(model: Model, rows: FeatureMatrix):
    if tuple(rows.feature_names) != model.feature_names:
        raise ColumnMismatch(model.feature_names, rows.feature_names)


def predict_scores(model: Model, rows: FeatureMatrix) -> np.ndarray:
    """Per-row score in [0, 1]; higher means more likely FAKE."""
    _check_columns(model, rows)
    return np.asarray(model.learner.score(rows.X), dtype=np.float64)


def predict_labels(model: Model, rows: FeatureMatrix, threshold: float = 0.5) -> np.ndarray:
    """FAKE (1) iff score >= threshold, so ties at the threshold go to FAKE."""
    return (predict_scores(model, rows) >= threshold).astype(np.int8)


def model_to_dict(model: Model) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": model.kind.value,
        "params": dict(model.params),
        "feature_names": list(model.feature_names),
        "state": model.learner.state(),
    }


def model_from_dict(d: Mapping) -> Model:
    if d.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"not a model file (format={d.get('format')!r})")
    if d.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"model version {d.get('version')!r} != supported {MODEL_VERSION}")
    kind = ClassifierKind.parse(d["kind"])
    p = resolve_params(kind, d["params"])
    learner = _restore(kind, p, d["state"])
    return Model(kind, MappingProxyType(p), learner, tuple(d["feature_names"]))


def save_model(model: Model, path) -> None:
    atomic_write_text(path, json.dumps(model_to_dict(model)))


def load_model(path) -> Model:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
