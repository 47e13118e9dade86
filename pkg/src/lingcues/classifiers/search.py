from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

from ..features import FeatureMatrix
from ..metrics import auc_pr, confusion, f1
from .base import ClassifierKind, fit, predict_labels, predict_scores, resolve_params


class Metric(str, Enum):
    AUC_PR = "auc_pr"
    F1 = "f1"


@dataclass(frozen=True)
class GridResult:
    best_params: dict[str, Any]
    best_score: float
    table: tuple[tuple[dict[str, Any], float], ...]


def evaluate(kind, params, train: FeatureMatrix, validation: FeatureMatrix, metric=Metric.AUC_PR) -> float:
    model = fit(kind, params, train)
    if Metric(metric) is Metric.AUC_PR:
        return auc_pr(predict_scores(model, validation), validation.labels)
    return f1(confusion(predict_labels(model, validation), validation.labels))


def grid_search(
    kind,
    grid: Mapping[str, Sequence[Any]],
    train: FeatureMatrix,
    validation: FeatureMatrix,
    metric=Metric.AUC_PR,
    seed: int = 0,
) -> GridResult:
    """Exhaustive search in listed order; the first grid point wins ties."""
    kind = ClassifierKind.parse(kind)
    keys = list(grid)
    table = []
    best = None
    for values in itertools.product(*(grid[k] for k in keys)):
        params = resolve_params(kind, {**dict(zip(keys, values)), "seed": seed})
        score = evaluate(kind, params, train, validation, metric)
        table.append((params, score))
        if best is None or score > best[1]:
            best = (params, score)
    if best is None:
        raise ValueError("grid is empty")
    return GridResult(best[0], best[1], tuple(table))
