from .base import (
    DEFAULT_PARAMS,
    ClassifierKind,
    Model,
    fit,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_labels,
    predict_scores,
    resolve_params,
    save_model,
)
from .search import GridResult, Metric, evaluate, grid_search

__all__ = [
    "DEFAULT_PARAMS",
    "ClassifierKind",
    "GridResult",
    "Metric",
    "Model",
    "evaluate",
    "fit",
    "grid_search",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "predict_labels",
    "predict_scores",
    "resolve_params",
    "save_model",
]
