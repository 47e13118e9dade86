"""Experiment grid: corpora x feature sets x classifiers, one seeded split per cell."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .classifiers import ClassifierKind, Metric, fit, grid_search, predict_labels, predict_scores
from .corpus_io import Corpus, split_indices
from .errors import LingCuesError
from .features import FSet, StatsSource, build_matrix, class_means, extract_corpus, BASE_FEATURES
from .metrics import Confusion, auc_pr, confusion, f1

DEFAULT_FSETS = (FSet.FSET1, FSet.FSET2)
DEFAULT_KINDS = tuple(ClassifierKind)


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    fset: FSet
    classifier: ClassifierKind
    seed: int
    train_fraction: float
    auc_pr: float = math.nan
    f1: float = math.nan
    confusion: Confusion | None = None
    feature_names: tuple[str, ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        cm = self.confusion
        return {
            "dataset": self.dataset,
            "fset": self.fset.value,
            "classifier": self.classifier.value,
            "seed": self.seed,
            "train_fraction": self.train_fraction,
            "auc_pr": None if not self.ok else self.auc_pr,
            "f1": None if not self.ok else self.f1,
            "confusion": None if cm is None else dict(cm._asdict()),
            "feature_names": list(self.feature_names),
            "params": dict(self.params),
            "error": self.error,
        }


TSV_COLUMNS = ("dataset", "fset", "classifier", "seed", "train_fraction", "auc_pr", "f1",
               "tp", "fp", "tn", "fn", "n_features", "error")


def _fmt(x) -> str:
    return "NA" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(x) if isinstance(x, float) else str(x)


@dataclass(frozen=True)
class ComparisonTable:
    reports: tuple[EvalReport, ...]

    def __len__(self):
        return len(self.reports)

    def __iter__(self):
        return iter(self.reports)

    def cell(self, dataset: str, fset, classifier) -> EvalReport:
        fset, classifier = FSet(fset), ClassifierKind.parse(classifier)
        for r in self.reports:
            if r.dataset == dataset and r.fset is fset and r.classifier is classifier:
                return r
        raise KeyError((dataset, fset, classifier))

    @property
    def datasets(self) -> list[str]:
        return list(dict.fromkeys(r.dataset for r in self.reports))

    @property
    def failures(self) -> list[EvalReport]:
        return [r for r in self.reports if not r.ok]

    def to_tsv(self) -> str:
        lines = ["\t".join(TSV_COLUMNS)]
        for r in self.reports:
            cm = r.confusion or Confusion(None, None, None, None)
            err = (r.error or "").replace("\t", " ").replace("\n", " ")
            auc = r.auc_pr if r.ok else None
            f = r.f1 if r.ok else None
            row = (r.dataset, r.fset.value, r.classifier.value, r.seed, float(r.train_fraction), auc, f,
                   cm.tp, cm.fp, cm.tn, cm.fn, len(r.feature_names), err)
            lines.append("\t".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"reports": [r.to_dict() for r in self.reports]}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ComparisonTable":
        reports = []
        for d in json.loads(text)["reports"]:
            cm = d.get("confusion")
            reports.append(EvalReport(
                d["dataset"], FSet(d["fset"]), ClassifierKind.parse(d["classifier"]), d["seed"],
                d["train_fraction"],
                math.nan if d["auc_pr"] is None else d["auc_pr"],
                math.nan if d["f1"] is None else d["f1"],
                None if cm is None else Confusion(**cm),
                tuple(d.get("feature_names", ())), d.get("params", {}), d.get("error"),
            ))
        return cls(tuple(reports))


def _grid_for(kind, grids):
    if not grids:
        return None
    return grids.get(kind) or grids.get(kind.value)


def _params_for(kind, params):
    if not params:
        return {}
    return dict(params.get(kind) or params.get(kind.value) or {})


def evaluate_corpus(
    corpus: Corpus,
    fsets: Sequence = DEFAULT_FSETS,
    kinds: Sequence = DEFAULT_KINDS,
    seed: int = 0,
    train_fraction: float = 0.7,
    params: Mapping | None = None,
    grids: Mapping | None = None,
    grid_metric: Metric = Metric.AUC_PR,
) -> list[EvalReport]:
    """All (fset, classifier) cells for one corpus.

    Class statistics come from the training part only. Models are trained and
    scored on POOLED variance features centered on the training means, so the
    test side never reads its own labels. When a grid is configured for a
    kind, it is searched on an inner split of the training part first.
    """
    fsets = [FSet(f) for f in fsets]
    kinds = [ClassifierKind.parse(k) for k in kinds]
    cells = [(f, k) for f in fsets for k in kinds]

    def failed(f, k, exc):
        return EvalReport(corpus.name, f, k, seed, train_fraction, error=f"{type(exc).__name__}: {exc}")

    try:
        train_idx, test_idx = split_indices(corpus.labels, train_fraction, seed)
        base = extract_corpus(corpus)
        train_c, test_c = corpus.subset(train_idx), corpus.subset(test_idx)
        train_base, test_base = base.take(train_idx), base.take(test_idx)
        stats = class_means(train_base.values, train_c.labels, BASE_FEATURES)
        if grids:
            inner_tr, inner_va = split_indices(train_c.labels, train_fraction, seed)
            inner_stats = class_means(train_base.values[inner_tr], train_c.labels[inner_tr], BASE_FEATURES)
    except LingCuesError as exc:
        return [failed(f, k, exc) for f, k in cells]

    reports = []
    for f in fsets:
        try:
            train_m = build_matrix(train_c, f, StatsSource.POOLED, stats, base=train_base)
            test_m = build_matrix(test_c, f, StatsSource.POOLED, stats, base=test_base)
            if grids:
                inner_m = build_matrix(train_c, f, StatsSource.POOLED, inner_stats, base=train_base)
        except LingCuesError as exc:
            reports += [failed(f, k, exc) for k in kinds]
            continue
        for k in kinds:
            try:
                chosen = {**_params_for(k, params), "seed": seed}
                grid = _grid_for(k, grids)
                if grid:
                    fixed = {key: v for key, v in chosen.items() if key not in grid}
                    search = grid_search(k, {**{key: [v] for key, v in fixed.items() if key != "seed"}, **grid},
                                         inner_m.rows(inner_tr), inner_m.rows(inner_va), grid_metric, seed)
                    chosen = search.best_params
                model = fit(k, chosen, train_m)
                scores = predict_scores(model, test_m)
                cm = confusion(predict_labels(model, test_m), test_m.labels)
                reports.append(EvalReport(corpus.name, f, k, seed, train_fraction, auc_pr(scores, test_m.labels),
                                          f1(cm), cm, tuple(model.feature_names), dict(model.params)))
            except LingCuesError as exc:
                reports.append(failed(f, k, exc))
    return reports


def run_experiment(
    corpora: Sequence[Corpus],
    fsets: Sequence = DEFAULT_FSETS,
    kinds: Sequence = DEFAULT_KINDS,
    seed: int = 0,
    train_fraction: float = 0.7,
    params: Mapping | None = None,
    grids: Mapping | None = None,
    grid_metric: Metric = Metric.AUC_PR,
) -> ComparisonTable:
    reports = []
    for corpus in corpora:
        reports += evaluate_corpus(corpus, fsets, kinds, seed, train_fraction, params, grids, grid_metric)
    return ComparisonTable(tuple(reports))


@dataclass(frozen=True)
class SpreadRow:
    dataset: str
    fset: FSet
    classifier: ClassifierKind
    metric: str
    mean: float
    std: float
    n: int


def repeated(
    corpora: Sequence[Corpus],
    seeds: Sequence[int],
    **kwargs,
) -> tuple[list[ComparisonTable], list[SpreadRow]]:
    """Run the grid once per seed and summarize each cell as mean and spread."""
    tables = [run_experiment(corpora, seed=s, **kwargs) for s in seeds]
    rows = []
    for r0 in tables[0]:
        for metric in ("auc_pr", "f1"):
            vals = [getattr(t.cell(r0.dataset, r0.fset, r0.classifier), metric) for t in tables]
            vals = np.array([v for v in vals if not math.isnan(v)])
            mean = float(vals.mean()) if len(vals) else math.nan
            std = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0 if len(vals) else math.nan
            rows.append(SpreadRow(r0.dataset, r0.fset, r0.classifier, metric, mean, std, len(vals)))
    return tables, rows


def spread_tsv(rows: Sequence[SpreadRow]) -> str:
    lines = ["dataset\tfset\tclassifier\tmetric\tmean\tstd\tn"]
    for r in rows:
        lines.append("\t".join([r.dataset, r.fset.value, r.classifier.value, r.metric, _fmt(r.mean),
                                _fmt(r.std), str(r.n)]))
    return "\n".join(lines) + "\n"
