"""Run configuration: a JSON document with a fixed schema.

Precedence, lowest to highest: built-in defaults, the ``--config`` file,
command-line flags. Unknown keys anywhere in the document are an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .classifiers import DEFAULT_PARAMS, ClassifierKind, Metric, resolve_params
from .errors import ConfigError
from .features import FSet
from .selection import Orientation, SelectionConfig

# key -> help text; the CLI prints this table under --help
CONFIG_KEYS: dict[str, str] = {
    "datasets": "list of dataset entries (see dataset keys below)",
    "fsets": 'feature sets to evaluate, e.g. ["fset1", "fset2"]',
    "classifiers": "classifier kinds to run: " + ", ".join(k.value for k in ClassifierKind),
    "params": "per-classifier hyperparameters, {kind: {name: value}}",
    "grids": "per-classifier search grids, {kind: {name: [values]}}; searched on an inner split",
    "grid_metric": "metric maximized by grid search: auc_pr or f1",
    "seed": "integer seed for splits and learners",
    "seeds": "extra seeds for the repeated-split summary written by eval (optional)",
    "train_fraction": "train share of each split, in (0, 1)",
    "out": "output directory (relative paths resolve against the config file)",
    "selection": "feature selection settings (see selection keys below)",
}
DATASET_KEYS: dict[str, str] = {
    "name": "dataset name used in file names and reports",
    "path": "corpus file (csv, json, jsonl) or FNC-1 stances csv",
    "format": "csv, json, jsonl or fnc1 (inferred from the extension when omitted)",
    "bodies": "FNC-1 bodies csv (format fnc1 only)",
    "synthetic": "generate instead of reading: {n, fake_fraction, seed, signal, strength}",
}
SYNTHETIC_KEYS = ("n", "fake_fraction", "seed", "signal", "strength")
SELECTION_KEYS: dict[str, str] = {
    "threshold": "minimum |correlation| with the class for a feature to be ranked",
    "auc_floor": "validation PR-AUC the first kept feature must reach",
    "tolerance": "PR-AUC gain a further feature must exceed to be kept",
    "learner": "classifier kind used by the wrapper stage",
    "learner_params": "hyperparameters for the wrapper learner",
    "orientation": "TOPSIS closeness orientation: paper or standard",
}


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    path: Path | None = None
    format: str | None = None
    bodies: Path | None = None
    synthetic: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class RunConfig:
    datasets: tuple[DatasetSpec, ...] = ()
    fsets: tuple[FSet, ...] = (FSet.FSET1, FSet.FSET2)
    classifiers: tuple[ClassifierKind, ...] = tuple(ClassifierKind)
    params: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)
    grids: Mapping[str, Mapping[str, list]] = field(default_factory=dict)
    grid_metric: Metric = Metric.AUC_PR
    seed: int = 0
    seeds: tuple[int, ...] = ()
    train_fraction: float = 0.7
    out: Path = Path("out")
    selection: SelectionConfig = SelectionConfig()


def help_text() -> str:
    def block(title, keys):
        width = max(len(k) for k in keys)
        return [title] + [f"  {k.ljust(width)}  {v}" for k, v in keys.items()]

    lines = block("config keys:", CONFIG_KEYS) + [""]
    lines += block("dataset keys:", DATASET_KEYS) + [f"  synthetic keys: {', '.join(SYNTHETIC_KEYS)}", ""]
    lines += block("selection keys:", SELECTION_KEYS)
    return "\n".join(lines)


def _unknown(where, d, allowed):
    if not isinstance(d, Mapping):
        raise ConfigError(f"{where} must be an object")
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"unknown {where} key(s) {extra}; allowed: {sorted(allowed)}")


def _enum(cls, value, where):
    try:
        return cls.parse(value) if hasattr(cls, "parse") else cls(str(value).lower())
    except (ValueError, ConfigError):
        raise ConfigError(f"{where}: invalid value {value!r}") from None


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _dataset(entry, base: Path, i: int) -> DatasetSpec:
    where = f"datasets[{i}]"
    _unknown(where, entry, DATASET_KEYS)
    synthetic = entry.get("synthetic")
    if synthetic is not None:
        _unknown(f"{where}.synthetic", synthetic, SYNTHETIC_KEYS)
        return DatasetSpec(str(entry.get("name", f"synthetic{i}")), synthetic=dict(synthetic))
    if "path" not in entry:
        raise ConfigError(f"{where} needs 'path' or 'synthetic'")
    path = (base / entry["path"]).resolve() if not Path(entry["path"]).is_absolute() else Path(entry["path"])
    fmt = entry.get("format")
    if fmt is not None and fmt not in ("csv", "json", "jsonl", "fnc1"):
        raise ConfigError(f"{where}.format: unsupported {fmt!r}")
    bodies = entry.get("bodies")
    if fmt == "fnc1" and bodies is None:
        raise ConfigError(f"{where}: format fnc1 needs 'bodies'")
    if bodies is not None:
        bodies = (base / bodies).resolve() if not Path(bodies).is_absolute() else Path(bodies)
    name = str(entry.get("name", path.stem))
    return DatasetSpec(name, path, fmt, bodies)


def _selection(d) -> SelectionConfig:
    _unknown("selection", d, SELECTION_KEYS)
    defaults = SelectionConfig()
    learner = _enum(ClassifierKind, d.get("learner", defaults.learner), "selection.learner")
    learner_params = dict(d.get("learner_params", {}))
    resolve_params(learner, learner_params)
    try:
        cfg = SelectionConfig(
            threshold=float(d.get("threshold", defaults.threshold)),
            auc_floor=float(d.get("auc_floor", defaults.auc_floor)),
            tolerance=float(d.get("tolerance", defaults.tolerance)),
            learner=learner,
            learner_params=learner_params,
            orientation=_enum(Orientation, d.get("orientation", defaults.orientation.value), "selection.orientation"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"selection: {exc}") from None
    if cfg.tolerance < 0:
        raise ConfigError("selection.tolerance must be >= 0")
    return cfg


def parse_config(d: Mapping[str, Any], base: Path = Path(".")) -> RunConfig:
    _unknown("config", d, CONFIG_KEYS)
    datasets = d.get("datasets", [])
    if not isinstance(datasets, list):
        raise ConfigError("datasets must be a list")
    specs = tuple(_dataset(e, base, i) for i, e in enumerate(datasets))
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError(f"dataset names must be unique, got {names}")
    fsets = tuple(_enum(FSet, f, "fsets") for f in d.get("fsets", ["fset1", "fset2"]))
    kinds = tuple(_enum(ClassifierKind, k, "classifiers") for k in d.get("classifiers", [k.value for k in ClassifierKind]))
    params = {}
    for k, p in d.get("params", {}).items():
        kind = _enum(ClassifierKind, k, "params")
        resolve_params(kind, p)
        params[kind.value] = dict(p)
    grids = {}
    for k, g in d.get("grids", {}).items():
        kind = _enum(ClassifierKind, k, "grids")
        _unknown(f"grids.{kind.value}", g, list(DEFAULT_PARAMS[kind]) + ["seed"])
        if not all(isinstance(v, list) and v for v in g.values()):
            raise ConfigError(f"grids.{kind.value}: every entry must be a non-empty list")
        grids[kind.value] = {name: list(v) for name, v in g.items()}
    train_fraction = d.get("train_fraction", 0.7)
    if not isinstance(train_fraction, (int, float)) or not 0.0 < train_fraction < 1.0:
        raise ConfigError(f"train_fraction must be in (0, 1), got {train_fraction!r}")
    out = Path(d.get("out", "out"))
    return RunConfig(
        datasets=specs,
        fsets=fsets,
        classifiers=kinds,
        params=params,
        grids=grids,
        grid_metric=_enum(Metric, d.get("grid_metric", "auc_pr"), "grid_metric"),
        seed=_int(d.get("seed", 0), "seed"),
        seeds=tuple(_int(s, "seeds") for s in d.get("seeds", [])),
        train_fraction=float(train_fraction),
        out=out if out.is_absolute() else (base / out),
        selection=_selection(d.get("selection", {})),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(d, path.parent)


def validate_paths(cfg: RunConfig) -> None:
    for ds in cfg.datasets:
        for p in (ds.path, ds.bodies):
            if p is not None and not p.exists():
                raise ConfigError(f"dataset {ds.name!r}: {p} does not exist")
