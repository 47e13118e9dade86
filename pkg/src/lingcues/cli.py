"""``lingcues`` command line: ingest -> features -> select -> train -> eval -> report.

Each stage reads and writes files under the output directory, so stages can
be rerun on their own. Exit codes: 0 success, 1 usage or config error,
2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ._io import atomic_write_text
from .charts import chart_set
from .classifiers import ClassifierKind, fit, predict_scores, save_model
from .config import RunConfig, help_text, load_config, parse_config, validate_paths
from .corpus_io import (
    Corpus,
    corpus_summary,
    dumps_corpus,
    load_corpus,
    load_fnc1_pair,
    remap_fnc_stances,
    split_indices,
)
from .errors import ConfigError, DataError, LingCuesError
from .evaluation import ComparisonTable, repeated, run_experiment, spread_tsv
from .features import BASE_FEATURES, FSet, StatsSource, build_matrix, class_means, extract_corpus
from .metrics import auc_pr
from .selection import select_features
from .synthetic import synthetic_corpus

log = logging.getLogger("lingcues")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("ingest", "features", "select", "train", "eval", "report")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="lingcues",
        description="Linguistic-cue fake-news features, feature selection, and classifier comparison.",
        epilog=help_text() + "\n\nprecedence: defaults < --config file < command-line flags",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--seed", type=int, help="override 'seed'")
    p.add_argument("--out", type=Path, help="override 'out'")
    p.add_argument("--dataset", action="append", default=[],
                   help="restrict to a configured dataset name, or add a corpus file (repeatable)")
    p.add_argument("--fset", choices=[f.value for f in FSet], help="override 'fsets' with a single set")
    p.add_argument("--classifier", action="append", default=[], metavar="KIND",
                   help="override 'classifiers' (repeatable): " + ", ".join(k.value for k in ClassifierKind))
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return p


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else parse_config({})
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, out=args.out)
    if args.dataset:
        known = {d.name: d for d in cfg.datasets}
        picked = []
        for value in args.dataset:
            if value in known:
                picked.append(known[value])
            else:
                extra = parse_config({"datasets": [{"path": str(Path(value).resolve())}]}).datasets[0]
                picked.append(extra)
        cfg = replace(cfg, datasets=tuple(picked))
    if args.fset:
        cfg = replace(cfg, fsets=(FSet(args.fset),))
    if args.classifier:
        cfg = replace(cfg, classifiers=tuple(ClassifierKind.parse(k) for k in args.classifier))
    if not cfg.datasets:
        raise ConfigError("no datasets configured (use 'datasets' in --config or --dataset PATH)")
    validate_paths(cfg)
    return cfg


def _cache_path(cfg: RunConfig, name: str) -> Path:
    return cfg.out / "corpora" / f"{name}.jsonl"


def read_source(spec) -> Corpus:
    if spec.synthetic is not None:
        s = spec.synthetic
        return synthetic_corpus(int(s.get("n", 2000)), float(s.get("fake_fraction", 0.5)), int(s.get("seed", 0)),
                                signal=bool(s.get("signal", True)), strength=float(s.get("strength", 1.0)),
                                name=spec.name)
    if spec.format == "fnc1":
        return remap_fnc_stances(load_fnc1_pair(spec.path, spec.bodies), spec.name)
    return load_corpus(spec.path, spec.format, spec.name)


def load_dataset(cfg: RunConfig, spec) -> Corpus:
    """The ingest cache when present, else the source."""
    cache = _cache_path(cfg, spec.name)
    if cache.exists():
        return load_corpus(cache, "jsonl", spec.name)
    return read_source(spec)


def _write(path: Path, text: str) -> None:
    atomic_write_text(path, text)
    log.info("wrote %s", path)


def cmd_ingest(cfg: RunConfig) -> int:
    for spec in cfg.datasets:
        corpus = read_source(spec)
        _write(_cache_path(cfg, spec.name), dumps_corpus(corpus))
        summary = corpus_summary(corpus)
        _write(cfg.out / "corpora" / f"{spec.name}.summary.json", json.dumps(summary.to_dict(), indent=2) + "\n")
        print(f"{spec.name}: {summary.real} real / {summary.fake} fake")
    return EXIT_OK


def cmd_features(cfg: RunConfig) -> int:
    for spec in cfg.datasets:
        corpus = load_dataset(cfg, spec)
        base = extract_corpus(corpus)
        stats = class_means(base.values, corpus.labels, BASE_FEATURES)
        folder = cfg.out / "features"
        _write(folder / f"{spec.name}.stats.json", json.dumps(stats.to_dict(), indent=2) + "\n")
        for fset in cfg.fsets:
            m = build_matrix(corpus, fset, StatsSource.TRAIN_CLASS_MEANS, stats, base=base)
            _write(folder / f"{spec.name}.{fset.value}.tsv", m.to_tsv())
            print(f"{spec.name}: {fset.value} {len(m)} rows x {len(m.feature_names)} features")
        empties = [i for i, e in zip(base.ids, base.empty) if e]
        _write(folder / f"{spec.name}.warnings.tsv",
               "id\twarning\n" + "".join(f"{i}\tempty document; base ratios set to 0\n" for i in empties))
        if empties:
            print(f"{spec.name}: {len(empties)} empty document(s), see {spec.name}.warnings.tsv", file=sys.stderr)
    return EXIT_OK


def selection_matrices(cfg: RunConfig, corpus: Corpus):
    """ALL-feature matrices for the selection stage, built from the training part only.

    The training part is split again into a fitting part and a validation
    part; both use class-mean variance features against the fitting part's
    class means.
    """
    train_idx, _ = split_indices(corpus.labels, cfg.train_fraction, cfg.seed)
    train = corpus.subset(train_idx)
    fit_idx, val_idx = split_indices(train.labels, cfg.train_fraction, cfg.seed)
    base = extract_corpus(train)
    stats = class_means(base.values[fit_idx], train.labels[fit_idx], BASE_FEATURES)
    fit_m = build_matrix(train.subset(fit_idx), FSet.ALL, StatsSource.TRAIN_CLASS_MEANS, stats, base=base.take(fit_idx))
    val_m = build_matrix(train.subset(val_idx), FSet.ALL, StatsSource.TRAIN_CLASS_MEANS, stats, base=base.take(val_idx))
    return fit_m, val_m


def cmd_select(cfg: RunConfig) -> int:
    for spec in cfg.datasets:
        corpus = load_dataset(cfg, spec)
        fit_m, val_m = selection_matrices(cfg, corpus)
        selection = cfg.selection
        if selection.learner_params.get("seed") is None:
            selection = replace(selection, learner_params={**selection.learner_params, "seed": cfg.seed})
        report = select_features(fit_m, val_m, selection)
        _write(cfg.out / "selection" / f"{spec.name}.json", report.to_json())
        print(f"{spec.name}: ranked {', '.join(report.ranked_features)}")
        print(f"{spec.name}: kept {', '.join(report.wrapper_kept)}")
        print(f"{spec.name}: topsis {' > '.join(report.topsis_ranking)}")
    return EXIT_OK


def cmd_train(cfg: RunConfig) -> int:
    for spec in cfg.datasets:
        corpus = load_dataset(cfg, spec)
        train_idx, test_idx = split_indices(corpus.labels, cfg.train_fraction, cfg.seed)
        base = extract_corpus(corpus)
        train_c, test_c = corpus.subset(train_idx), corpus.subset(test_idx)
        stats = class_means(base.values[train_idx], train_c.labels, BASE_FEATURES)
        folder = cfg.out / "models"
        _write(folder / f"{spec.name}.stats.json", json.dumps(stats.to_dict(), indent=2) + "\n")
        for fset in cfg.fsets:
            train_m = build_matrix(train_c, fset, StatsSource.POOLED, stats, base=base.take(train_idx))
            test_m = build_matrix(test_c, fset, StatsSource.POOLED, stats, base=base.take(test_idx))
            for kind in cfg.classifiers:
                params = {**cfg.params.get(kind.value, {}), "seed": cfg.seed}
                model = fit(kind, params, train_m)
                path = folder / f"{spec.name}.{fset.value}.{kind.value}.json"
                save_model(model, path)
                log.info("wrote %s", path)
                score = auc_pr(predict_scores(model, test_m), test_m.labels)
                print(f"{spec.name}\t{fset.value}\t{kind.value}\tauc_pr={score:.4f}")
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    corpora = [load_dataset(cfg, spec) for spec in cfg.datasets]
    kwargs = dict(fsets=cfg.fsets, kinds=cfg.classifiers, train_fraction=cfg.train_fraction,
                  params=cfg.params, grids=cfg.grids, grid_metric=cfg.grid_metric)
    table = run_experiment(corpora, seed=cfg.seed, **kwargs)
    folder = cfg.out / "eval"
    _write(folder / "comparison.tsv", table.to_tsv())
    _write(folder / "comparison.json", table.to_json())
    for name, svg in chart_set(table, fsets=cfg.fsets).items():
        _write(folder / "charts" / name, svg)
    if cfg.seeds:
        _, rows = repeated(corpora, cfg.seeds, **kwargs)
        _write(folder / "spread.tsv", spread_tsv(rows))
    sys.stdout.write(table.to_tsv())
    for r in table.failures:
        print(f"cell failed: {r.dataset}/{r.fset.value}/{r.classifier.value}: {r.error}", file=sys.stderr)
    if len(table.failures) == len(table):
        print("every cell failed", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def render_report(table: ComparisonTable, selections: dict[str, dict]) -> str:
    lines = ["# lingcues report", ""]
    for metric, title in (("auc_pr", "PR-AUC"), ("f1", "F1")):
        fsets = list(dict.fromkeys(r.fset for r in table))
        kinds = list(dict.fromkeys(r.classifier for r in table))
        for fset in fsets:
            lines += [f"## {title}, {fset.value}", "", "| dataset | " + " | ".join(k.value for k in kinds) + " |",
                      "|---|" + "---|" * len(kinds)]
            for ds in table.datasets:
                cells = []
                for k in kinds:
                    try:
                        r = table.cell(ds, fset, k)
                    except KeyError:
                        cells.append("")
                        continue
                    cells.append(f"{getattr(r, metric):.4f}" if r.ok else "error")
                lines.append(f"| {ds} | " + " | ".join(cells) + " |")
            lines.append("")
    for name, sel in selections.items():
        lines += [f"## Feature selection: {name}", "",
                  f"- ranked: {', '.join(sel['ranked_features'])}",
                  f"- kept: {', '.join(sel['wrapper_kept'])}",
                  f"- TOPSIS ({sel['topsis']['orientation']}): {' > '.join(sel['topsis']['ranking'])}", ""]
    return "\n".join(lines)


def cmd_report(cfg: RunConfig) -> int:
    src = cfg.out / "eval" / "comparison.json"
    if not src.exists():
        raise ConfigError(f"{src} not found; run 'lingcues eval' first")
    table = ComparisonTable.from_json(src.read_text(encoding="utf-8"))
    selections = {}
    for spec in cfg.datasets:
        p = cfg.out / "selection" / f"{spec.name}.json"
        if p.exists():
            selections[spec.name] = json.loads(p.read_text(encoding="utf-8"))
    text = render_report(table, selections)
    _write(cfg.out / "report.md", text)
    for name, svg in chart_set(table, fsets=list(dict.fromkeys(r.fset for r in table))).items():
        _write(cfg.out / "eval" / "charts" / name, svg)
    print(text)
    return EXIT_OK


HANDLERS = {
    "ingest": cmd_ingest,
    "features": cmd_features,
    "select": cmd_select,
    "train": cmd_train,
    "eval": cmd_eval,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        return HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except LingCuesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
