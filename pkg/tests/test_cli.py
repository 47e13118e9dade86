import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from lingcues.cli import main
from lingcues.config import CONFIG_KEYS, DATASET_KEYS, SELECTION_KEYS

FAST = {"random_forest": {"n_trees": 10}, "adaboost": {"n_estimators": 10}, "linear_svm": {"epochs": 10}}


def write_config(tmp_path, **overrides):
    cfg = {
        "datasets": [
            {"name": "alpha", "synthetic": {"n": 200, "seed": 1}},
            {"name": "beta", "synthetic": {"n": 160, "seed": 2, "strength": 0.5}},
        ],
        "params": FAST,
        "out": "out",
        **overrides,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def buzzfeed_csv(path, n_real=91, n_fake=91, bad_row=None):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "label", "title", "body"])
        for i in range(n_real + n_fake):
            label = "real" if i < n_real else "fake"
            if bad_row is not None and i + 1 == bad_row:
                label = "satire"
            w.writerow([f"bf{i}", label, f"Title {i}", f"Story number {i} reports on events of the day."])
    return path


def test_help_lists_every_config_key():
    out = subprocess.run([sys.executable, "-m", "lingcues.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for key in (*CONFIG_KEYS, *DATASET_KEYS, *SELECTION_KEYS):
        assert key in out.stdout
    for flag in ("--config", "--seed", "--out", "--dataset", "--fset", "--classifier"):
        assert flag in out.stdout


def test_unknown_config_key_is_config_error(tmp_path, capsys):
    path = write_config(tmp_path, sede=3)
    assert main(["ingest", "--config", str(path)]) == 1
    assert "sede" in capsys.readouterr().err


def test_usage_errors_exit_1(tmp_path):
    assert main(["ingest"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 1
    assert main(["ingest", "--dataset", str(tmp_path / "missing.csv")]) == 1


def test_ingest_summary_and_idempotence(tmp_path, capsys):
    src = buzzfeed_csv(tmp_path / "buzzfeed.csv")
    args = ["ingest", "--dataset", str(src), "--out", str(tmp_path / "out")]
    assert main(args) == 0
    assert "buzzfeed: 91 real / 91 fake" in capsys.readouterr().out
    cache = tmp_path / "out" / "corpora" / "buzzfeed.jsonl"
    first = cache.read_bytes()
    assert main(args) == 0
    assert cache.read_bytes() == first


def test_bad_label_row_is_data_error(tmp_path, capsys):
    src = buzzfeed_csv(tmp_path / "bad.csv", bad_row=7)
    assert main(["ingest", "--dataset", str(src), "--out", str(tmp_path / "out")]) == 2
    err = capsys.readouterr().err
    assert "row 7" in err and "satire" in err


def test_features_writes_matrices_and_warnings(tmp_path):
    src = tmp_path / "mixed.csv"
    with open(src, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "label", "title", "body"])
        w.writerow(["a", "real", "", "Officials said 12 new schools opened today."])
        w.writerow(["b", "fake", "Only a headline", ""])
        w.writerow(["c", "fake", "", "Shocking awful lies destroy everything, amazing!"])
    out = tmp_path / "out"
    assert main(["features", "--dataset", str(src), "--out", str(out), "--fset", "fset2"]) == 0
    assert main(["features", "--dataset", str(src), "--out", str(out), "--fset", "fset1"]) == 0
    fset2 = (out / "features" / "mixed.fset2.tsv").read_text().splitlines()
    assert len(fset2[0].split("\t")) == 9 and fset2[0].endswith("label")
    assert len((out / "features" / "mixed.fset1.tsv").read_text().splitlines()[0].split("\t")) == 19
    warnings = (out / "features" / "mixed.warnings.tsv").read_text().splitlines()
    assert warnings[0] == "id\twarning" and warnings[1].startswith("b\t")


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    root = tmp_path_factory.mktemp("run")
    cfg = write_config(root, seeds=[0, 1])
    codes = {cmd: main([cmd, "--config", str(cfg)]) for cmd in ("ingest", "features", "select", "train", "eval", "report")}
    return root, cfg, codes


def test_full_pipeline(pipeline):
    root, _, codes = pipeline
    assert set(codes.values()) == {0}
    out = root / "out"
    table = (out / "eval" / "comparison.tsv").read_text().splitlines()
    assert len(table) == 1 + 2 * 2 * 6
    charts = sorted(p.name for p in (out / "eval" / "charts").iterdir())
    assert charts == ["auc_pr_fset1.svg", "auc_pr_fset2.svg", "f1_fset1.svg", "f1_fset2.svg"]
    for name in charts:
        assert ET.parse(out / "eval" / "charts" / name).getroot().tag.endswith("svg")
    assert len(list((out / "models").glob("alpha.*.json"))) == 2 * 6 + 1
    assert (out / "eval" / "spread.tsv").exists()
    sel = json.loads((out / "selection" / "alpha.json").read_text())
    assert set(sel["entropy"]) >= {"ent", "div", "wgt"}
    report = (out / "report.md").read_text()
    assert "## PR-AUC, fset2" in report and "Feature selection: beta" in report


def test_eval_and_select_are_byte_identical_on_rerun(pipeline):
    root, cfg, _ = pipeline
    out = root / "out"
    before = {p: p.read_bytes() for p in [out / "eval" / "comparison.tsv", out / "selection" / "alpha.json"]}
    assert main(["eval", "--config", str(cfg)]) == 0
    assert main(["select", "--config", str(cfg)]) == 0
    for p, data in before.items():
        assert p.read_bytes() == data


def test_flags_override_config(pipeline, tmp_path):
    _, cfg, _ = pipeline
    out = tmp_path / "o"
    assert main(["eval", "--config", str(cfg), "--out", str(out), "--dataset", "beta",
                 "--fset", "fset2", "--classifier", "knn", "--classifier", "gaussian_nb"]) == 0
    rows = (out / "eval" / "comparison.tsv").read_text().splitlines()[1:]
    assert len(rows) == 2
    assert {r.split("\t")[0] for r in rows} == {"beta"}


def test_noise_corpus_fails_auc_floor(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        datasets=[{"name": "noise", "synthetic": {"n": 1000, "seed": 4, "signal": False}}],
        selection={"threshold": 0.0, "auc_floor": 0.6},
    )
    assert main(["select", "--config", str(cfg)]) == 2
    assert "PR-AUC 0.6" in capsys.readouterr().err


def test_report_without_eval_is_config_error(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["report", "--config", str(cfg)]) == 1
