import json
import subprocess
import sys

import numpy as np
import pytest

from curvsel.cli import main, read_config
from curvsel.errors import ConfigError


@pytest.fixture
def table(tmp_path):
    rng = np.random.default_rng(0)
    lines = ["a,b,c,d,e,diagnosis"]
    for i in range(60):
        row = rng.normal(size=5) + (i % 3)
        cells = [repr(float(v)) for v in row]
        if i == 7:
            cells[3] = "?"  # column d gets dropped
        lines.append(",".join(cells + [["neg", "pos", "mid"][i % 3]]))
    path = tmp_path / "toy.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_csv(table, capsys):
    code, out, _ = run(["rank", "--data", table], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "rank,feature_name,feature_id,weight"
    assert len(lines) == 5
    assert "d" not in {line.split(",")[1] for line in lines[1:]}


def test_rank_json_and_baseline(table, capsys):
    code, out, _ = run(["rank", "--data", table, "--selector", "mi", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["method"] == "mi"


def test_rank_pca_rejected(table, capsys):
    code, _, err = run(["rank", "--data", table, "--selector", "pca"], capsys)
    assert code == 2 and "projections" in err


def test_select_top_k_writes_raw_columns(table, tmp_path, capsys):
    out = tmp_path / "sel.csv"
    code, _, _ = run(["select", "--data", table, "--top-k", 2, "--out", out], capsys)
    lines = out.read_text().splitlines()
    assert code == 0
    assert len(lines) == 61 and lines[0].endswith(",diagnosis")
    assert len(lines[0].split(",")) == 3
    assert lines[1].split(",")[-1] == "neg"


def test_select_threshold_all_and_empty(table, capsys):
    code, out, _ = run(["select", "--data", table, "--threshold", 0], capsys)
    assert code == 0 and out.splitlines()[0].count(",") == 4
    code, _, err = run(["select", "--data", table, "--threshold", 1e6], capsys)
    assert code == 4 and "no feature has weight above" in err


def test_select_needs_exactly_one_rule(table, capsys):
    assert run(["select", "--data", table], capsys)[0] == 2
    assert run(["select", "--data", table, "--top-k", 1, "--threshold", 0.1], capsys)[0] == 2


def test_select_pca(table, capsys):
    code, out, _ = run(["select", "--data", table, "--selector", "pca", "--top-k", 2], capsys)
    assert code == 0 and out.splitlines()[0] == "pc1,pc2,diagnosis"


def test_summary(table, capsys):
    code, out, _ = run(["summary", "--data", table], capsys)
    doc = json.loads(out)
    assert code == 0
    assert (doc["n_instances"], doc["n_features"], doc["n_classes"]) == (60, 4, 3)
    assert doc["dropped_columns"] == ["d"]
    assert sum(doc["class_percentages"]) == pytest.approx(100.0)


def test_summary_empty_file_is_parse_error(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(["summary", "--data", empty], capsys)[0] == 3


def test_two_rows_is_data_error(tmp_path, capsys):
    p = tmp_path / "two.csv"
    p.write_text("a,b,y\n1,2,x\n3,4,z\n")
    code, _, err = run(["rank", "--data", p], capsys)
    assert code == 4 and "3" in err


def test_bench_csv_and_repeatable(table, tmp_path, capsys):
    argv = ["bench", "--data", table, "--folds", 3, "--selector", "cfs,ig", "--normalizers", "mm,pnl2",
            "--classifiers", "gnb,dt", "--top-k", 2]
    code, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert code == 0 and a == b
    assert len(a.splitlines()) == 1 + 2 * 2 * 2


def test_bench_multi_format(table, tmp_path, capsys):
    stem = tmp_path / "rep"
    code, _, _ = run(["bench", "--data", table, "--folds", 3, "--selector", "cfs", "--normalizers", "mm",
                      "--classifiers", "knn", "--format", "csv,json,matrix", "--out", stem], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "rep.json").read_text())
    assert doc["metadata"]["config"]["folds"] == 3
    assert doc["metadata"]["k_features"] == 3  # default round(0.8 * 4)
    assert (tmp_path / "rep.csv").exists()
    assert "[CFS]" in (tmp_path / "rep.txt").read_text()


def test_bench_unknown_classifier(table, capsys):
    code, _, err = run(["bench", "--data", table, "--classifiers", "svm"], capsys)
    assert code == 2 and "valid names" in err and "knn" in err


def test_bench_unknown_format(table, capsys):
    assert run(["bench", "--data", table, "--format", "xml"], capsys)[0] == 2


def test_config_precedence(table, tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# toy run\ndata = {table}\nselector = ig\nformat = json\n")
    code, out, _ = run(["rank", "--config", cfg], capsys)
    assert code == 0 and json.loads(out)["method"] == "ig"
    code, out, _ = run(["rank", "--config", cfg, "--selector", "cst"], capsys)
    assert json.loads(out)["method"] == "cst"


def test_config_errors(tmp_path, table, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(["rank", "--data", table, "--config", cfg], capsys)[0] == 2
    cfg.write_text("no equals sign\n")
    with pytest.raises(ConfigError):
        read_config(cfg)
    assert run(["rank", "--data", table, "--config", tmp_path / "missing.cfg"], capsys)[0] == 2


def test_missing_data_flag(capsys):
    assert run(["rank"], capsys)[0] == 2


def test_module_entry_point(table):
    proc = subprocess.run(
        [sys.executable, "-m", "curvsel", "rank", "--data", str(table)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.startswith("rank,")
    help_text = subprocess.run([sys.executable, "-m", "curvsel", "bench", "--help"],
                               capture_output=True, text=True).stdout
    assert "exit codes" in help_text
