import json

import pytest

from cblock.cli import main
from cblock.core import load_dataset, read_assignment


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert main(["synth", "--out-dir", str(out), "--n-base", "400", "--dup-rate", "0.15", "--seed", "5"]) == 0
    return out


def _train(data_dir, tmp_path, *extra):
    model = tmp_path / "model.json"
    argv = [
        "train", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
        "--pairs", str(data_dir / "pairs.csv"), "--max-size", "30", "--out", str(model), *extra,
    ]
    assert main(argv) == 0
    return model


def test_synth_outputs(data_dir):
    assert {p.name for p in data_dir.iterdir()} == {"data.jsonl", "schema.json", "pairs.csv"}
    assert len(load_dataset(data_dir / "data.jsonl", data_dir / "schema.json")) == 460


def test_train_apply_roundtrip(data_dir, tmp_path):
    model = _train(data_dir, tmp_path, "--language", "blktree", "--rounds", "1")
    assert json.loads(model.read_text())["language"] == "blktree"
    out = tmp_path / "a.tsv"
    assert main(["apply", "--model", str(model), "--data", str(data_dir / "data.jsonl"), "--out", str(out)]) == 0
    assign = read_assignment(out)
    assert len(out.read_text().splitlines()) == 460
    assert assign.stats(0).max_size <= 30


def test_multi_round_apply(data_dir, tmp_path):
    model = _train(data_dir, tmp_path, "--rounds", "3", "--strategy", "expected")
    assert "rounds" in json.loads(model.read_text())
    out = tmp_path / "a.tsv"
    assert main(["apply", "--model", str(model), "--data", str(data_dir / "data.jsonl"), "--out", str(out)]) == 0
    assign = read_assignment(out)
    assert len(out.read_text().splitlines()) == 460 * len(assign.rounds)
    assert all(s.max_size <= 30 for s in assign.all_stats())


def test_train_is_deterministic(data_dir, tmp_path):
    first, second = tmp_path / "x", tmp_path / "y"
    first.mkdir()
    second.mkdir()
    a = _train(data_dir, first, "--drilldown", "year")
    b = _train(data_dir, second, "--drilldown", "year")
    assert a.read_bytes() == b.read_bytes()


def test_rollup_and_machines(data_dir, tmp_path, capsys):
    model = _train(data_dir, tmp_path, "--rounds", "1")
    assign = tmp_path / "a.tsv"
    main(["apply", "--model", str(model), "--data", str(data_dir / "data.jsonl"), "--out", str(assign)])
    remap = tmp_path / "remap.tsv"
    argv = ["rollup", "--assignment", str(assign), "--pairs", str(data_dir / "pairs.csv"), "--max-size", "30"]
    assert main([*argv, "--out", str(remap)]) == 0
    rows = [line.split("\t") for line in remap.read_text().splitlines()]
    assert {old for old, _ in rows} == set(read_assignment(assign).rounds[0].values())
    assert main(["assign-machines", "--assignment", str(assign), "--machines", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) >= {"cost", "X", "ratio", "per_machine_loads"}
    assert report["bound_ok"] and len(report["per_machine_loads"]) == 4


def test_drilldown_command(data_dir, capsys):
    argv = ["drilldown", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
            "--attr", "year", "--pairs", str(data_dir / "pairs.csv"), "--max-cost", "60"]
    assert main(argv) == 0
    spec = json.loads(capsys.readouterr().out)
    assert spec["kind"] == "interval_partition" and spec["params"]["ordering"] == "numeric"


def test_eval_command(data_dir, capsys):
    argv = ["eval", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
            "--pairs", str(data_dir / "pairs.csv"), "--max-size", "30", "--rounds", "2"]
    assert main(argv) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["per_fold"]) == 5 and 0 <= report["mean_test_recall"] <= 1


def test_experiment_writes_csv_and_figures(data_dir, tmp_path):
    out = tmp_path / "rep" / "report.csv"
    argv = ["experiment", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
            "--pairs", str(data_dir / "pairs.csv"), "--sizes", "20,80", "--languages", "random,single,blktree",
            "--strategies", "optimistic", "--rounds", "2", "--folds", "1", "--out", str(out)]
    assert main(argv) == 0
    assert out.read_text().startswith("S,language,strategy,rounds,fold,recall,apply_us_per_record\n")
    figures = sorted(p.name for p in out.parent.glob("*.png"))
    assert figures == ["report_disjoint_nondisjoint.png", "report_iterations.png", "report_overall_recall.png"]


def test_missing_flag_exits_1(data_dir, capsys):
    argv = ["train", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
            "--max-size", "10"]
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert "--pairs" in err and "usage" in err


def test_unknown_flag_exits_1(capsys):
    assert main(["synth", "--out-dir", "x", "--colour", "blue"]) == 1
    assert "usage" in capsys.readouterr().err


def test_io_error_exits_2(tmp_path):
    assert main(["apply", "--model", str(tmp_path / "none.json"), "--data", str(tmp_path / "none.jsonl")]) == 2


def test_validation_error_exits_1(data_dir, tmp_path):
    bad = tmp_path / "pairs.csv"
    bad.write_text("m000000,nobody\n")
    argv = ["train", "--data", str(data_dir / "data.jsonl"), "--schema", str(data_dir / "schema.json"),
            "--pairs", str(bad), "--max-size", "10", "--out", str(tmp_path / "m.json")]
    assert main(argv) == 1
