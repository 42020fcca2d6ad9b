import json

import pytest

from teleboost.cli import main

from conftest import write_mini_csv


@pytest.fixture(scope="module")
def csv_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "mini.csv"
    write_mini_csv(path, n=160, seed=3)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "teleboost" in capsys.readouterr().out


def test_encode_command(capsys, csv_path, tmp_path):
    out = tmp_path / "encoded.tsv"
    code, stdout, _ = run_cli(capsys, "encode", "--csv", csv_path, "--out", str(out))
    assert code == 0
    assert "encoded 160 rows x 63 features" in stdout
    assert "negative/positive ratio" in stdout
    header = out.read_text().split("\n", 1)[0].split("\t")
    assert header[0] == "0:age" and header[-1] == "y"


def test_encode_missing_file_exits_2(capsys, tmp_path):
    code, _, stderr = run_cli(capsys, "encode", "--csv", str(tmp_path / "nope.csv"),
                              "--out", str(tmp_path / "x.tsv"))
    assert code == 2
    assert stderr.startswith("error:")


def test_tune_command_writes_manifest(capsys, csv_path, tmp_path):
    manifest = tmp_path / "run.json"
    code, stdout, _ = run_cli(capsys, "tune", "--csv", csv_path,
                              "--feature-fraction", "0.05", "--population", "3",
                              "--generations", "2", "--cost", "2", "--seed", "1",
                              "--out", str(manifest))
    assert code == 0
    assert "best fitness (gmean):" in stdout
    payload = json.loads(manifest.read_text())
    assert payload["config"]["population"] == 3
    assert payload["config"]["lambda_fn"] == 2.0
    assert len(payload["history"]) == 2
    assert payload["best"]["feature_names"]  # schema names travel with the manifest


def test_tune_rejects_unknown_config_key(capsys, csv_path, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"population": 3, "mystery": 1}))
    code, _, stderr = run_cli(capsys, "tune", "--csv", csv_path, "--config", str(cfg))
    assert code == 2
    assert "unknown config keys ['mystery']" in stderr


def test_validate_registered_experiment(capsys, csv_path, tmp_path):
    rows = tmp_path / "rows.tsv"
    summary = tmp_path / "summary.json"
    code, stdout, _ = run_cli(capsys, "validate", "--csv", csv_path,
                              "--experiment", "J", "--k", "2", "--repeats", "1",
                              "--rows-out", str(rows), "--summary-out", str(summary))
    assert code == 0
    assert "models: 2  (k=2 x repeats=1" in stdout
    assert "gmean" in stdout
    assert len(rows.read_text().strip().split("\n")) == 3  # header + 2 models
    payload = json.loads(summary.read_text())
    assert payload["model_count"] == 2
    assert payload["params"]["scale_pos_weight"] == 10.0


def test_validate_custom_config(capsys, csv_path, tmp_path):
    cfg = tmp_path / "model.json"
    cfg.write_text(json.dumps({
        "params": {"n_estimators": 10, "max_depth": 2, "scale_pos_weight": 6.0},
        "features": [0, 1, 8],
    }))
    code, stdout, _ = run_cli(capsys, "validate", "--csv", csv_path,
                              "--config", str(cfg), "--k", "2", "--repeats", "1")
    assert code == 0
    assert "models: 2" in stdout


def test_validate_config_requires_params_and_features(capsys, csv_path, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"params": {"n_estimators": 10}}))
    code, _, stderr = run_cli(capsys, "validate", "--csv", csv_path,
                              "--config", str(cfg), "--k", "2")
    assert code == 2
    assert '"params" and "features"' in stderr


def test_sweep_cost_with_manifest_dir(capsys, csv_path, tmp_path):
    out_dir = tmp_path / "sweep"
    code, stdout, _ = run_cli(capsys, "sweep", "cost", "--csv", csv_path,
                              "--values", "1,2", "--population", "3",
                              "--generations", "2", "--seed", "2",
                              "--out-dir", str(out_dir))
    assert code == 0
    assert "best gmean" in stdout
    assert (out_dir / "cost_1.json").exists()
    assert (out_dir / "cost_2.json").exists()


def test_sweep_rejects_bad_cost(capsys, csv_path):
    code, _, stderr = run_cli(capsys, "sweep", "cost", "--csv", csv_path,
                              "--values", "0.5", "--population", "3", "--generations", "2")
    assert code == 2
    assert ">= 1" in stderr


def test_ablate_command(capsys, csv_path, tmp_path):
    out = tmp_path / "ablation.json"
    code, stdout, _ = run_cli(capsys, "ablate", "--csv", csv_path,
                              "--population", "3", "--generations", "1",
                              "--fitness-rows", "100", "--seed", "4", "--out", str(out))
    assert code == 0
    for arm in ("FS-PO-C6", "PO-C6", "C6", "C1"):
        assert arm in stdout
    payload = json.loads(out.read_text())
    assert len(payload["arms"]) == 8
    assert payload["fitness_rows"] == 100
    assert payload["budget"]["population"] == 3


def test_analyze_registry(capsys, tmp_path):
    out = tmp_path / "features.json"
    code, stdout, _ = run_cli(capsys, "analyze", "--registry", "--out", str(out))
    assert code == 0
    assert "runs analyzed: 10" in stdout
    assert "selected in every run: [1, 8]" in stdout
    payload = json.loads(out.read_text())
    assert payload["frequencies"]["1:duration"] == 10
    assert payload["frequencies"]["8:euribor3m"] == 10


def test_analyze_manifests(capsys, csv_path, tmp_path):
    paths = []
    for seed in ("5", "6"):
        manifest = tmp_path / f"m{seed}.json"
        code, _, _ = run_cli(capsys, "tune", "--csv", csv_path,
                             "--feature-fraction", "0.05", "--population", "3",
                             "--generations", "1", "--seed", seed, "--out", str(manifest))
        assert code == 0
        paths.append(str(manifest))
    code, stdout, _ = run_cli(capsys, "analyze", "--manifests", *paths)
    assert code == 0
    assert "runs analyzed: 2" in stdout


def test_analyze_requires_a_source(capsys):
    code, _, stderr = run_cli(capsys, "analyze")
    assert code == 2
    assert "--registry or at least two --manifests" in stderr


def test_bench_command(capsys, csv_path):
    code, stdout, _ = run_cli(capsys, "bench", "--csv", csv_path,
                              "--experiment", "J", "--repetitions", "3")
    assert code == 0
    assert "experiment J:" in stdout
    assert "scored 160 rows x 3 repetitions" in stdout
    assert "us/row" in stdout


def test_bench_unknown_experiment(capsys, csv_path):
    code, _, stderr = run_cli(capsys, "bench", "--csv", csv_path, "--experiment", "Q")
    assert code == 2
    assert "unknown experiment id 'Q'" in stderr
