"""CLI: subcommand dispatch, exit codes, persistence, config precedence."""

import csv
import json

from rieszmax.cli import (EXIT_BOUND_FAIL, EXIT_PASS, EXIT_RESOURCE,
                          EXIT_USAGE, main)


def test_ineq_passes(tmp_path, capsys):
    code = main(["ineq", "--output", str(tmp_path)])
    assert code == EXIT_PASS
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out


def test_factorization_writes_reports(tmp_path):
    code = main(["factorization", "--output", str(tmp_path),
                 "--trials", "1", "--dim", "4", "--grid-n", "8",
                 "--band", "2.0"])
    assert code == EXIT_PASS
    csv_path = tmp_path / "factorization.csv"
    json_path = tmp_path / "factorization.json"
    assert csv_path.exists() and json_path.exists()
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and set(rows[0]) == {"experiment_id", "seed", "d", "N",
                                     "trial", "quantity", "value"}
    doc = json.loads(json_path.read_text())
    assert doc["experiment_id"] == "factorization"


def test_csv_rows_reproducible(tmp_path):
    for sub in ("one", "two"):
        assert main(["factorization", "--output", str(tmp_path / sub),
                     "--trials", "1", "--dim", "4", "--grid-n", "8",
                     "--band", "2.0"]) == EXIT_PASS
    a = (tmp_path / "one" / "factorization.csv").read_bytes()
    b = (tmp_path / "two" / "factorization.csv").read_bytes()
    assert a == b


def test_empty_dims_is_usage_error(tmp_path):
    assert main(["norm-sweep", "--dims", "", "--output", str(tmp_path)]) \
        == EXIT_USAGE


def test_unknown_subcommand_is_usage_error():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_bad_x_grid_is_usage_error(tmp_path):
    assert main(["verify-multiplier", "--x-grid", "bogus",
                 "--output", str(tmp_path)]) == EXIT_USAGE


def test_norm_sweep_small(tmp_path, capsys):
    code = main(["norm-sweep", "--dims", "4", "--grid-n", "8",
                 "--trials", "1", "--t-grid=-4:2:1", "--band", "2.0",
                 "--output", str(tmp_path)])
    assert code == EXIT_PASS
    out = capsys.readouterr().out
    for name in ("r1", "r2", "r3", "r4"):
        assert name in out


def test_norm_sweep_tight_ceiling_fails(tmp_path, capsys):
    code = main(["norm-sweep", "--dims", "4", "--grid-n", "8",
                 "--trials", "1", "--t-grid=-4:2:1", "--band", "2.0",
                 "--tol", "0.01", "--output", str(tmp_path)])
    assert code == EXIT_BOUND_FAIL
    assert "FAIL" in capsys.readouterr().out


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 1, "band": 2.0, "grid_n": 8}))
    code = main(["factorization", "--config", str(cfg), "--dim", "4",
                 "--output", str(tmp_path / "out")])
    assert code == EXIT_PASS
    doc = json.loads((tmp_path / "out" / "factorization.json").read_text())
    assert doc["parameters"]["trials"] == 1
    assert doc["parameters"]["band"] == 2.0


def test_config_does_not_override_explicit_flag(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 3, "band": 2.0, "grid_n": 8}))
    code = main(["factorization", "--config", str(cfg), "--trials", "1",
                 "--dim", "4", "--output", str(tmp_path / "out")])
    assert code == EXIT_PASS
    doc = json.loads((tmp_path / "out" / "factorization.json").read_text())
    assert doc["parameters"]["trials"] == 1


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"no_such_flag": 1}))
    assert main(["factorization", "--config", str(cfg),
                 "--output", str(tmp_path)]) == EXIT_USAGE


def test_resource_error_exit_code(tmp_path):
    # 16^8 samples blows the grid budget
    assert main(["factorization", "--dim", "8", "--grid-n", "16",
                 "--output", str(tmp_path)]) == EXIT_RESOURCE


def test_report_identity_merge(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["factorization", "--output", str(out), "--trials", "1",
                 "--dim", "4", "--grid-n", "8", "--band", "2.0"]) == EXIT_PASS
    capsys.readouterr()
    code = main(["report", str(out / "factorization.csv"),
                 str(out / "factorization.csv")])
    assert code == EXIT_PASS
    assert "factorization" in capsys.readouterr().out


def test_report_conflict_is_integrity_failure(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out, band in ((out_a, "2.0"), (out_b, "1.5")):
        assert main(["factorization", "--output", str(out), "--trials", "1",
                     "--dim", "4", "--grid-n", "8", "--band", band]) \
            == EXIT_PASS
    code = main(["report", str(out_a / "factorization.csv"),
                 str(out_b / "factorization.csv")])
    assert code == EXIT_BOUND_FAIL
    assert "integrity" in capsys.readouterr().err


def test_rotation_small(tmp_path):
    assert main(["rotation", "--grid-n", "32", "--n-angles", "64",
                 "--band", "10.0", "--output", str(tmp_path)]) == EXIT_PASS
