"""CLI tests: flags, output formats, exit codes, determinism."""

import csv
import io
import json

import pytest

from convertbw.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bound_case1_value(capsys):
    code, out, _ = run_cli(["bound", "--lf", "2", "--kf", "3", "--rf", "1",
                            "--ri", "2", "--alpha", "3"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == {"num": 10, "den": 1}
    assert doc["tight"] is True


def test_bound_trivial_regime(capsys):
    code, out, _ = run_cli(["bound", "--lf", "2", "--kf", "2", "--rf", "3",
                            "--ri", "1", "--alpha", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == {"num": 4, "den": 1}
    assert doc["regime"] == "rF>=kF"


def test_bound_usage_error_names_constraint(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--lf", "1", "--kf", "2", "--rf", "1", "--ri", "1"])
    assert exc.value.code == 2
    assert "lf >= 2" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_bound_writes_file(tmp_path, capsys):
    out_path = tmp_path / "bound.json"
    code, out, _ = run_cli(["bound", "--lf", "2", "--kf", "2", "--rf", "1",
                            "--ri", "5", "--alpha", "1",
                            "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["value"] == {"num": 2, "den": 1}
    assert doc["tight"] is False


def test_sweep_single_point_matches_bound(capsys):
    code, out, _ = run_cli(["sweep", "--lf", "2", "--kf", "3", "--rf", "1",
                            "--ri", "2", "--alpha", "3"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    row = rows[0]
    assert (row["value_num"], row["value_den"]) == ("10", "1")
    assert row["tight"] == "1"
    assert row["achievable"] == "10/1"


def test_sweep_row_count_and_monotonicity(capsys):
    code, out, _ = run_cli(["sweep", "--lf", "2", "--kf", "4", "--rf", "2",
                            "--ri", "1", "12", "--alpha", "1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 12
    values = [int(r["value_num"]) / int(r["value_den"]) for r in rows]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_sweep_tight_rows_have_achievable_equal_value(capsys):
    code, out, _ = run_cli(["sweep", "--lf", "2", "--kf", "4", "--rf", "1",
                            "--ri", "1", "4", "--alpha", "2"], capsys)
    assert code == 0
    for row in csv.DictReader(io.StringIO(out)):
        if row["tight"] == "1":
            num, den = row["achievable"].split("/")
            assert (num, den) == (row["value_num"], row["value_den"])


def test_sweep_row_cap_enforced(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--lf", "2", "5", "--kf", "1", "8", "--rf", "1", "8",
              "--alpha", "1", "4", "--max-rows", "100"])
    assert exc.value.code == 2


def test_verify_small_grid_passes(capsys):
    code, out, _ = run_cli(["verify", "--q", "5", "--lf", "2", "--kf", "1",
                            "--rf", "1", "--ri", "1", "2", "--alpha", "1",
                            "--trials", "12"], capsys)
    assert code == 0
    reports = json.loads(out)
    assert reports and all(r["status"] == "pass" for r in reports)


def test_verify_planted_corruption_fails_with_counterexample(capsys):
    code, out, _ = run_cli(["verify", "--q", "5", "--lf", "2", "--kf", "1",
                            "--rf", "1", "--ri", "2", "--alpha", "1",
                            "--trials", "0",
                            "--plant-corruption", "duplicate-parity"], capsys)
    assert code == 1
    reports = json.loads(out)
    bad = [r for r in reports if r["status"] == "fail"]
    assert any(r["check"] == "parity-iid" and r.get("counterexample")
               for r in bad)


def test_verify_empty_grid_warns_and_passes(capsys):
    code, out, err = run_cli(["verify", "--q", "5", "--lf", "5", "--kf", "8",
                              "--trials", "0"], capsys)
    assert code == 0
    assert json.loads(out) == []
    assert "empty" in err


def test_simulate_round_trip(capsys):
    code, out, _ = run_cli(["simulate", "--lf", "2", "--kf", "2", "--rf", "1",
                            "--ri", "1", "--alpha", "1", "--q", "7",
                            "--messages", "5", "--seed", "3"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["round_trip_failures"] == 0
    assert doc["info_nodes_unchanged"] is True
    assert doc["bandwidth"]["read_total"] == 4


def test_simulate_requires_q(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--lf", "2", "--kf", "2", "--rf", "1", "--ri", "1"])
    assert exc.value.code == 2


def test_search_reports_sound(capsys):
    code, out, _ = run_cli(["search", "--lf", "2", "--kf", "1", "--rf", "1",
                            "--ri", "1", "--alpha", "1", "--q", "5",
                            "--trials", "2"], capsys)
    assert code == 0
    reports = json.loads(out)
    assert [r["pair"] for r in reports] == ["canonical", "random-1"]
    assert all(r["verdict"] == "sound" for r in reports)
    assert all(r["inequality_audit"]["failures"] == [] for r in reports)


def test_identical_invocations_are_byte_identical(capsys):
    args = ["verify", "--q", "5", "--lf", "2", "--kf", "1", "--rf", "1",
            "--ri", "1", "--alpha", "1", "2", "--trials", "25", "--seed", "9"]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


def test_threads_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("CONVERT_BW_THREADS", "4")
    code, out, _ = run_cli(["bound", "--lf", "2", "--kf", "2", "--rf", "1",
                            "--ri", "1"], capsys)
    assert code == 0
    monkeypatch.setenv("CONVERT_BW_THREADS", "zero")
    with pytest.raises(SystemExit):
        main(["bound", "--lf", "2", "--kf", "2", "--rf", "1", "--ri", "1"])
