import csv
import io
import json

import pytest

from rhombusnet import cli, reference


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_slem_command(capsys):
    code, out, _ = run(capsys, "slem", "--orders", "2,2")
    assert code == 0
    body = json.loads(out)
    assert body["slem"] == pytest.approx(0.8047, abs=5e-5)
    assert body["weights"] == pytest.approx([1 / 3] * 4, abs=1e-9)


def test_slem_single_block_flag(capsys):
    code, out, _ = run(capsys, "slem", "--orders", "1")
    body = json.loads(out)
    assert code == 0
    assert body["slem"] == pytest.approx(0.5)
    assert body["stratified"] is False


def test_slem_metropolis_is_slower(capsys):
    _, out_opt, _ = run(capsys, "slem", "--orders", "2,2")
    _, out_met, _ = run(capsys, "slem", "--orders", "2,2", "--scheme", "metropolis")
    assert json.loads(out_met)["slem"] > json.loads(out_opt)["slem"]


def test_json_floats_round_to_ten_significant_digits(capsys):
    _, out, _ = run(capsys, "slem", "--orders", "2,2")
    assert json.loads(out)["slem"] == 0.8047378541


def test_charpoly_plain_output(capsys):
    code, out, _ = run(capsys, "charpoly", "--orders", "2,2")
    assert code == 0
    assert out.strip() == "81,-54,1"


def test_charpoly_json_output(capsys):
    _, out, _ = run(capsys, "charpoly", "--orders", "2,2", "--format", "json")
    body = json.loads(out)
    assert body["u_coefficients"] == [1, -54, 81]


def test_table1_csv_and_exit_code(capsys):
    code, out, err = run(capsys, "table1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["orders", "slem_charpoly", "slem_eig", "table_value", "abs_err"]
    assert len(rows) == 46
    by_orders = {row[0]: row for row in rows[1:]}
    assert float(by_orders["2,50,2"][3]) == pytest.approx(0.8829)
    assert abs(float(by_orders["2,50,2"][1]) - float(by_orders["2,50,2"][2])) <= 1e-8
    assert "45/45" in err


def test_table1_regression_exit_code(capsys, monkeypatch):
    rigged = tuple(
        (orders, value + (0.01 if orders == (2, 2) else 0.0))
        for orders, value in reference.REFERENCE_SLEM
    )
    monkeypatch.setattr(reference, "REFERENCE_SLEM", rigged)
    code, _, err = run(capsys, "table1")
    assert code == 2
    assert "44/45" in err


def test_optimize_command(capsys):
    code, out, _ = run(
        capsys, "optimize", "--orders", "2,2", "--budget", "5000", "--seed", "1"
    )
    assert code == 0
    body = json.loads(out)
    assert body["slem"] == pytest.approx(0.8047, abs=5e-5)
    assert set(body) == {"orders", "weights", "slem", "evaluations", "converged", "seed"}


def test_simulate_command(capsys):
    code, out, _ = run(
        capsys, "simulate", "--orders", "1,2,1", "--steps", "300", "--seed", "7"
    )
    assert code == 0
    body = json.loads(out)
    assert body["empirical_factor"] == pytest.approx(0.8857, abs=1e-3)
    assert body["analytic_slem"] == pytest.approx(0.8857, abs=5e-5)


def test_simulate_trace_csv(capsys):
    code, out, _ = run(
        capsys, "simulate", "--orders", "1", "--steps", "40", "--seed", "3",
        "--format", "csv",
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "deviation_norm", "ratio"]
    assert len(rows) == 42
    assert float(rows[2][2]) == pytest.approx(0.5, abs=1e-9)


def test_branch_command(capsys):
    code, out, _ = run(
        capsys, "branch", "--orders", "1", "--host", "node", "--budget", "20000"
    )
    assert code == 0
    body = json.loads(out)
    assert body["interior_match"] is True
    assert body["bridge_weight"] == pytest.approx(0.5, abs=1e-3)


def test_sweep_command_monotone(capsys):
    code, out, _ = run(capsys, "sweep", "--orders-range", "m=3;inner=1..6")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["orders", "slem"]
    values = [float(r[1]) for r in rows[1:]]
    assert values[0] == pytest.approx(0.9010, abs=5e-5)
    assert all(a > b for a, b in zip(values, values[1:]))


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "slem", "--orders", "2,2", "--out", str(target))
    assert code == 0
    assert out == ""
    body = json.loads(target.read_text())
    assert body["slem"] == pytest.approx(0.8047, abs=5e-5)


def test_commands_are_deterministic(capsys):
    first = run(capsys, "simulate", "--orders", "2,2", "--steps", "120", "--seed", "9")
    second = run(capsys, "simulate", "--orders", "2,2", "--steps", "120", "--seed", "9")
    assert first == second
    first = run(capsys, "optimize", "--orders", "2,2", "--budget", "3000", "--seed", "5")
    second = run(capsys, "optimize", "--orders", "2,2", "--budget", "3000", "--seed", "5")
    assert first == second


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "slem", "--orders", "abc")[0] == 1
    assert run(capsys, "sweep", "--orders-range", "nonsense")[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["unknown-command"])
    assert exc.value.code == 1
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        cli.main(["slem"])      # missing --orders
    assert exc.value.code == 1
    capsys.readouterr()


def test_charpoly_single_block_is_usage_error(capsys):
    code, _, err = run(capsys, "charpoly", "--orders", "3")
    assert code == 1
    assert "two or more blocks" in err
