import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from lpsharp.cli import demo_limit, main
from lpsharp.measure import MeasureSpace


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_exponents_table(capsys):
    code, out = run(["exponents", "--N", "3", "--p", "4"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert float(row["r_main"]) == 0.375
    assert float(row["r_tilde"]) == pytest.approx(0.428571428571, abs=1e-12)
    assert float(row["r_limit"]) == pytest.approx(1 / 3)
    assert float(row["nec_bound"]) == pytest.approx(0.386852807, abs=1e-9)


def test_exponents_blank_for_undefined(capsys):
    _, out = run(["exponents", "--N", "2", "--p", "4"], capsys)
    assert rows(out)[0]["nec_bound"] == ""


def test_scan(capsys):
    code, out = run(["scan", "--N", "3", "--p", "4", "--r", "0.375", "--steps", "1000"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) == 1000 and list(data[0]) == ["a", "K", "sum_fp", "gamma"]
    assert min(float(r["K"]) for r in data) >= 1 - 1e-12


def test_scan_fails_above_threshold(capsys):
    code, _ = run(["scan", "--N", "3", "--p", "4", "--r", "0.45"], capsys)
    assert code == 1


def test_verify_p2(capsys):
    code, out = run(["verify", "--ineq", "p2", "--iters", "1000", "--seed", "7"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) == 1000
    assert list(data[0]) == ["label", "N", "p", "r", "lhs", "rhs", "slack", "holds"]
    assert all(r["holds"] == "true" for r in data)


@pytest.mark.parametrize("ineq", ["main", "corollary", "clarkson", "tri5", "pair", "pre", "nf5", "nf5B", "final"])
def test_verify_all_checks_hold(ineq, capsys):
    code, out = run(["verify", "--ineq", ineq, "--iters", "50"], capsys)
    assert code == 0, out
    assert rows(out)


def test_verify_reports_violation(capsys):
    code, out = run(["verify", "--ineq", "nf5B", "--N", "3", "--p", "4", "--r", "0.5", "--iters", "200"], capsys)
    assert code == 1
    assert any(r["holds"] == "false" for r in rows(out))


def test_verify_reverse_regime(capsys):
    code, out = run(["verify", "--ineq", "main", "--p", "1.5", "--iters", "100"], capsys)
    assert code == 0


def test_pair_subcommand(capsys):
    code, out = run(["pair", "--iters", "20", "--seed", "3"], capsys)
    assert code == 0
    labels = {r["label"] for r in rows(out)}
    assert {"carb", "carb+", "carb++", "order:carb++<=carb+", "order:carb+<=carb"} <= labels


def test_scenario_input(tmp_path, capsys):
    path = tmp_path / "fam.txt"
    path.write_text("3 4 4\n0.25 0.25 0.25 0.25\n1 0 0 0.5\n0 1 0 0.5\n0 0 1 0.5\n")
    code, out = run(["verify", "--ineq", "main", "--p", "4", "--scenario", str(path)], capsys)
    assert code == 0
    (row,) = rows(out)
    assert row["N"] == "3" and float(row["r"]) == 0.375


def test_output_file_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["verify", "--ineq", "main", "--iters", "30", "--seed", "9", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_flags_write_nothing(tmp_path):
    out = tmp_path / "out.csv"
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--ineq", "bogus", "--output", str(out)])
    assert exc.value.code != 0
    assert not out.exists()


def test_domain_error_writes_nothing(tmp_path, capsys):
    out = tmp_path / "out.csv"
    code = main(["verify", "--ineq", "tri5", "--p", "1.5", "--output", str(out)])
    assert code == 2
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_tolerance_env(monkeypatch, capsys):
    # r slightly above r_main: the worst slack is about -6.5e-4
    argv = ["verify", "--ineq", "nf5B", "--N", "3", "--p", "4", "--r", "0.38", "--iters", "2000"]
    monkeypatch.setenv("LP_SHARP_TOL", "1e-3")
    assert run(argv, capsys)[0] == 0
    monkeypatch.setenv("LP_SHARP_TOL", "1e-5")
    assert run(argv, capsys)[0] == 1


@pytest.mark.parametrize("mode", ["scalar", "trial", "fuzz"])
def test_search_json(mode, capsys):
    code, out = run(["search-r", "--mode", mode, "--N", "3", "--p", "4", "--iters", "500", "--seed", "4"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert {"target", "r_star", "certificate", "slack", "iterations", "seed"} <= set(payload)
    assert payload["seed"] == 4
    if mode == "scalar":
        assert payload["r_star"] == pytest.approx(0.375, abs=1e-3)


def test_demo_limit_rows(capsys):
    code, out = run(["demo-limit", "--p", "4", "--N-max", "10000", "--seed", "2"], capsys)
    assert code == 0
    data = rows(out)
    assert int(data[-1]["N"]) == 10000
    assert float(data[-1]["rel_error"]) <= 10 / 10000


def test_demo_limit_equal_and_disjoint():
    space = MeasureSpace([0.5, 1.5, 1.0])
    g = np.array([0.2, 1.0, 0.0])
    for row in demo_limit(g, g, 4.0, space, 100):
        assert row[1] == pytest.approx(1.0) and row[2] == pytest.approx(1.0)
        assert row[3] == pytest.approx(row[4]) == pytest.approx((2 * np.sum(space.weights * g**4) ** 0.25) ** 4)
    h = np.array([0.0, 0.0, 2.0])
    rows_ = demo_limit(g, h, 4.0, space, 100)
    ng = np.sum(space.weights * g**4) ** 0.25
    nh = np.sum(space.weights * h**4) ** 0.25
    lam = ng / (ng + nh)
    assert rows_[0][2] == pytest.approx(1 - 2 * lam * (1 - lam))


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lpsharp", "exponents", "--N", "3", "--p", "4"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "0.375" in proc.stdout
