import json
from pathlib import Path

import numpy as np
import pytest

from ltonp.cli import main

SCALAR = {"Z": [[0.0]], "B": [[1.0]], "Btilde": [[0.5]]}
INDEFINITE = {"Z": [[0.0]], "B": [[0.5]], "Btilde": [[1.0]]}
LIFTING = {"Z": [[0.0, 0.0], [0.6, 0.0]], "B": [[1.0, 0.0], [0.0, 0.8]], "Btilde": [[0.3], [0.2]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return _write


def _read(path):
    with open(path) as handle:
        return json.load(handle)


def test_solve_central(write, tmp_path):
    out = tmp_path / "solution.json"
    assert main(["solve", write("p.json", SCALAR), "--grid", "16", "--out", str(out)]) == 0
    payload = _read(out)
    assert set(payload) == {"problem", "pick", "solution", "central", "diagnostics", "notes"}
    assert payload["central"] is True
    assert payload["pick"]["classification"] == "strictly positive"
    assert payload["solution"]["delta"][0][0][0] == pytest.approx(0.5)
    assert payload["diagnostics"]["interpolation_residual"] <= 1e-12


def test_solve_with_parameter(write, tmp_path):
    out = tmp_path / "solution.json"
    param = write("x.json", {"constant": [[0.3]]})
    assert main(["solve", write("p.json", SCALAR), "--param", param, "--out", str(out)]) == 0
    payload = _read(out)
    assert payload["central"] is False
    assert len(payload["solution"]["alpha"]) == 1


def test_solve_refuses_indefinite(write, capsys):
    assert main(["solve", write("p.json", INDEFINITE)]) == 2
    assert "LambdaNotStrictlyPositive" in capsys.readouterr().err


def test_verify_exit_codes(write, tmp_path):
    problem = write("p.json", SCALAR)
    out = tmp_path / "report.json"
    assert main(["verify", problem, "--grid", "32", "--out", str(out)]) == 0
    assert _read(out)["interpolation_residual"] <= 1e-12
    wrong = write("f.json", {"delta": [[0.0]]})
    assert main(["verify", problem, "--solution", wrong, "--out", str(out)]) == 1
    assert main(["verify", problem, "--solution", wrong, "--tol", "1.0", "--out", str(out)]) == 0


def test_verify_seed_is_reproducible(write, tmp_path):
    problem = write("p.json", SCALAR)
    gaps = []
    for seed in ("5", "5", "6"):
        out = tmp_path / f"report{len(gaps)}.json"
        assert main(["verify", problem, "--grid", "16", "--seed", seed, "--out", str(out)]) == 0
        gaps.append(_read(out)["entropy_gap"])
    assert gaps[0] == gaps[1]
    assert all(gap > 0.0 for gap in gaps)


def test_pair_command(write, tmp_path):
    out = tmp_path / "pair.json"
    assert main(["pair", write("p.json", SCALAR), "--out", str(out)]) == 0
    payload = _read(out)
    assert payload["e"] == 1
    assert max(payload["residuals"].values()) <= 1e-12


def test_entropy_command(write, tmp_path):
    out = tmp_path / "entropy.json"
    param = write("x.json", {"constant": [[0.3]]})
    assert main(["entropy", write("p.json", SCALAR), "--param", param, "--out", str(out)]) == 0
    payload = _read(out)
    assert payload["entropy_central"][0][0][0] == pytest.approx(0.75)
    assert payload["entropy_solution"][0][0][0] == pytest.approx(0.6825, abs=1e-7)
    assert payload["min_gap_eigenvalue"] == pytest.approx(0.0675, abs=1e-7)
    assert payload["szego"]["relative_gap"] <= 1e-10


def test_leech_command(write, tmp_path):
    out = tmp_path / "leech.json"
    singular = write("l.json", {"G": [[[1, 0]], [[0, 1]]], "K": [[[1]]], "N": 2})
    assert main(["leech", singular, "--out", str(out)]) == 0
    assert "solution" not in _read(out)
    corona = write("c.json", {"G": [[[2, 0]], [[0, 1]]], "K": [[[1]]], "N": 2})
    assert main(["leech", corona, "--out", str(out)]) == 0
    payload = _read(out)
    assert max(payload["residuals"]) <= 1e-10
    assert len(payload["residuals"]) == 2
    assert payload["pick"]["classification"] == "strictly positive"


def test_clift_command(write, tmp_path):
    out = tmp_path / "clift.json"
    assert main(["clift", write("cl.json", LIFTING), "--grid", "16", "--out", str(out)]) == 0
    lifting = _read(out)["lifting"]
    assert lifting["order"] == 2
    assert lifting["r0_residual"] <= 1e-10
    bad = dict(LIFTING, B=[[0.5, 0.0], [0.0, 0.5]])
    assert main(["clift", write("bad.json", bad)]) == 2


def test_sample_then_solve(tmp_path):
    problem = tmp_path / "sample.json"
    assert main(["sample", "--n", "3", "--p", "2", "--q", "1", "--seed", "5", "--out", str(problem)]) == 0
    data = _read(problem)
    assert np.array(data["Z"]).shape == (3, 3, 2)
    out = tmp_path / "solution.json"
    assert main(["solve", str(problem), "--grid", "32", "--out", str(out)]) == 0
    assert _read(out)["diagnostics"]["interpolation_residual"] <= 1e-8


def test_input_errors(write, tmp_path):
    assert main(["solve", str(tmp_path / "missing.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("[")
    assert main(["solve", str(broken)]) == 2
    config = write("settings.json", {"unknown_key": 1})
    assert main(["solve", write("p.json", SCALAR), "--config", config]) == 2


def test_config_file(write, tmp_path):
    config = write("settings.json", {"circle_points": 8, "disc_radii": [0.5]})
    out = tmp_path / "report.json"
    assert main(["verify", write("p.json", SCALAR), "--config", config, "--out", str(out)]) == 0


SETTINGS_DIR = Path(__file__).resolve().parents[2] / "settings"


@pytest.mark.parametrize("command, problem", [("solve", "scalar.json"), ("verify", "two_point.json"),
                                              ("leech", "leech.json"), ("clift", "clift.json")])
def test_bundled_problems(command, problem, tmp_path):
    argv = [command, str(SETTINGS_DIR / "problems" / problem), "--config", str(SETTINGS_DIR / "ltonp.json"),
            "--grid", "32", "--out", str(tmp_path / "out.json")]
    assert main(argv) == 0


def test_bundled_parameter(tmp_path):
    out = tmp_path / "entropy.json"
    argv = ["entropy", str(SETTINGS_DIR / "problems" / "scalar.json"),
            "--param", str(SETTINGS_DIR / "problems" / "param.json"), "--out", str(out)]
    assert main(argv) == 0
    assert _read(out)["entropy_solution"][0][0][0] == pytest.approx(0.6825, abs=1e-7)
