import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hypwave.cli import exit_code_for, main
from hypwave.errors import (
    BranchLost, DegenerateHopf, HypothesisViolation, NoOrbitFound, OracleDisagreement,
    TauOutOfRange,
)
from hypwave.io import (
    dumps, read_orbit_csv, read_orbit_json, read_spectrum_csv, write_orbit_csv, write_orbit_json,
)

from conftest import orbit_for


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_exit_code_table():
    assert exit_code_for(TauOutOfRange(1.5, 1.0)) == 2
    assert exit_code_for(HypothesisViolation("g'(0)>0")) == 2
    assert exit_code_for(DegenerateHopf("x")) == 3
    assert exit_code_for(NoOrbitFound("x")) == 4
    assert exit_code_for(BranchLost("x")) == 5
    assert exit_code_for(OracleDisagreement("x")) == 6


def test_orbit_files_round_trip(tmp_path):
    o = orbit_for(0.2, 0.01)
    write_orbit_json(o, tmp_path / "o.json")
    write_orbit_csv(o, tmp_path / "o.csv")
    back = read_orbit_json(tmp_path / "o.json")
    assert np.array_equal(back.samples, o.samples)
    assert back.period == o.period and back.model.spec.to_config() == o.model.spec.to_config()
    table = read_orbit_csv(tmp_path / "o.csv")
    assert np.array_equal(table[:, 1:], o.samples) and np.array_equal(table[:, 0], o.xi)


def test_dumps_is_plain_json():
    text = dumps({"a": np.float64(0.1), "z": 1 + 2j, "n": np.int64(3), "v": np.arange(2.0)})
    assert json.loads(text) == {"a": 0.1, "z": {"re": 1.0, "im": 2.0}, "n": 3, "v": [0.0, 1.0]}


def test_hopf_command(capsys):
    code, out, _ = run(["hopf", "--model", "burgers-fisher", "--tau", "0.2"], capsys)
    assert code == 0
    d = json.loads(out)["hopf"]
    assert d["c0"] == 0 and d["omega0"] == 1 and d["a0"] == 0.125


def test_hopf_rejects_large_tau(capsys):
    code, _, err = run(["hopf", "--tau", "1.5"], capsys)
    assert code == 2 and "tau_bar=1.0" in err


def test_hopf_degenerate(tmp_path, capsys):
    cfg = tmp_path / "m.json"
    cfg.write_text(json.dumps({"name": "cubic-free", "tau": 0.2, "f_poly": [0, 1], "g_poly": [0, 1, 0, 0, 0, -1]}))
    code, _, _ = run(["hopf", "--config", str(cfg)], capsys)
    assert code == 3


def test_usage_errors(capsys):
    assert run(["nonsense"], capsys)[0] == 1
    assert run([], capsys)[0] == 1
    assert run(["hopf"], capsys)[0] == 1
    assert run(["orbit", "--tau", "0.2", "--samples", "100"], capsys)[0] == 1


def test_orbit_command(tmp_path, capsys):
    code, out, err = run(["orbit", "--tau", "0.2", "--epsilon", "0.0025,0.01", "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = json.loads(out)["orbits"]
    assert 1.5 <= rows[1]["amplitude_u"] / rows[0]["amplitude_u"] <= 2.5
    table = read_orbit_csv(tmp_path / "orbit_eps0.01.csv")
    assert abs(table[-1, 0] + (table[1, 0] - table[0, 0]) - 2 * math.pi) < 0.1
    assert (tmp_path / "orbit_eps0.0025.json").exists()


def test_orbit_at_zero_epsilon(tmp_path, capsys):
    assert run(["orbit", "--tau", "0.2", "--epsilon", "0.0", "--out", str(tmp_path)], capsys)[0] == 4


def test_spectrum_from_orbit_file(tmp_path, capsys):
    write_orbit_json(orbit_for(0.2, 0.01), tmp_path / "orbit.json")
    code, out, _ = run(["spectrum", "--orbit", str(tmp_path / "orbit.json"), "--theta-grid", "33",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "unstable" and abs(rep["witness"]["re_lambda_hat"] - 2 * math.pi) < 1.0
    table = read_spectrum_csv(tmp_path / "spectrum_eps0.01.csv")
    assert table.shape == (33, 6)
    period = rep["evidence"]["period"]
    np.testing.assert_array_equal(table[:, 3], table[:, 1] / period)
    assert np.all(table[:, 5] <= 1e-8) and np.all(np.diff(table[:, 0]) > 0)
    saved = json.loads((tmp_path / "report_eps0.01.json").read_text())
    assert saved == rep and "tolerances" in saved and saved["version"]


def test_spectrum_window_far_right(tmp_path, capsys):
    write_orbit_json(orbit_for(0.2, 0.01), tmp_path / "orbit.json")
    code, out, _ = run(["spectrum", "--orbit", str(tmp_path / "orbit.json"), "--window", "100,101,0,1",
                        "--out", str(tmp_path)], capsys)
    rep = json.loads(out)
    assert rep["evidence"]["root_count"] == 0 and code == 5


def test_verify_tau_09(capsys):
    code, out, _ = run(["verify", "--tau", "0.9", "--epsilon", "0.01"], capsys)
    assert code == 0 and json.loads(out)["waves"][0]["report"]["certified"]


def test_verify_fails_fast_on_tau(capsys):
    code, out, _ = run(["verify", "--tau", "1.5", "--epsilon", "0.01"], capsys)
    assert code == 2 and out == ""


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hypwave", "hopf", "--tau", "0.9"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and json.loads(proc.stdout)["tau_bar"] == 1.0
