import json
import subprocess
import sys

import numpy as np
import pytest

from zerodyn.cli import main, run_scenario, verify_scenario
from zerodyn.modes import CoeffParams
from zerodyn.output import trajectory_csv, trajectory_svg
from zerodyn.rootflow import Trajectory
from zerodyn.scenarios import get_builtin

TWO_PI = 2 * np.pi


def test_list(capsys):
    assert main(["list"]) == 0
    assert capsys.readouterr().out.split() == [
        "example1_n2", "example2_n2", "example3_n2", "example4_n2_scattering", "example1_n3"]


def test_run_example1_both(tmp_path):
    summary = run_scenario(get_builtin("example1_n2"), "both", out=tmp_path, svg=True)
    assert summary["kind"] == "isochronous"
    assert abs(summary["period"] - TWO_PI) <= 1e-12
    assert summary["route_gap"] <= 1e-6
    assert summary["periods"]["closed_form"]["z"] == [1, 1]
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["example1_n2_closed_form.csv", "example1_n2_closed_form_w.svg",
                     "example1_n2_closed_form_z.svg", "example1_n2_direct.csv",
                     "example1_n2_direct_w.svg", "example1_n2_direct_z.svg", "summary.json"]
    stored = json.loads((tmp_path / "summary.json").read_text())
    assert stored["class"] == summary["class"]


def test_run_scattering_closed_form():
    summary = run_scenario(get_builtin("example4_n2_scattering"), "closed_form")
    assert summary["kind"] == "scattering_capable"
    assert summary["growth"]["closed_form"][0] > 1e3
    assert "route_gap" not in summary


def test_csv_format_and_determinism(tmp_path):
    sc = get_builtin("example1_n2").with_horizon(t1=1.0, dt=0.25)
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_scenario(sc, "direct", out=a)
    run_scenario(sc, "direct", out=b)
    ta = (a / "example1_n2_direct.csv").read_text()
    assert ta == (b / "example1_n2_direct.csv").read_text()
    lines = ta.splitlines()
    assert lines[0] == "t,re_z1,im_z1,re_z2,im_z2,re_w1,im_w1,re_w2,im_w2"
    assert len(lines) == 6
    row = [float(x) for x in lines[1].split(",")]
    assert row == [0.0, 1, 1, 5, 1, 1, 0, 0, -1]


def test_csv_seventeen_digits():
    traj = Trajectory(times=np.array([0.1]), zeros=np.array([[1 / 3 + 2j / 3]]), w=np.array([[np.pi]]))
    line = trajectory_csv(traj).splitlines()[1]
    vals = line.split(",")
    assert float(vals[1]) == 1 / 3 and float(vals[3]) == np.pi
    assert vals[1] == "0.33333333333333331"


def test_svg_document():
    times = np.linspace(0, 1, 5)
    z = np.stack([times + 1j, -times], axis=1)
    doc = trajectory_svg(Trajectory(times=times, zeros=z), title="a < b")
    assert doc.startswith("<?xml") and 'version="1.1"' in doc
    assert doc.count("<polyline") == 2 and doc.count('width="8" height="8"') == 2
    assert "a &lt; b" in doc


def test_verify_passes():
    for name in ("example1_n2", "example1_n3"):
        report = verify_scenario(get_builtin(name))
        assert report["passed"], report["checks"]


def test_verify_n3_periods():
    report = verify_scenario(get_builtin("example1_n3"))
    assert report["periods"]["z"] == [1, 2, 2]


def test_verify_detects_corrupted_route(capsys):
    assert main(["verify", "example1_n2", "--perturb-direct-delta", "1:1"]) == 4
    assert "FAIL route_gap" in capsys.readouterr().out


def test_exit_codes(tmp_path, capsys):
    doc = get_builtin("example1_n2").to_dict()
    doc["initial"]["z"] = [[1, 1], [1, 1]]
    f = tmp_path / "same.json"
    f.write_text(json.dumps(doc))
    assert main(["run", str(f)]) == 2
    assert main(["run", "nonexistent"]) == 2
    assert main(["verify", "example1_n2", "--perturb-direct-delta", "5:1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["run", "example1_n2", "--route", "sideways"])
    assert info.value.code == 2

    # free motion into a head-on collision at t = 1
    doc = get_builtin("example1_n2").to_dict()
    doc["parameters"] = {"alpha_beta_gamma_delta": [[0, 0, 0, 0]] * 2}
    doc["initial"] = {"z": [-1, 1], "zdot": [1, -1], "w": [0, 0], "wdot": [0, 0]}
    doc["t1"], doc["dt"] = 2.0, 0.1
    f = tmp_path / "collide.json"
    f.write_text(json.dumps(doc))
    capsys.readouterr()
    assert main(["run", str(f), "--route", "direct"]) == 3
    assert "collision" in capsys.readouterr().err
    # no distinct modes, so the closed form is not available
    assert main(["run", str(f), "--route", "closed"]) == 2

    # z^2 = (e^t - e)^2 from modes {0, 1, 2, 3}: the zeros meet at t = 1
    e = np.e
    doc["parameters"] = {"lambda": [[0, 1, 2, 3]] * 2}
    doc["initial"] = {"z": [1 - e, e - 1], "zdot": [1, -1], "w": [1, -1], "wdot": [1, -1]}
    f.write_text(json.dumps(doc))
    assert main(["run", str(f), "--route", "closed"]) == 3
    assert main(["run", str(f), "--route", "direct"]) == 3


def test_degenerate_modes_are_invalid(tmp_path):
    doc = get_builtin("example1_n2").to_dict()
    # lambda^4 = 1 is fine, (lambda - 1)^2 (lambda + 1)^2 is not
    doc["parameters"] = {"alpha_beta_gamma_delta": [[0, 2, 0, -1]] * 2}
    f = tmp_path / "double.json"
    f.write_text(json.dumps(doc))
    assert main(["run", str(f), "--route", "closed"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "zerodyn", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "example1_n3" in out.stdout


def test_horizon_override(capsys):
    assert main(["run", "example2_n2", "--route", "closed", "--t1", "1", "--dt", "0.5"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["t1"] == 1.0 and summary["dt"] == 0.5


def test_perturbed_params():
    p = CoeffParams.uniform(2, 1, 2, 3, 4).perturbed(0, 1.0)
    assert p.delta.tolist() == [5, 4]
