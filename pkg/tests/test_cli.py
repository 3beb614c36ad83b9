from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qclab.cli import ExperimentPlan, UsageError, main, run
from qclab.scene import load_scene


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _table(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return lines[0].split(","), np.array([[float(v) for v in l.split(",")] for l in lines[1:]])


def test_check_all_passes_on_great_circle(capsys):
    code, out, _ = _run(capsys, "check", "--scene", "sphere_greatcircle", "--criterion", "all",
                        "--budget", "2000", "--seed", "7")
    recs = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert [r["criterion"] for r in recs] == ["def01", "theoremA", "corollaryC", "prop21", "gradient"]
    assert all(r["verdict"] == "pass" for r in recs)


def test_check_two_lines_fails_with_witness(capsys):
    code, out, _ = _run(capsys, "check", "--scene", "plane_two_lines", "--criterion", "def01",
                        "--budget", "2000", "--seed", "7")
    rec = json.loads(out)
    assert code == 1
    assert rec["verdict"] == "fail" and rec["witness"]["angle"] > math.pi / 2


def test_trace_gradient_on_spindle_ends_at_far_pole(capsys):
    code, out, _ = _run(capsys, "trace-gradient", "--scene", "spindle_pi", "--from", "(s=1.0,phi=0)",
                        "--to-pole", "z1", "--step", "1e-3")
    assert code == 0
    assert out.startswith("# terminal_reason=stationary")
    head, rows = _table(out)
    assert head == ["t", "s", "phi"]
    np.testing.assert_allclose(rows[-1, 1:], [math.pi, 0.0], atol=1e-9)
    assert np.all(np.diff(rows[:, 0]) > 0)


def test_other_curve_commands(capsys):
    code, out, _ = _run(capsys, "trace-radial", "--scene", "cone_two_rays", "--from", "apex",
                        "--direction", "0.5", "--max-steps", "20")
    assert code == 0
    _, rows = _table(out)
    np.testing.assert_allclose(rows[1:, 2], 0.5, atol=1e-12)
    code, out, _ = _run(capsys, "join", "--scene", "sphere_greatcircle", "--from", "(1, 0, 0)",
                        "--to", f"({math.cos(0.1)}, 0, {math.sin(0.1)})", "--epsilon", "0.9")
    assert code == 0 and "terminal_reason=joined" in out
    code, out, _ = _run(capsys, "tangent", "--scene", "plane_line", "--from", "(0, 0)",
                        "--direction", "0", "--step", "1e-3", "--max-steps", "10")
    assert code == 0


def test_farthest(capsys):
    code, out, _ = _run(capsys, "farthest", "--scene", "cone_apex", "--from", "apex", "--directions", "0")
    rec = json.loads(out)
    assert code == 0
    assert rec["value"] == pytest.approx(rec["farthest"])


def test_scene_suite_on_corrupted_scene(capsys):
    code, out, _ = _run(capsys, "suite", "--scene", "corrupted_small_circle", "--budget", "600")
    rows = out.strip().splitlines()
    assert code == 1
    assert len(rows) == 5 and all(r.startswith("[FAIL]") for r in rows)


def test_suite_subset_of_criteria(capsys):
    code, out, _ = _run(capsys, "suite", "--only", "1,2", "--seed", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("[PASS]  1")


@pytest.mark.parametrize("argv", [
    ["check", "--scene", "no_such_scene"],
    ["check", "--scene", "sphere_greatcircle", "--subset", "nope"],
    ["check", "--scene", "sphere_greatcircle", "--budget", "0"],
    ["trace-gradient", "--scene", "spindle_pi", "--from", "z1", "--to-pole", "z1"],
    ["join", "--scene", "sphere_greatcircle", "--from", "(1,0,0)", "--to", "(0,1,0)", "--epsilon", "0.5"],
    ["suite", "--only", "13"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    assert "qclab" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["check", "--scene", "sphere_greatcircle", "--criterion", "bogus"])
    assert exc.value.code == 2


def test_plan_validation():
    sc = load_scene("sphere_greatcircle")
    with pytest.raises(UsageError):
        run(ExperimentPlan("trace-gradient", sc, {"from": "(1,0,0)"}))
    with pytest.raises(UsageError):
        run(ExperimentPlan("check", None, {"criterion": "all"}))
    with pytest.raises(UsageError):
        run(ExperimentPlan("paint", sc, {}))


def test_output_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QCLAB_OUT_DIR", str(tmp_path))
    code, out, _ = _run(capsys, "check", "--scene", "sphere_point", "--budget", "200")
    assert code == 0
    assert (tmp_path / "check-sphere_point.jsonl").read_text() == out
    target = tmp_path / "explicit.csv"
    _run(capsys, "trace-gradient", "--scene", "plane_line", "--from", "(1,0)", "--to", "(0,0)",
         "--max-steps", "5", "--out", str(target))
    assert target.read_text().startswith("# terminal_reason=budget")


def test_identical_inputs_give_identical_bytes(capsys):
    argv = ["check", "--scene", "plane_two_lines", "--budget", "500", "--seed", "3"]
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first == second


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qclab", "check", "--scene", "plane_two_lines",
                          "--criterion", "def01", "--budget", "300", "--seed", "7"],
                         capture_output=True, text=True)
    assert res.returncode == 1
    assert json.loads(res.stdout)["verdict"] == "fail"
