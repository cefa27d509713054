import json
import math
import subprocess
import sys

import numpy as np
import pytest

from chanuncert.channels import channel_to_dict, identity_channel, standard_channel
from chanuncert.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "identity": write_json(tmp_path / "id.json", channel_to_dict(identity_channel())),
        "scaled": write_json(tmp_path / "scaled.json", {"dim": 2, "kraus": [[[[0.9, 0], [0, 0]], [[0, 0], [0.9, 0]]]]}),
        "bf": write_json(tmp_path / "bf.json", channel_to_dict(standard_channel("BF", 0.5))),
        "ad1": write_json(tmp_path / "ad1.json", channel_to_dict(standard_channel("AD", 1.0))),
        "mixed": write_json(tmp_path / "mixed.json", {"bloch": [0, 0, 0]}),
        "qutrit": write_json(tmp_path / "qutrit.json", {"matrix": np.stack([np.eye(3) / 3, np.zeros((3, 3))], -1).tolist()}),
        "broken": str(tmp_path / "broken.json"),
        "tmp": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_validate(files, capsys):
    code, out = run(capsys, "validate", "--channel", files["identity"])
    assert code == 0 and out.out.strip() == "residual 0.0e+00 PASS"
    code, out = run(capsys, "validate", "--channel", files["scaled"])
    assert code == 1 and "FAIL" in out.out
    with open(files["broken"], "w") as fh:
        fh.write("{not json")
    code, _ = run(capsys, "validate", "--channel", files["broken"])
    assert code == 2
    code, _ = run(capsys, "validate", "--channel", str(files["tmp"] / "missing.json"))
    assert code == 2


def test_uncertainty(files, capsys):
    code, out = run(capsys, "uncertainty", "--channel", files["identity"], "--state", files["mixed"])
    assert code == 0 and json.loads(out.out)["value"] == pytest.approx(0, abs=1e-15)
    code, out = run(capsys, "uncertainty", "--channel", files["bf"], "--state", files["mixed"])
    assert json.loads(out.out)["value"] == pytest.approx(0.5)
    code, out = run(capsys, "uncertainty", "--channel", files["ad1"], "--state", files["mixed"])
    d = json.loads(out.out)
    assert d["value"] == pytest.approx(0.75) and len(d["per_kraus"]) == 2
    assert "\n" not in out.out.strip()
    code, _ = run(capsys, "uncertainty", "--channel", files["bf"], "--state", files["qutrit"])
    assert code == 1


def test_bound_thm2_equality(files, capsys):
    code, out = run(capsys, "bound", "--theorem", "2", "--channel", files["bf"], "--channel", files["bf"],
                    "--state", files["mixed"])
    d = json.loads(out.out)
    assert code == 0
    assert d["lhs"] == pytest.approx(1.0) and d["bound"] == pytest.approx(1.0)
    assert d["maximizer"]["signs"] == [1, 1]


def test_bound_thm1_identity(files, capsys):
    code, out = run(capsys, "bound", "--theorem", "1", "--channel", files["identity"], "--channel",
                    files["identity"], "--state", files["mixed"])
    d = json.loads(out.out)
    assert code == 0 and d["lhs"] == pytest.approx(0, abs=1e-15) and d["bound"] == pytest.approx(0, abs=1e-15)


def test_bound_combined_shorthand(capsys):
    code, out = run(capsys, "bound", "--theorem", "combined", "--channel", "AD:0.1", "--channel", "BF:0.1",
                    "--channel", "PD:0.1", "--state", "bloch:0,0,0")
    d = json.loads(out.out)
    assert code == 0 and d["gap"] >= 0
    assert set(d["constituents"]) == {"thm4_LB1", "thm4_LB2", "thm3_LB3"}


def test_bound_thm3_params(capsys):
    args = ["bound", "--theorem", "3", "--channel", "AD:0.1", "--channel", "BF:0.1", "--channel", "PD:0.1",
            "--state", "bloch:0,0,0"]
    code, out = run(capsys, *args, "--variant", "LB2")
    assert code == 0 and json.loads(out.out)["params"] == {"M": 1.0, "L": 2.0, "variant": "LB2"}
    code, out = run(capsys, *args, "--variant", "LB1", "--M", "3", "--L", "0.5")
    assert code == 0 and json.loads(out.out)["params"]["M"] == 3.0
    code, _ = run(capsys, *args, "--variant", "LB1", "--M", "1", "--L", "2")
    assert code == 2
    code, _ = run(capsys, *args)
    assert code == 2


def test_bound_arity(capsys):
    code, _ = run(capsys, "bound", "--theorem", "1", "--channel", "AD:0.1", "--state", "bloch:0,0,0")
    assert code == 2
    code, _ = run(capsys, "bound", "--theorem", "4", "--channel", "AD:0.1", "--channel", "BF:0.1",
                  "--state", "bloch:0,0,0", "--variant", "LB1")
    assert code == 2


def test_bound_search_overflow(tmp_path, capsys):
    big = write_json(tmp_path / "big.json", {"dim": 2, "kraus": [[[[1 / math.sqrt(10), 0], [0, 0]], [[0, 0], [1 / math.sqrt(10), 0]]]] * 10})
    code, _ = run(capsys, "bound", "--theorem", "2", "--channel", big, "--channel", big, "--state", "bloch:0,0,0")
    assert code == 1


def test_sweep_preset(tmp_path, capsys):
    out = tmp_path / "fig1a.csv"
    code, _ = run(capsys, "sweep", "--preset", "fig1a", "--grid", "11", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,product,thm1_bound" and len(lines) == 12


def test_sweep_custom(tmp_path, capsys):
    out = tmp_path / "custom.csv"
    code, _ = run(capsys, "sweep", "--theorem", "4", "--sweep-var", "q", "--fixed", "1.0", "--channels",
                  "AD,BF,PD", "--variant", "LB3", "--grid", "5", "--out", str(out))
    assert code == 0 and out.read_text().splitlines()[0] == "q,sum,thm4_bound"
    code, _ = run(capsys, "sweep", "--preset", "fig1a", "--theorem", "2", "--out", str(out))
    assert code == 2
    code, _ = run(capsys, "sweep", "--out", str(out))
    assert code == 2


def test_sweep_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", "--preset", "fig2b", "--grid", "9", "--out", str(a))
    run(capsys, "sweep", "--preset", "fig2b", "--grid", "9", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_properties_and_replay(tmp_path, capsys):
    code, out = run(capsys, "properties", "--seed", "5", "--trials", "3")
    d = json.loads(out.out)
    assert code == 0 and d["passed"] and d["properties"]["concavity"]["trials"] == 3
    failure = write_json(tmp_path / "f.json", {"property": "additivity", "seed": 5, "trial": 2})
    code1, out1 = run(capsys, "properties", "--replay", failure)
    code2, out2 = run(capsys, "properties", "--replay", failure)
    assert code1 == code2 == 0 and out1.out == out2.out


def test_properties_zero_trials(capsys, caplog):
    code, _ = run(capsys, "properties", "--trials", "0")
    assert code == 0 and "vacuous" in caplog.text


def test_properties_failure_is_serialized(tmp_path, capsys, monkeypatch):
    from chanuncert import properties as props

    def broken(rng, tol):
        return props.PropertyResult("linearity", False, 1.0, 0.0)

    monkeypatch.setitem(props.ALL_CHECKS, "linearity", broken)
    failure = tmp_path / "fail.json"
    code, _ = run(capsys, "properties", "--trials", "2", "--failure-out", str(failure))
    assert code == 1
    rec = json.loads(failure.read_text())
    assert rec["property"] == "linearity" and rec["seed"] == 0 and rec["trial"] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chanuncert", "uncertainty", "--channel", "BF:0.5",
                           "--state", "bloch:0,0,0"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(0.5)
