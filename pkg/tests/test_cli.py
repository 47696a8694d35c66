import json
import subprocess
import sys

import pytest

from s1resolve.cli import load_config, main

FAST = ["--samples", "100", "--group-samples", "10"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--r", "7", "--a", "3")
    assert code == 0
    assert out == "[3,2,2] remainders 7,3,2,1,0\n"


def test_expand_canonicalizes_a(capsys):
    assert run(capsys, "expand", "--r", "7", "--a", "10")[1] == "[3,2,2] remainders 7,3,2,1,0\n"


def test_expand_regular(capsys):
    code, out, _ = run(capsys, "expand", "--r", "1", "--a", "1")
    assert code == 0 and "length 0" in out


@pytest.mark.parametrize("argv", [
    ["expand", "--r", "4", "--a", "2"],
    ["expand", "--r", "0", "--a", "1"],
    ["expand", "--r", "7"],
    ["expand", "--r", "seven", "--a", "3"],
    ["frobnicate"],
    ["atlas5", "--r", "1", "--a", "1"],
    ["verify", "--r", "7", "--a", "3", "--tol", "-1"],
])
def test_invalid_input_exits_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_atlas_json(capsys):
    code, out, _ = run(capsys, "atlas5", "--r", "7", "--a", "3")
    d = json.loads(out)
    assert code == 0
    assert [m["tag"] for m in d["transitions"]] == ["ChainG", "ChainG", "GlueF"]
    code, out, _ = run(capsys, "atlas4", "--r", "7", "--a", "3")
    d = json.loads(out)
    assert [m["params"]["b"] for m in d["transitions"]] == [3, 2, 2]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "a.json"
    code, out, _ = run(capsys, "atlas4", "--r", "5", "--a", "2", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["fiber"] == {"r": 5, "a": 2}


def test_verify_deterministic(capsys):
    args = ["verify", "--r", "7", "--a", "3", "--seed", "42", *FAST]
    code1, out1, err1 = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["verdict"] == "pass"
    assert "pass" in err1


def test_report_markdown(capsys):
    code, out, _ = run(capsys, "report", "--r", "5", "--a", "3", *FAST)
    assert code == 0 and out.startswith("# Verification report")
    code, out, _ = run(capsys, "report", "--r", "5", "--a", "3", "--format", "json", *FAST)
    assert json.loads(out)["verdict"] == "pass"


def test_config_toml(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[s1resolve]\nseed = 5\nsamples = 50\ngroup_samples = 5\nformat = 'json'\n")
    assert load_config(str(cfg)) == {"seed": 5, "samples": 50, "group_samples": 5, "format": "json"}
    code, out, _ = run(capsys, "report", "--r", "7", "--a", "3", "--config", str(cfg))
    d = json.loads(out)
    assert code == 0 and d["config"]["seed"] == 5 and d["config"]["samples_per_check"] == 50
    # flags override the file
    code, out, _ = run(capsys, "verify", "--r", "7", "--a", "3", "--config", str(cfg), "--seed", "6")
    assert json.loads(out)["config"]["seed"] == 6


def test_config_ini(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[s1resolve]\nseed = 3\ntol = 1e-8\ngroup-samples = 7\n")
    assert load_config(str(cfg)) == {"seed": 3, "tol": 1e-8, "group_samples": 7}


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("colour = 'blue'\n")
    assert run(capsys, "verify", "--r", "7", "--a", "3", "--config", str(cfg))[0] == 2


def test_verify_failure_exit_1(capsys):
    # a tolerance below the achievable floating point error cannot pass
    code, out, err = run(capsys, "verify", "--r", "7", "--a", "3", "--tol", "1e-300", *FAST)
    assert code == 1 and json.loads(out)["verdict"] == "fail" and "FAIL" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "s1resolve", "expand", "--r", "12", "--a", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "[3,2,3] remainders 12,5,3,1,0\n"
