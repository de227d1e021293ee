import json
from pathlib import Path

import pytest

from reinhardt.cli import main

DOMAINS = Path(__file__).resolve().parent.parent / "domains"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_hartogs(capsys):
    code, out, _ = run(capsys, "classify", "--input", DOMAINS / "hartogs.json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["bergman_complete"] is False
    assert doc["result"]["witness"] == ["-1", "-1"]
    assert doc["config"]["seed"] == 42 and doc["config"]["height"] == 20


def test_classify_polydisc(capsys):
    code, out, _ = run(capsys, "classify", "--input", DOMAINS / "polydisc.json")
    r = json.loads(out)["result"]
    assert code == 0 and r["witness"] is None
    assert all(r[k] for k in ("kobayashi_complete", "caratheodory_complete", "hyperconvex", "bergman_complete"))


def test_validate_bad_axes(capsys):
    code, out, _ = run(capsys, "validate", "--input", DOMAINS / "hartogs_badaxes.json")
    assert code == 2
    failures = json.loads(out)["result"]["failures"]
    assert {"check": "downward_closed", "halfspace": 1, "coordinate": 2} in failures


def test_usage_and_parse_errors(capsys, tmp_path):
    code, _, err = run(capsys, "nonsense")
    assert code == 1 and json.loads(err)["error"]["exit_code"] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "classify", "--input", bad)
    assert code == 1 and "error" in json.loads(err)


def test_numeric_failure_exit(capsys):
    code, _, err = run(capsys, "length", "--input", DOMAINS / "irrational_ray.json", "--v=-sqrt(2),-1", "--base=0,0", "--ray", 2)
    assert code == 3 and json.loads(err)["error"]["type"] == "PathExitsDomain"


def test_monomials_csv(capsys):
    code, out, _ = run(capsys, "monomials", "--input", DOMAINS / "hartogs.json", "--height", 1)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# config: ")
    assert lines[1] == "alpha_1,alpha_2,norm_sq,method,error_estimate"
    assert lines[2].startswith("0,-1,9.8696044")
    assert len(lines) == 2 + 6


def test_kernel_length_kc_beta(capsys, tmp_path):
    out_file = tmp_path / "k.csv"
    code, _, _ = run(capsys, "kernel", "--input", DOMAINS / "polydisc.json", "--point", "0,0", "--output", out_file)
    assert code == 0 and out_file.read_text().splitlines()[-1].startswith("0.0,0.0,0.1013211")

    code, out, _ = run(capsys, "length", "--input", DOMAINS / "hartogs.json", "--v=-1,-1", "--base=-2,-1", "--eps", "1e-3,1e-4")
    lengths = json.loads(out.splitlines()[1].split(": ", 1)[1])
    assert code == 0 and abs(lengths["0.001"] - lengths["0.0001"]) < 0.05 * lengths["0.001"]

    code, out, _ = run(capsys, "kc", "--input", DOMAINS / "irrational_ray.json", "--alpha", "0,0",
                       "--v=-sqrt(2),-1", "--base=-2*sqrt(2),-2")
    ratios = [float(l.split(",")[1]) for l in out.splitlines()[2:]]
    assert code == 0 and len(ratios) == 10 and ratios[-1] < 0.2 * ratios[0]

    code, out, _ = run(capsys, "beta", "--input", DOMAINS / "irrational_ray.json", "--v=-sqrt(2),-1", "--delta", 0.1)
    res = json.loads(out)["result"]
    assert code == 0 and res["pairing"] > 0 and res["sup_estimate"] < 0.1 - 1e-6


def test_beta_precondition_is_usage_error(capsys):
    code, _, err = run(capsys, "beta", "--input", DOMAINS / "hartogs.json", "--v=-1,-1")
    assert code == 1 and json.loads(err)["error"]["type"] == "PreconditionError"


@pytest.mark.parametrize("cmd", [["classify"], ["monomials", "--height", "2", "--method", "montecarlo", "--samples", "20000"]])
def test_deterministic_output(capsys, tmp_path, cmd):
    outs = []
    path = tmp_path / "out"
    for _ in range(2):
        assert main(cmd + ["--input", str(DOMAINS / "hartogs.json"), "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
