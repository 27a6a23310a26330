import io
import json
import os
import subprocess
import sys

import pytest

from tropcrit.cli import run
from tropcrit.instances import dumps, loads, parse_instance

HERE = os.path.dirname(__file__)
INST = os.path.join(HERE, os.pardir, "instances")


def path(name):
    return os.path.join(INST, name)


def run_json(*argv):
    buf = io.StringIO()
    code = run(list(argv) + ["--format", "json"], out=buf)
    return code, json.loads(buf.getvalue())


def test_crit_series_example():
    code, rep = run_json("crit", path("series_example.json"))
    assert code == 0
    terms = rep["series"]["coordinates"][0]["terms"]
    got = {e: c for e, c in terms}
    assert set(got) == {"0", "1", "2"}
    assert abs(got["0"] - 1) < 1e-10 and abs(got["1"] + 1) < 1e-10 and abs(got["2"] - 2.5) < 1e-10
    assert rep["series"]["order"] == "3"


def test_crit_exact_point():
    code, rep = run_json("crit", "--certify", path("half_point.json"))
    assert code == 0
    assert rep["tropical"]["d_crit"] == ["1/2"]
    assert rep["series"]["exact"] is True
    assert rep["certificates"]["residual_ok"] is True


def test_delzant_simplex():
    code, rep = run_json("delzant", path("simplex3.json"))
    assert code == 0
    assert rep["tropical"]["d_crit"] == ["1/4"] * 3
    assert rep["tropical"]["interior"] is True


def test_toric_and_trop():
    code, rep = run_json("toric", path("p2_anticanonical.json"))
    assert code == 0 and rep["tropical"]["integrally_balanced"] is True
    code, rep = run_json("trop", "--point", "0,0", "--point", "5,5", path("two_stage.json"))
    assert code == 0
    members = [m["member"] for m in rep["membership"]]
    assert members[-2:] == [True, False]


def test_mutate():
    code, rep = run_json("mutate", "--certify", path("cluster_exchange.json"))
    assert code == 0
    assert rep["certificates"]["trop_ok"] and rep["certificates"]["series_ok"]


def test_exit_codes(tmp_path):
    assert run(["crit", path("not_complete.json")], out=io.StringIO()) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["crit", str(bad)], out=io.StringIO()) == 1
    assert run(["crit", str(tmp_path / "missing.json")], out=io.StringIO()) == 1
    # wrong kind for the subcommand
    assert run(["delzant", path("half_point.json")], out=io.StringIO()) == 1
    # unknown option
    assert run(["crit", "--bogus", path("half_point.json")], out=io.StringIO()) == 1
    nonprim = tmp_path / "np.json"
    nonprim.write_text(json.dumps({"kind": "toric", "rays": [[2], [-1]], "coeffs": [1, 1]}))
    assert run(["toric", str(nonprim)], out=io.StringIO()) == 1


def test_multiple_files_take_worst_code():
    buf = io.StringIO()
    code = run(["crit", "--format", "json", path("half_point.json"), path("not_complete.json")], out=buf)
    assert code == 2
    reps = json.loads(buf.getvalue())
    assert len(reps) == 2 and "error" in reps[1]


def test_json_is_deterministic():
    a = subprocess.run([sys.executable, "-m", "tropcrit", "crit", "--format", "json", "--seed", "3",
                        path("two_stage.json")], capture_output=True, check=True).stdout
    b = subprocess.run([sys.executable, "-m", "tropcrit", "crit", "--format", "json", "--seed", "3",
                        path("two_stage.json")], capture_output=True, check=True).stdout
    assert a == b


@pytest.mark.parametrize("name", sorted(os.listdir(INST)))
def test_report_instance_round_trips(name):
    with open(path(name)) as fh:
        inst = loads(fh.read())
    again = loads(dumps(inst))
    assert again == inst
    if name == "not_complete.json":
        return
    code, rep = run_json("trop", path(name))
    assert code == 0
    assert parse_instance(rep["instance"]) == inst


def test_selfcheck():
    buf = io.StringIO()
    assert run(["selfcheck"], out=buf) == 0
    assert "FAIL" not in buf.getvalue()


def test_text_output():
    buf = io.StringIO()
    assert run(["crit", path("series_example.json")], out=buf) == 0
    text = buf.getvalue()
    assert "x_1 = 1 - 1*t^1 + 2.5*t^2" in text
