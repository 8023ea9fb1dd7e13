import json
import subprocess
import sys

import pytest

from semicong.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def strip_timing(report):
    report = dict(report)
    report.pop("timing", None)
    return report


def test_c_principal_reports_witness(capsys):
    code, rep = run_json(capsys, "semiring", "c-principal", "minmax:4")
    assert code == 0 and rep["status"] == "ok"
    text = json.dumps(rep["result"])
    assert "false" in text.lower()
    code, out, _ = run(capsys, "semiring", "c-principal", "minmax:4")
    assert code == 0 and "0,1 | 2,3" in out


def test_semiring_validate_and_enumerate(capsys):
    assert run(capsys, "semiring", "validate", "star:boolean")[0] == 0
    code, rep = run_json(capsys, "semiring", "enumerate", "minmax:4")
    assert code == 0 and rep["result"]["count"] == 8


def test_flat_cover_example(capsys):
    code, rep = run_json(capsys, "flat", "cover", "--field", "x^2-2@1", "--gamma", "1;w", "--target", "-1,1")
    assert code == 0
    res = rep["result"]
    assert res["chain"]["length"] == 1
    assert res["certificates"][0]["coefficients"] == [0, 1]
    assert res["verification"]["verified"] is True


def test_order_quotient_example(capsys):
    code, rep = run_json(capsys, "order", "quotient", "--field", "x^2-2@1", "--ideal", "w", "--j", "1")
    assert code == 0
    assert rep["result"]["size"] == 3 and len(rep["result"]["table"]["add"]) == 3


def test_other_groups(capsys):
    code, rep = run_json(capsys, "nat", "classify", "--pair", "2", "5")
    assert code == 0 and (rep["result"]["n"], rep["result"]["k"]) == (2, 3)
    code, rep = run_json(capsys, "bx", "check", "--n", "3", "--degree-bound", "10")
    assert code == 0 and rep["result"]["related"] is False
    code, rep = run_json(capsys, "order", "integer-relation", "--field", "x^2-2@1", "--a", "w", "--u", "w")
    assert code == 0 and (rep["result"]["m"], rep["result"]["n"]) == (3, 5)
    code, rep = run_json(capsys, "order", "related", "--field", "x^2-2@1", "--pair", "1", "1+w",
                         "--query", "1", "1+2*w")
    assert code == 0 and rep["result"]["related"] is True
    code, rep = run_json(capsys, "order", "related", "--field", "x^2-2@1", "--pair", "1", "1+w",
                         "--query", "0", "w")
    assert code == 0 and rep["result"]["related"] is False


def test_exit_codes(capsys):
    # outside the cone
    assert run(capsys, "flat", "cover", "--field", "x^2-2@1", "--gamma", "1;w", "--target", "1,-1")[0] == 2
    # dependent gamma
    code, _, err = run(capsys, "flat", "cover", "--field", "x^2-2@1", "--gamma", "1;2", "--target", "1,1")
    assert code == 2 and "dependent" in err
    # unknown semiring
    assert run(capsys, "semiring", "validate", "nosuch")[0] == 2
    # budget
    assert run(capsys, "bx", "check", "--n", "3", "--degree-bound", "20", "--budget", "10")[0] == 3


def test_reports_are_deterministic(capsys):
    argv = ("flat", "cover", "--field", "x^3-2@0", "--gamma", "1;w;w^2", "--target", "-1,-1,2")
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    _, c = run_json(capsys, *argv[:-1], "2,-1,0")
    assert c["inputs_digest"] != a["inputs_digest"]


def test_problem_files_and_schema_errors(capsys, tmp_path):
    good = tmp_path / "flat.json"
    good.write_text(json.dumps({"field": "x^2-2@1", "gamma": "1;w", "target": ["-1,1", "3,1"]}))
    code, rep = run_json(capsys, "flat", "cover", "--problem", str(good))
    assert code == 0 and len(rep["result"]["certificates"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": 7}))
    code, _, err = run(capsys, "flat", "cover", "--problem", str(bad))
    assert code == 2 and "schema" in err
    table = tmp_path / "table.json"
    table.write_text(json.dumps({"size": 2, "zero": 0, "one": 1, "add": [[0, 1], [1, 1]], "mul": [[0, 0], [0, 1]]}))
    assert run(capsys, "semiring", "validate", str(table))[0] == 0
    table.write_text(json.dumps({"size": 2, "zero": 0, "one": 1, "add": [[0, 1]], "mul": "x"}))
    assert run(capsys, "semiring", "validate", str(table))[0] == 2


def test_verify_round_trip_and_tampering(capsys, tmp_path):
    code, out, _ = run(capsys, "flat", "cover", "--field", "x^2-2@1", "--gamma", "1;w",
                       "--target", "-1,1", "--target", "3,1", "--json")
    report = tmp_path / "report.json"
    report.write_text(out)
    assert run(capsys, "flat", "verify", "--problem", str(report))[0] == 0
    doc = json.loads(out)
    doc["result"]["certificates"][1]["coefficients"][0] = -1
    report.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "flat", "verify", "--problem", str(report))
    assert code == 1 and "coefficient 0" in out


def test_plots_are_written(capsys, tmp_path):
    assert run(capsys, "semiring", "enumerate", "minmax:4", "--plot-dir", str(tmp_path))[0] == 0
    assert run(capsys, "flat", "cover", "--field", "x^3-2@0", "--gamma", "1;w;w^2", "--target", "2,-1,0",
               "--plot-dir", str(tmp_path))[0] == 0
    assert run(capsys, "flat", "cover", "--field", "x^2-2@1", "--gamma", "1;w", "--target", "-1,1",
               "--plot-dir", str(tmp_path / "n2"))[0] == 0
    pngs = sorted(p.name for p in tmp_path.rglob("*.png"))
    assert len(pngs) >= 4
    for p in tmp_path.rglob("*.png"):
        assert p.read_bytes()[:4] == b"\x89PNG"


def test_search_command(capsys):
    code, rep = run_json(capsys, "flat", "search-n3", "--field", "x^3-2@0", "--gamma", "1;w;w^2", "--samples", "3")
    assert code == 0 and rep["result"]["samples"] <= 3


def test_acceptance_suite_from_cli(capsys):
    code, out, _ = run(capsys, "acceptance", "bg", "42")
    assert code == 0 and "[PASS]" in out


@pytest.mark.parametrize("args", [["--help"], ["flat", "--help"]])
def test_entry_point_help(args):
    r = subprocess.run([sys.executable, "-m", "semicong", *args], capture_output=True, text=True)
    assert r.returncode == 0 and "usage" in r.stdout
