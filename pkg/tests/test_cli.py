from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ellfib.cli import main

KUMMER = json.dumps(
    {
        "model": {"quartic": "t*(x-1)*(x-t)*(x-a)*(a*x-t)", "point": ["1", "0"]},
        "parameter": "a",
        "ns_rank": 19,
    }
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_demo_json(capsys):
    code, d = run_json(capsys, "demo", "kummer")
    assert code == 0
    assert d["schema"] == "1"
    assert {f["place"]: f["type"] for f in d["generic"]["fibers"]} == {
        "t=0": "I2*",
        "t=1": "I2",
        "t=a": "I4",
        "t=a^2": "I2",
        "inf": "I2*",
    }
    assert d["generic"]["euler_number"] == 24 and d["generic"]["nf_rank"] == 19
    assert d["special"]["configuration"]["nf_rank"] == 20
    assert d["degenerations"]["strict_degenerations"] == ["t=1"]
    assert d["theorem"]["verdict"] == "IndecomposableCycleExists"
    assert d["theorem_control"]["verdict"] == "Fails"
    assert d["boundary_lattice"]["boundary"]["a"] == ["1", "0"]
    assert d["local_cycle"]["winding"] == 2


def test_demo_text(capsys):
    code, out = run(capsys, "demo", "kummer")
    assert code == 0
    assert "place | type | m_v | e_v | split" in out
    assert "IndecomposableCycleExists" in out


def test_lattice_type_solve(capsys):
    code, d = run_json(capsys, "lattice", "--type", "I2", "--solve")
    assert code == 0
    assert d["boundary"]["a"] == ["1/2", "0"]
    assert d["boundary"]["det_A"] == "-2"
    assert d["zariski"]["passed"]


def test_lattice_file_and_round_trip(capsys, tmp_path):
    code, d = run_json(capsys, "lattice", "--type", "III*")
    path = tmp_path / "l.json"
    path.write_text(json.dumps({k: d[k] for k in ("gram", "r", "labels")}))
    code2, d2 = run_json(capsys, "lattice", str(path))
    assert code == code2 == 0
    assert d2["gram"] == d["gram"] and d2["r"] == d["r"]


def test_lattice_errors(capsys, tmp_path):
    code, d = run_json(capsys, "lattice", "--type", "I5", "--demo")
    assert code == 2 and d["error"]["kind"] == "input"
    code, d = run_json(capsys, "lattice", '{"gram": [[1]], "r": [1]}', "--solve")
    assert code == 1
    code, d = run_json(capsys, "lattice", "--type", "II")
    assert code == 1
    code, d = run_json(capsys, "lattice", '{"gram": [[1]]}')
    assert code == 2


def test_analyze_and_model_document_round_trip(capsys):
    code, d = run_json(capsys, "analyze", '{"model": {"a2": "1", "a6": "t"}}')
    assert code == 0
    types = {f["place"]: f["type"] for f in d["configuration"]["fibers"]}
    assert types == {"t=0": "I1", "t=-4/27": "I1", "inf": "II*"}
    assert d["configuration"]["euler_number"] == 12
    code, d2 = run_json(capsys, "analyze", json.dumps(d["model_document"]))
    assert d2["configuration"] == d["configuration"]


def test_analyze_degenerate_exits_1(capsys):
    code, d = run_json(capsys, "analyze", '{"model": {"a2": "1"}}')
    assert code == 1
    assert "degenerate discriminant" in d["error"]["message"]


@pytest.mark.parametrize(
    "doc",
    [
        '{"model": {"a6": "t +"}}',
        '{"model": {"a6": "y"}}',
        '{"model": {"a7": "t"}}',
        '{"model": {"a6": "t"}, "schema": "9"}',
        "{not json",
    ],
)
def test_input_errors_exit_2(capsys, doc):
    code, d = run_json(capsys, "analyze", doc)
    assert code == 2
    assert d["error"]["exit_code"] == 2


def test_missing_file_exits_2(capsys, tmp_path):
    code, _ = run_json(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 2


def test_family_and_theorem(capsys):
    code, d = run_json(capsys, "family", KUMMER, "--specialize", "-1")
    assert code == 0
    assert d["excluded"] == ["0", "1"]
    assert d["specialization"]["degenerations"]["strict_degenerations"] == ["t=1"]
    code, d = run_json(capsys, "theorem", KUMMER, "--place", "t=a^2", "--at", "-1")
    assert code == 0 and d["verdict"] == "IndecomposableCycleExists"
    code, d = run_json(capsys, "theorem", KUMMER, "--place", "t-1", "--at", "-1", "--ns-rank", "20")
    assert d["verdict"] == "Fails"
    code, d = run_json(capsys, "family", KUMMER, "--specialize", "0")
    assert code == 1
    code, d = run_json(capsys, "family", KUMMER, "--specialize", "x")
    assert code == 2
    code, d = run_json(capsys, "theorem", KUMMER, "--place", "t=1", "--at", "-1", "--constants", "base field")
    assert d["verdict"] == "Fails"


def test_cycle(capsys):
    code, d = run_json(capsys, "cycle", "--c", "s^3 + s^4")
    assert code == 0 and d["winding"] == 3
    code, _ = run_json(capsys, "cycle", "--c", "1 + s")
    assert code == 1
    code, _ = run_json(capsys, "cycle", "--c", "s +")
    assert code == 2


def test_output_file_and_determinism(capsys, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["demo", "kummer", "--format", "json", "--output", str(p1)]) == 0
    assert main(["demo", "kummer", "--format", "json", "--output", str(p2)]) == 0
    assert capsys.readouterr().out == ""
    assert p1.read_bytes() == p2.read_bytes()


def test_subprocess_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "ellfib.cli", "cycle", "--c", "s"], capture_output=True, text=True)
    assert ok.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "ellfib.cli", "analyze", "{bad"], capture_output=True, text=True)
    assert bad.returncode == 2 and "error" in bad.stderr
    usage = subprocess.run([sys.executable, "-m", "ellfib.cli", "frobnicate"], capture_output=True, text=True)
    assert usage.returncode == 2
