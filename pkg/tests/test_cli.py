import json
import os

import pytest

from conftest import FIXTURES
from quiverrep.cli import load_workspace, main

A2 = os.path.join(FIXTURES, "a2.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_workspace_loads_modules_and_morphisms():
    ws = load_workspace(A2)
    assert ws.p == 2
    assert set(ws.modules) == {"S1", "S2", "P1", "P1S2"}
    assert set(ws.morphisms) == {"pi", "piz", "idS1"}
    assert ws.morphisms["pi"].is_epi()


def test_hom_and_ext(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "hom", "--X", "P1", "--Y", "S1")
    assert code == 0 and out == "dim Hom(P1, S1) = 1\n"
    code, out, _ = run(capsys, "--workspace", A2, "ext", "--Y", "S1", "--Z", "S2")
    assert code == 0 and "= 1" in out


def test_tau_and_stablehom(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "tau", "--X", "S1")
    assert code == 0 and "1:0" in out and "2:1" in out
    code, out, _ = run(capsys, "--workspace", A2, "tau", "--X", "P1")
    assert code == 0 and "zero object" in out
    code, out, _ = run(capsys, "--workspace", A2, "stablehom", "--C", "S1", "--Y", "S1")
    assert code == 0 and "= 1" in out


def test_pairing_json_round_trips(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "pairing",
                       "--C", "S1", "--Y", "S1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["dim"] == 1 and doc["matrix"] == [[1]]


def test_flags_accepted_after_subcommand(capsys):
    code1, out1, _ = run(capsys, "--workspace", A2, "lattice", "--Y", "S1", "--K", "S2")
    code2, out2, _ = run(capsys, "lattice", "--Y", "S1", "--K", "S2",
                         "--workspace", A2)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "2 members" in out1


def test_universal_ext_and_triangle(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "universal-ext",
                       "--Y", "S1", "--K", "S2", "--L", "full", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["middle_dims"] == {"1": 1, "2": 1}
    assert doc["kernel_dims"] == {"1": 0, "2": 1}
    code, out, _ = run(capsys, "--workspace", A2, "triangle",
                       "--C", "S1", "--Y", "S1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["lattice_size"] == 2


def test_delta_gamma_eta_minimal(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "delta",
                       "--alpha", "pi", "--K", "S2", "--json")
    assert code == 0 and json.loads(out)["image"]["dim"] == 1
    code, out, _ = run(capsys, "--workspace", A2, "gamma",
                       "--C", "S1", "--Y", "S1", "--L", "full", "--json")
    assert code == 0 and json.loads(out)["perp"]["dim"] == 0
    code, out, _ = run(capsys, "--workspace", A2, "eta",
                       "--C", "S1", "--alpha", "idS1", "--json")
    assert code == 0 and json.loads(out)["image"]["dim"] == 1
    code, out, _ = run(capsys, "--workspace", A2, "minimal", "--alpha", "piz", "--json")
    assert code == 0
    doc = json.loads(out)
    assert not doc["right_minimal"]
    assert doc["minimal_version_source_dims"] == {"1": 1, "2": 1}


def test_determined_ringel_present_indecomposables(capsys):
    code, out, _ = run(capsys, "--workspace", A2, "determined",
                       "--alpha", "pi", "--C", "S1", "--json")
    assert code == 0 and json.loads(out)["determined"]
    code, out, _ = run(capsys, "--workspace", A2, "determined",
                       "--alpha", "pi", "--C", "S2", "--json")
    assert code == 0 and not json.loads(out)["determined"]
    code, out, _ = run(capsys, "--workspace", A2, "ringel",
                       "--Cprime", "S1", "--C", "S1", "--Y", "S1",
                       "--theta", "1", "--json")
    assert code == 0 and json.loads(out)["value"]["dim"] == 0
    code, out, _ = run(capsys, "--workspace", A2, "present",
                       "--C", "S1", "--Y", "S1", "--json")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "--workspace", A2, "indecomposables", "--json")
    assert code == 0 and json.loads(out)["count"] == 3


def test_deterministic_output(capsys):
    outs = set()
    for _ in range(3):
        code, out, _ = run(capsys, "--workspace", A2, "triangle",
                           "--C", "S1", "--Y", "S1", "--json")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1


def test_exit_code_2_on_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "--workspace", A2, "hom", "--X", "NOPE", "--Y", "S1")
    assert code == 2 and "unknown module" in err
    code, _, err = run(capsys, "--workspace", str(tmp_path / "missing.json"),
                       "hom", "--X", "S1", "--Y", "S1")
    assert code == 2 and "cannot read workspace" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "--workspace", str(bad), "hom", "--X", "S1", "--Y", "S1")
    assert code == 2
    noprime = tmp_path / "p7.json"
    noprime.write_text(json.dumps({"field": {"p": 7}, "quiver": {"vertices": ["1"]}}))
    code, _, err = run(capsys, "--workspace", str(noprime), "indecomposables")
    assert code == 2 and "not supported" in err
    code, _, err = run(capsys, "hom", "--X", "S1", "--Y", "S1")
    assert code == 2 and "--workspace is required" in err
    code, _, _ = run(capsys, "--workspace", A2, "nonsense")
    assert code == 2


def test_delta_rejects_non_epi(capsys, tmp_path):
    doc = json.load(open(A2))
    doc["morphisms"]["inc"] = {"from": "S2", "to": "P1",
                               "maps": {"1": [], "2": [[1]]}}
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "--workspace", str(path), "delta",
                       "--alpha", "inc", "--K", "S2")
    assert code == 2 and "epimorphism" in err
