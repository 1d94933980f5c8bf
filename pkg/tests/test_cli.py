import json
import subprocess
import sys

import pytest

from mpsvar.cli import run
from mpsvar.formats import dumps, read_json, state_from_json, state_to_json


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_necklaces_example(capsys):
    code, out, _ = call(capsys, "necklaces", "--d", 2, "--N", 12)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "352" and len(lines) == 353
    assert lines[1] == "0" * 12 and lines[-1] == "1" * 12


def test_member_corner_example(capsys, tmp_path):
    path = tmp_path / "corner.state"
    assert call(capsys, "state", "--corner", "--out", path)[0] == 0
    code, out, _ = call(capsys, "member", "--cert", "pb224", "--state", path)
    assert code == 1
    assert "value: 1/32" in out


def test_member_consistent_state(capsys, tmp_path):
    path = tmp_path / "s.json"
    call(capsys, "state", "--model", "pb", "--N", 4, "--seed", 5, "--out", path)
    code, out, _ = call(capsys, "member", "--cert", "pb224", "--state", path)
    assert code == 0 and "value: 0" in out


def test_invariants_example(capsys, tmp_path):
    report = tmp_path / "inv.json"
    code, out, _ = call(capsys, "invariants", "--model", "pb", "--D", 2, "--d", 2, "--N", 8,
                        "--degree", 1, "--seed", 7, "--out", report)
    assert code == 0
    assert "seed: 7" in out
    six = ("psi00010111 - psi00011011 - psi00100111 - psi00101011 + psi00101101"
           " + psi00110011")
    assert six in out
    assert "modulo reflection differences: 1" in out
    obj = read_json(str(report))
    assert obj["config"]["seed"] == 7 and obj["nontrivial"] == 1
    assert obj["summary"]["dimension"] == 7


@pytest.mark.parametrize("argv", [
    ["invariants", "--model", "ob", "--N", "3", "--degree", "4", "--seed", "3"],
    ["state", "--model", "rho", "--N", "6", "--seed", "9"],
    ["dim", "--model", "pb", "--N", "5", "--seed", "1"],
])
def test_outputs_are_byte_identical(capsys, tmp_path, argv):
    path = tmp_path / "out.json"
    runs = []
    for _ in range(2):
        code, out, _ = call(capsys, *argv, "--out", path)
        runs.append((code, out, path.read_bytes()))
    assert runs[0] == runs[1]


def test_state_file_round_trip(capsys, tmp_path):
    path = tmp_path / "s.json"
    call(capsys, "state", "--model", "ob", "--N", 4, "--seed", 1, "--out", path)
    text = path.read_text(encoding="utf-8")
    assert dumps(state_to_json(state_from_json(json.loads(text)))) == text
    call(capsys, "state", "--model", "pb", "--N", 3, "--field", "float", "--out", path)
    text = path.read_text(encoding="utf-8")
    assert dumps(state_to_json(state_from_json(json.loads(text)))) == text


def test_state_from_params_file(capsys, tmp_path):
    params, state = tmp_path / "p.json", tmp_path / "s.json"
    call(capsys, "state", "--model", "pb", "--N", 4, "--seed", 2, "--params-out", params,
         "--out", state)
    again = tmp_path / "s2.json"
    assert call(capsys, "state", "--model", "pb", "--N", 4, "--params", params, "--out", again)[0] == 0
    assert again.read_bytes() == state.read_bytes()
    phi = tmp_path / "phi.json"
    call(capsys, "state", "--model", "phi", "--N", 4, "--params", params, "--out", phi)
    assert read_json(str(phi)) == read_json(str(state))


def test_normal_form_exit_codes(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"kind": "pb_params", "matrices": [[["1", "0"], ["0", "1"]],
                                                                  [["2", "0"], ["0", "3"]]]}))
    code, out, _ = call(capsys, "normal-form", "--params", good)
    assert code == 0 and "u = 5/2" in out and "z = 1/2" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "pb_params", "matrices": [[["1", "0"], ["0", "1"]],
                                                                 [["2", "0"], ["0", "2"]]]}))
    code, _, err = call(capsys, "normal-form", "--params", bad)
    assert code == 3 and "non-generic" in err


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["dim", "--N", "4", "--field", "q:7"],
    ["member", "--cert", "pb224", "--state", "/nonexistent/file"],
    ["necklaces"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_malformed_state_exits_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert call(capsys, "member", "--cert", "ob223", "--state", path)[0] == 2
    path.write_text(json.dumps({"kind": "pure_state", "d": 2, "N": 4, "amplitudes": ["1"]}))
    assert call(capsys, "member", "--cert", "pb224", "--state", path)[0] == 2


def test_marginalize_and_density(capsys, tmp_path):
    s, m = tmp_path / "s.json", tmp_path / "m.json"
    call(capsys, "state", "--model", "ob", "--N", 6, "--seed", 4, "--out", s)
    assert call(capsys, "marginalize", "--state", s, "--start", 2, "--out", m)[0] == 0
    code, out, _ = call(capsys, "member", "--cert", "ob223", "--state", m)
    assert code == 0 and "value: 0" in out
    code, out, _ = call(capsys, "density", "--state", s, "--keep", "0,1")
    assert code == 0 and len(out.splitlines()) == 4


def test_trace_reduce(capsys):
    code, out, _ = call(capsys, "trace-reduce", "--word", "0101")
    assert code == 0
    # tr((XY)^2) = tr(XY)^2 - 2 det X det Y
    assert out.strip() == "-1/2*t0^2*t1^2 + 1/2*t0^2*t11 + 1/2*t1^2*t00 - 1/2*t00*t11 + t01^2"


def test_dim_and_generators(capsys):
    code, out, _ = call(capsys, "dim", "--model", "rho", "--N", 9, "--seed", 2)
    assert code == 0 and "jacobian_rank: 5" in out and "seed: 2" in out
    code, out, _ = call(capsys, "dim", "--model", "pb", "--N", 3, "--field", "rational")
    assert "jacobian_rank: 4" in out
    code, out, _ = call(capsys, "generators", "--model", "pb", "--N", 4, "--max-degree", 6)
    assert code == 0 and out.splitlines()[-1].split() == ["6", "1", "1"]


def test_reproduce_subset(capsys):
    code, out, _ = call(capsys, "reproduce-paper", "--only", "1,3")
    assert code == 0
    assert out.count("[PASS]") == 2 and "2/2 criteria passed" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mpsvar", "necklaces", "--N", "4"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.splitlines()[0] == "6"
