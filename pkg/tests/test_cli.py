import io
import json
import subprocess
import sys

import pytest

from ibmtest.cli import main, oracle_check
from ibmtest.graph import dump_edge_list

from conftest import complete, cycle


def run(argv):
    out, err = io.BytesIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "c4": dump_edge_list(cycle(4)),
        "k4": dump_edge_list(complete(4)),
        "path": "0 1\n1 2\n2 3\n",
        "dir": "0 2\n0 3\n1 2\n1 3\n",
        "bad": "0 1\n1 x\n",
        "loop": "2 2\n",
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        paths[name] = str(p)
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("c4.txt\nk4.txt\nc4.txt\n")
    paths["manifest"] = str(manifest)
    return paths


def test_compare_self(files):
    code, out, _ = run(["compare", "--a", files["c4"], "--b", files["c4"]])
    rep = json.loads(out)
    assert code == 0 and rep["statistic"] == 0.0 and rep["p_value"] == 0.5


def test_compare_degenerate(files):
    code, out, err = run(["compare", "--a", files["path"], "--b", files["path"]])
    assert code == 3 and out == b"" and err.startswith("ERROR 3: ")
    assert err.count("\n") == 1


def test_compare_swap_symmetric(files):
    _, ab, _ = run(["compare", "--a", files["c4"], "--b", files["k4"]])
    _, ba, _ = run(["compare", "--a", files["k4"], "--b", files["c4"]])
    assert json.loads(ab)["statistic"] == json.loads(ba)["statistic"]


def test_compare_text_and_directed(files):
    code, out, _ = run(["compare", "--a", files["dir"], "--b", files["dir"], "--directed", "--format", "text"])
    assert code == 0 and b"directed=True" in out and b"q_a=4" in out


def test_compare_order3_directed_rejected(files):
    code, _, err = run(["compare", "--a", files["dir"], "--b", files["dir"], "--directed", "--order", "3"])
    assert code == 2 and err.startswith("ERROR 2: ")


@pytest.mark.parametrize("name", ["bad", "loop"])
def test_compare_invalid_files(files, name):
    code, _, err = run(["compare", "--a", files[name], "--b", files["c4"]])
    assert code == 2 and err.startswith("ERROR 2: ")


def test_usage_errors(files):
    assert run(["compare", "--a", files["c4"]])[0] == 2
    assert run(["compare", "--a", files["c4"], "--b", files["c4"], "--bogus"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["compare", "--a", "/nonexistent", "--b", files["c4"]])[0] == 2
    assert run(["simulate", "--case", "1", "--n", "50", "--k", "2", "--beta", "3", "--reps", "2"])[0] == 2
    assert run(["oracle-check", "--n-max", "13", "--trials", "1"])[0] == 2


def test_scan_formats(files):
    code, out, _ = run(["scan", "--manifest", files["manifest"], "--format", "csv"])
    lines = out.decode().splitlines()
    assert code == 0 and lines[0] == "i,j,statistic,p_value" and len(lines) == 1 + 6
    assert "0,2,0.0,0.5" in lines
    code, out, _ = run(["scan", "--manifest", files["manifest"]])
    assert code == 0 and json.loads(out)["t"] == 3


def test_oracle_check():
    code, out, _ = run(["oracle-check", "--n-max", "7", "--trials", "200", "--seed", "1"])
    rep = json.loads(out)
    assert code == 0 and rep["q2_matches"] == rep["trials"] == 200 and rep["mismatches"] == []
    assert rep["q3_matches"] == rep["q3_trials"] > 0
    assert oracle_check(3, 5, 0)["q2_matches"] == 5


def test_calibrate_command():
    code, out, _ = run(["calibrate", "--case", "1", "--n", "400", "--k", "5", "--beta", "6", "--target-snr", "3.75"])
    rep = json.loads(out)
    assert code == 0 and 0 < rep["b"] < 1 and abs(rep["snr"] - 3.75) <= 3.75e-3
    code, _, err = run(["calibrate", "--case", "1", "--n", "400", "--k", "5", "--beta", "6", "--target-snr", "1e6"])
    assert code == 2 and "not reachable" in err


def test_simulate_byte_identical():
    argv = ["simulate", "--case", "4", "--n", "200", "--k", "2", "--beta", "4", "--b", "0.5", "--reps", "6", "--seed", "9"]
    first = run(argv)
    assert first[0] == 0
    assert run(argv) == first
    assert run(argv + ["--workers", "2"])[1] == first[1]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "ibmtest", "compare", "--a", files["c4"], "--b", files["c4"]],
                          capture_output=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["p_value"] == 0.5
