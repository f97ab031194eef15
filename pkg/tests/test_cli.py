import json
import subprocess
import sys

import pytest

from vassiliev_ubr.cli import EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, run


def run_json(capsys, *argv):
    code = run(list(argv) + ["--json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["tool"] == "vassiliev-ubr"
    return code, doc


def test_census(capsys):
    code, doc = run_json(capsys, "census", "--alg", "B", "--degree", "6")
    assert code == EXIT_OK
    assert doc["result"] == {"algorithm": "B", "degree": 6, "universe": 870, "irreducible": 10}


def test_upper_text(capsys):
    assert run(["upper", "--alg", "A", "--degree", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "|S| = 24" in out and "|I| = 5" in out and "output 3" in out


def test_upper_json_is_deterministic(capsys):
    _, a = run_json(capsys, "upper", "--alg", "B", "--degree", "6", "--prime", "3")
    _, b = run_json(capsys, "upper", "--alg", "B", "--degree", "6", "--prime", "3", "--block", "4")
    assert a["result"]["output"] == 5
    a["result"].pop("blocks"), b["result"].pop("blocks")
    assert a["result"] == b["result"]
    assert "seconds" not in a["result"]
    _, c = run_json(capsys, "upper", "--alg", "B", "--degree", "6", "--block", "0")
    assert c["result"]["blocks"] == 1 and c["result"]["output"] == 5


def test_upper_export_and_matrix_commands(tmp_path, capsys):
    path = str(tmp_path / "a6.ubrm")
    assert run(["upper", "--alg", "A", "--degree", "6", "--export", path]) == EXIT_OK
    capsys.readouterr()
    code, doc = run_json(capsys, "matrix", "info", path)
    assert code == EXIT_OK and doc["result"]["rows"] == 16
    code, doc = run_json(capsys, "matrix", "check", path)
    assert code == EXIT_OK and doc["result"]["nullity"] == 5
    raw = bytearray(open(path, "rb").read())
    raw[-2] ^= 1
    open(path, "wb").write(bytes(raw))
    code, doc = run_json(capsys, "matrix", "check", path)
    assert code == EXIT_FAIL and not doc["result"]["ok"]


def test_lower_per_u(capsys):
    assert run(["lower", "--degree", "6", "--per-u"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "row (2,2,1), total 5" in out
    code, doc = run_json(capsys, "lower", "--degree", "5")
    assert doc["result"] == {"degree": 5, "total": 3}


def test_lower_resource_guard(capsys):
    assert run(["lower", "--degree", "6", "--edge-limit", "5"]) == EXIT_RESOURCE


def test_tables(capsys, tmp_path):
    code, doc = run_json(capsys, "tables", "--max-degree", "12")
    assert doc["result"]["algebra"][-1] == 548 and doc["result"]["reduced"][-1] == 232
    assert run(["tables", "--max-degree", "4", "--csv"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[2] == "rk A_m,1,1,2,3,6"
    f = tmp_path / "p.txt"
    f.write_text("0, 1, 1, 1")
    assert run(["tables", "--max-degree", "3", "--primitives", str(f)]) == EXIT_OK
    capsys.readouterr()
    assert run(["tables", "--max-degree", "8", "--primitives", str(f)]) == EXIT_USAGE
    f.write_text("0 one")
    assert run(["tables", "--max-degree", "1", "--primitives", str(f)]) == EXIT_USAGE


@pytest.mark.parametrize("suite", ["moves", "series", "sandwich"])
def test_verify(suite, capsys):
    code, doc = run_json(capsys, "verify", "--suite", suite, "--max-degree", "5")
    assert code == EXIT_OK and doc["result"]["ok"]


def test_usage_errors(capsys):
    assert run(["upper", "--alg", "C", "--degree", "5"]) == EXIT_USAGE
    assert run(["upper", "--alg", "B", "--degree", "2"]) == EXIT_USAGE
    assert run(["census"]) == EXIT_USAGE
    assert run(["matrix", "check", "/nonexistent/file"]) == EXIT_USAGE


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "vassiliev_ubr", "census", "--alg", "A", "--degree", "4"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "|I| = 2" in out.stdout
