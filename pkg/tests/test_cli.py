from __future__ import annotations

import json
import subprocess
import sys

from pgcolor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_property_e_verify_builtin(capsys):
    code, out = run(capsys, "property-e", "verify", "--q", "2", "--builtin")
    assert code == 0 and "15 spreads" in out


def test_color_recurse_and_verify(tmp_path, capsys):
    path = tmp_path / "pg5q3.json"
    code, out = run(capsys, "color", "recurse", "--n", "5", "--q", "3", "-o", str(path))
    assert code == 0
    code, out = run(capsys, "verify", str(path))
    assert code == 0
    assert "121 spreads × 91 lines" in out


def test_recurse_from_lower_level(tmp_path, capsys):
    p5 = tmp_path / "p5.json"
    assert run(capsys, "color", "recurse", "--n", "5", "--q", "2", "-o", str(p5))[0] == 0
    code, out = run(capsys, "color", "recurse", "--n", "7", "--q", "2", "--base-cert", str(p5))
    assert code == 0 and "c(7,2) = 127" in out


def test_tampered_file_exit_1(tmp_path, capsys):
    path = tmp_path / "e.json"
    assert run(capsys, "export", "property-e", "--q", "2", "-o", str(path))[0] == 0
    env = json.loads(path.read_text())
    env["payload"]["S"].pop()
    path.write_text(json.dumps(env))
    code, out = run(capsys, "verify", str(path))
    assert code == 1 and "hash" in out


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "field", "--p", "6", "--m", "1")[0] == 2
    assert run(capsys, "property-e", "verify", "--q", "5", "--builtin")[0] == 2
    assert run(capsys, "verify", "/nonexistent/file.json")[0] == 2
    assert run(capsys, "color", "recurse", "--n", "6", "--q", "2")[0] == 2


def test_oversize_exit_2(capsys):
    code, out = run(capsys, "color", "recurse", "--n", "5", "--q", "8")
    assert code == 2 and "too large" in out


def test_budget_exit_3(capsys):
    code, out = run(capsys, "spread-search", "--n", "5", "--q", "2", "--budget", "2")
    assert code in (0, 3)
    code, out = run(capsys, "color", "search-pg4", "--q", "3", "--budget", "50")
    assert code == 3 and "budget exhausted" in out


def test_infeasible_exit_1(capsys):
    assert run(capsys, "spread-search", "--n", "3", "--q", "3", "--profile", "withE")[0] == 1
    assert run(capsys, "color", "search-pg4", "--q", "3", "--palette", "43")[0] == 1


def test_misc_commands(tmp_path, capsys):
    assert run(capsys, "field", "--p", "3", "--m", "2")[0] == 0
    assert run(capsys, "space", "--n", "3", "--q", "2")[0] == 0
    code, out = run(capsys, "orbits", "--n", "5", "--q", "2")
    assert code == 0 and "10 full" in out
    assert run(capsys, "tpg", "resolve", "--n", "4", "--q", "3")[0] == 0
    assert run(capsys, "datasets")[0] == 0
    par = tmp_path / "par.json"
    assert run(capsys, "parallelism-search", "--n", "3", "--q", "4", "--group-order", "5", "-o", str(par))[0] == 0
    assert run(capsys, "import", str(par))[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "pgcolor", "property-e", "verify", "--q", "4", "--builtin"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "85 spreads" in out.stdout
