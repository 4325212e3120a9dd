import json
import subprocess
import sys

import pytest

from qe2.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "--algebra", "Dq", "F*b - q^-1*b*F")
    assert code == 0 and out.strip() == "a"


def test_comm_exit_codes(capsys):
    assert run(capsys, "comm", "--algebra", "Dq", "--factor", "q", "phi", "psi")[0] == 0
    assert run(capsys, "comm", "--algebra", "Dq", "--factor", "1", "E", "c")[0] == 1


@pytest.mark.parametrize("argv", [
    ("nf", "--algebra", "Dq", "b^q"),
    ("nf", "--algebra", "Dq", "(E*c"),
    ("nf", "--algebra", "Nope", "a"),
    ("bogus",),
    ("center", "--matrix", "/nonexistent.json"),
    ("check-map", "--family", "Dq.rho", "--matrix", "1 1 1 1"),
    ("check-map", "--family", "Nope"),
    ("module-audit", "--module", "Z"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_parse_error_has_position(capsys):
    _, _, err = run(capsys, "nf", "--algebra", "Dq", "b^q")
    assert "column 3" in err and "exponent must be an integer literal" in err


def test_center(capsys):
    code, out, _ = run(capsys, "center", "--matrix", "builtin:D")
    assert code == 0 and "kernel rank 0; center trivial" in out
    code, out, _ = run(capsys, "center", "--matrix", "CX")
    assert code == 0 and "kernel rank 1" in out


def test_center_from_file(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text("[[0, 1], [-1, 0]]")
    assert run(capsys, "center", "--matrix", str(p))[0] == 0
    p.write_text("[[0, 1], [1, 0]]")
    assert run(capsys, "center", "--matrix", str(p))[0] == 2


def test_check_map(capsys):
    code, out, _ = run(capsys, "check-map", "--family", "Dq.rho", "--matrix", "0 1 -1 0", "lam=2", "mu=q")
    assert code == 0 and "pass" in out
    assert run(capsys, "check-map", "--family", "Uq.eta", "alpha=2", "beta=q", "gamma=3")[0] == 0
    assert run(capsys, "check-map", "--family", "Oq.tau")[0] == 0


def test_check_map_random_is_seeded(capsys, monkeypatch):
    monkeypatch.setenv("QE2_SEED", "7")
    code1, out1, _ = run(capsys, "check-map", "--family", "Dq.rho", "--random", "3")
    code2, out2, _ = run(capsys, "check-map", "--family", "Dq.rho", "--random", "3")
    assert code1 == code2 == 0 and out1 == out2


def test_suite_json(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "suite", "--quiet", "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert set(data) == {"version", "entries"}
    entries = data["entries"]
    assert len(entries) >= 30
    assert [e["id"] for e in entries] == sorted(e["id"] for e in entries)
    for e in entries:
        assert set(e) == {"id", "anchor", "status", "residue", "elapsed_ms"}
        assert e["status"] == "pass" and e["residue"] == "0"


def test_suite_filter(capsys):
    code, out, _ = run(capsys, "suite", "--filter", "Fbi")
    assert code == 0 and "6/6" in out


def test_module_audit(capsys):
    assert run(capsys, "module-audit", "--module", "W(gamma)", "--window", "6")[0] == 0
    assert run(capsys, "module-audit", "--module", "H", "--window", "3")[0] == 0
    assert run(capsys, "module-audit", "--module", "ind-M", "--window", "1")[0] == 0


def test_induce(capsys):
    code, out, _ = run(capsys, "induce", "--module", "H", "--window", "1")
    assert code == 0 and "K-eigenvalue on stratum 1: chi*q^-1" in out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "qe2", "nf", "--algebra", "Dq", "E*c - c*E"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip() == "(q^-1)*K*a^-1"  # a^-1 K in PBW order (K, a, ...)
