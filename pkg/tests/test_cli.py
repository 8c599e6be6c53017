from __future__ import annotations

import io

import numpy as np
import pytest

from maxsurf.cli import main
from maxsurf.families import snsn_matrix


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def snsn_file(tmp_path):
    p = tmp_path / "snsn.txt"
    np.savetxt(p, np.array(snsn_matrix(0.64, 0.64)), fmt="%.17g")
    return str(p)


def test_matrix_check_snsn(snsn_file):
    code, out, _ = run(["matrix", "check", snsn_file])
    assert code == 0
    assert "generating: yes" in out
    line = next(l for l in out.splitlines() if l.startswith("discriminant:"))
    assert float(line.split()[1]) == pytest.approx(0.25, abs=1e-12)
    assert "kind: elliptic" in out


def test_matrix_check_not_generating(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 2 3\n4 5 6\n7 8 10\n")
    code, out, _ = run(["matrix", "check", str(p)])
    assert code == 1 and "generating: no" in out


def test_matrix_check_parabolic(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 0 0\n1 0 0\n0 1 1\n")
    code, out, _ = run(["matrix", "check", str(p)])
    assert code == 0 and "kind: parabolic" in out and "normal_form: 2" in out


def test_matrix_check_malformed(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 2 three")
    assert run(["matrix", "check", str(p)])[0] == 2
    assert run(["matrix", "check", str(tmp_path / "missing.txt")])[0] == 2


def test_sample_rows_and_summary(tmp_path):
    out_csv = tmp_path / "s.csv"
    code, out, _ = run(["sample", "--surface", "snsn", "--n", "64", "--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "x,y,z,zx,zy,grad_norm_sq,causal,residual"
    assert len(lines) == 1 + 64 * 64
    assert "max_residual=" in out


def test_sample_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(["sample", "--surface", "sncn", "--n", "20", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_sample_tanh_no_singular_flags(tmp_path):
    mesh = tmp_path / "m.obj"
    code, out, err = run(["sample", "--surface", "tanh-scherk", "--window", "-2", "2", "-2", "2", "--n", "16", "--mesh", str(mesh)])
    assert code == 0 and "singular=0" in err
    text = mesh.read_text()
    assert "# singular" not in text
    assert sum(1 for l in text.splitlines() if l.startswith("v ")) == 256
    assert text.count("\nf ") == 2 * 15 * 15


def test_sample_mesh_flags_singular_vertices(tmp_path):
    mesh = tmp_path / "m.obj"
    w = ["0", "3.141592653589793", "0", "3.141592653589793"]
    code, _, _ = run(["sample", "--surface", "sinsin1", "--window", *w, "--n", "3", "--mesh", str(mesh), "--out", str(tmp_path / "s.csv")])
    assert code == 0
    assert "# singular 5" in mesh.read_text()


def test_sample_degenerate_window():
    assert run(["sample", "--surface", "snsn", "--window", "0", "0", "0", "1"])[0] == 2


def test_sample_from_matrix_file(snsn_file):
    code, out, _ = run(["sample", "--matrix", snsn_file, "--n", "3"])
    assert code == 0 and len(out.splitlines()) == 1 + 9


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sampling\nsurface = cncn\nn = 4\nk = 0.5\n")
    code, out, _ = run(["sample", "--config", str(cfg)])
    assert code == 0 and len(out.splitlines()) == 1 + 16
    code, out, _ = run(["sample", "--config", str(cfg), "--n", "3"])
    assert len(out.splitlines()) == 1 + 9
    cfg.write_text("surface cncn\n")
    assert run(["sample", "--config", str(cfg)])[0] == 2


def test_singular_report_sinsin1():
    w = ["0", "6.283185307179586", "0", "6.283185307179586"]
    code, out, _ = run(["singular", "--surface", "sinsin1", "--window", *w])
    assert code == 0
    assert "points=4" in out
    assert out.count("type=Degenerate") == 4
    assert "x0=1.5707963267948966" in out


def test_singular_report_cncn_and_empty():
    code, out, _ = run(["singular", "--surface", "cncn"])
    assert code == 0 and "type=Type1" in out and "type=Type" in out
    code, out, _ = run(["singular", "--surface", "cncn", "--window", "1", "2", "1", "2"])
    assert code == 0 and "points=0" in out


def test_levelset(tmp_path):
    p = tmp_path / "ls.csv"
    code, out, _ = run(["levelset", "--surface", "snsn", "--window", "1", "1.4", "1", "1.4", "--n", "200", "--out", str(p)])
    assert code == 0 and "branches=4" in out and "ok" in out
    assert p.read_text().startswith("x,y\n")
    code, out, _ = run(["levelset", "--surface", "cncn", "--window", "-0.05", "0.05", "-0.05", "0.05", "--n", "100"])
    assert code == 0 and out == "x,y\n"


def test_verify_and_catalog():
    code, out, _ = run(["verify", "tanh-scherk"])
    assert code == 0 and "result=ok" in out
    code, out, _ = run(["catalog", "list"])
    assert code == 0 and out.splitlines()[0].startswith("snsn")
    assert run(["verify", "helicoid"])[0] == 2
    assert run(["verify", "snsn", "--k", "1.5"])[0] == 2


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["sample"])[0] == 2
    assert run(["sample", "--surface", "snsn", "--matrix", "x.txt"])[0] == 2
