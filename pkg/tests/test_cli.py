import json

import numpy as np
import pytest

from qsystems.cli import main
from qsystems.io import load_algebra, load_category, read_matrix, save_algebra, save_category, write_matrix
from qsystems.morphisms import distance


def run(argv):
    return main([str(a) for a in argv])


def test_verify_category_ok(data_dir, capsys):
    for name in ["trivial", "fibonacci", "ising", "su2k4", "z2boson", "semion", "z4", "rep_a4"]:
        assert run(["verify-category", data_dir / f"{name}.cat"]) == 0
    out = capsys.readouterr().out
    assert "pass: True" in out


def test_verify_category_corrupted_f_entry(data_dir, tmp_path, capsys):
    doc = json.loads((data_dir / "fibonacci.cat").read_text())
    for entry in doc["F"]:
        if entry[:4] == [1, 1, 1, 1] and entry[4] == [0, 0, 0] and entry[5] == [0, 0, 0]:
            entry[6] = [0.9, 0.0]  # corrupt one recoupling coefficient
    bad = tmp_path / "bad.cat"
    bad.write_text(json.dumps(doc))
    assert run(["verify-category", bad]) == 1
    out = capsys.readouterr().out
    assert "pentagon" in out and "FAIL" in out


def test_verify_category_truncated_file(data_dir, tmp_path):
    trunc = tmp_path / "trunc.cat"
    trunc.write_text((data_dir / "fibonacci.cat").read_text()[:50])
    assert run(["verify-category", trunc]) == 2


def test_missing_file_is_io_error(tmp_path):
    assert run(["verify-category", tmp_path / "nope.cat"]) == 2


def test_lr_qsystem_command(data_dir, tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert run(["lr-qsystem", data_dir / "fibonacci.cat", "--report", rep]) == 0
    out = capsys.readouterr().out
    assert "3.6180339887" in out
    doc = json.loads(rep.read_text())
    assert doc["pass"] is True
    assert doc["d_theta"] == pytest.approx(3.6180339887, abs=1e-9)
    assert run(["lr-qsystem", data_dir / "ising.cat"]) == 0
    assert run(["lr-qsystem", data_dir / "trivial.cat"]) == 0


def test_build_ctps_d4(data_dir, tmp_path, capsys):
    rep = tmp_path / "d4.json"
    code = run(["build-ctps", data_dir / "su2k4.cat", "--alg", data_dir / "z2.alg",
                "--report", rep])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["pass"] is True
    assert doc["d_theta"] == pytest.approx(12.0, abs=1e-8)
    assert doc["z_matrix"] == [[1, 0, 0, 0, 1], [0, 0, 0, 0, 0], [0, 0, 2, 0, 0],
                               [0, 0, 0, 0, 0], [1, 0, 0, 0, 1]]
    assert doc["normality"]["n2"] is False
    out = capsys.readouterr().out
    assert "pass: True" in out


def test_build_ctps_trivial_extensions(data_dir, tmp_path):
    rep = tmp_path / "lr.json"
    assert run(["build-ctps", data_dir / "fibonacci.cat", "--report", rep]) == 0
    doc = json.loads(rep.read_text())
    assert doc["z_matrix"] == [[1, 0], [0, 1]]
    assert doc["normality"]["n3"] is True and doc["normality"]["pi"] == [0, 1]


def test_build_ctps_plus_plus_reported_honestly(data_dir, tmp_path, capsys):
    rep = tmp_path / "pp.json"
    code = run(["build-ctps", data_dir / "su2k4.cat", "--alg", data_dir / "z2.alg",
                "--ext1", "plus", "--ext2", "plus", "--report", rep])
    assert code == 1
    doc = json.loads(rep.read_text())
    assert doc["pass"] is False
    assert doc["residuals"]["chiral_locality"] > 0.1
    assert doc["residuals"]["commutativity"] is None
    assert any("commutativity" in s for s in doc["skipped"])


def test_check_invariant_command(data_dir, tmp_path):
    assert run(["check-invariant", data_dir / "su2k4.cat",
                "--matrix", data_dir / "d4_su2k4.mat"]) == 0
    ident = tmp_path / "id.mat"
    write_matrix(np.eye(2, dtype=int), ident)
    assert run(["check-invariant", data_dir / "fibonacci.cat", "--matrix", ident]) == 0
    bad = tmp_path / "bad.mat"
    write_matrix(np.array([[1, 1], [0, 1]]), bad)
    assert run(["check-invariant", data_dir / "fibonacci.cat", "--matrix", bad]) == 1
    wrong_shape = tmp_path / "ws.mat"
    write_matrix(np.eye(3, dtype=int), wrong_shape)
    assert run(["check-invariant", data_dir / "fibonacci.cat", "--matrix", wrong_shape]) == 2


def test_check_invariant_degenerate_skips(data_dir, tmp_path, capsys):
    ident = tmp_path / "id.mat"
    write_matrix(np.eye(2, dtype=int), ident)
    assert run(["check-invariant", data_dir / "z2boson.cat", "--matrix", ident]) == 0
    err = capsys.readouterr().err
    assert "degenerate" in err


def test_enumerate_invariants_command(data_dir, tmp_path):
    rep = tmp_path / "enum.json"
    assert run(["enumerate-invariants", data_dir / "su2k4.cat", "--bound", "3",
                "--report", rep]) == 0
    doc = json.loads(rep.read_text())
    d4 = [[1, 0, 0, 0, 1], [0, 0, 0, 0, 0], [0, 0, 2, 0, 0],
          [0, 0, 0, 0, 0], [1, 0, 0, 0, 1]]
    assert d4 in doc["invariants"]
    assert doc["count"] == len(doc["invariants"])


def test_bundle_round_trip(data_dir, tmp_path):
    for name in ["fibonacci", "ising", "su2k4", "z4", "semion", "z2boson", "trivial", "rep_a4"]:
        src = data_dir / f"{name}.cat"
        model = load_category(src)
        dst = tmp_path / f"{name}.cat"
        save_category(model, dst, provenance=json.loads(src.read_text())["provenance"])
        assert json.loads(src.read_text()) == json.loads(dst.read_text()), name
        model2 = load_category(dst)
        assert np.array_equal(model.N, model2.N)
        assert np.allclose(model.qdim, model2.qdim)


def test_algebra_round_trip(data_dir, tmp_path, models):
    src = data_dir / "z2.alg"
    alg = load_algebra(src, models["su2k4"])
    dst = tmp_path / "z2.alg"
    save_algebra(alg, dst, name="z2", provenance=json.loads(src.read_text())["provenance"])
    assert json.loads(src.read_text()) == json.loads(dst.read_text())
    alg2 = load_algebra(dst, models["su2k4"])
    assert distance(alg.mult, alg2.mult) == 0


def test_reports_deterministic(data_dir, tmp_path):
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    run(["build-ctps", data_dir / "su2k4.cat", "--alg", data_dir / "z2.alg", "--report", r1])
    run(["build-ctps", data_dir / "su2k4.cat", "--alg", data_dir / "z2.alg", "--report", r2])
    d1, d2 = json.loads(r1.read_text()), json.loads(r2.read_text())
    d1.pop("wall_time_s"), d2.pop("wall_time_s")
    assert d1 == d2


def test_matrix_io_round_trip(tmp_path):
    Z = np.array([[1, 0, 2], [0, 3, 0], [1, 1, 1]])
    p = tmp_path / "m.mat"
    write_matrix(Z, p)
    assert np.array_equal(read_matrix(p), Z)
