import numpy as np
import pytest

from qsystems.ctps import alpha_pair, trivial_pair
from qsystems.induction import coupling_matrix, trivial_algebra
from qsystems.modular import (
    check_modular_invariant,
    compute_st,
    enumerate_commutant,
    modular_residuals,
    verlinde_fusion,
)
from qsystems.morphisms import UnsupportedOperationError

PHI = (1.0 + np.sqrt(5.0)) / 2.0


def test_trivial_modular_data(models):
    p = compute_st(models["trivial"])
    assert np.allclose(p.S, [[1.0]])
    assert np.allclose(p.T, [1.0])


def test_fibonacci_s_matrix(models):
    p = compute_st(models["fibonacci"])
    assert p.S[0, 0] == pytest.approx(1.0 / np.sqrt(1 + PHI**2), abs=1e-10)
    assert p.S[0, 0] == pytest.approx(0.5257311121, abs=1e-9)
    assert p.modular


def test_structure_identities(models):
    for name in ["fibonacci", "ising", "semion", "z4", "su2k4"]:
        m = models[name]
        p = compute_st(m)
        res = modular_residuals(p, m.dual)
        assert max(res.values()) < 1e-9, (name, res)


def test_verlinde_consistency(models):
    for name in ["fibonacci", "ising", "semion", "z4", "su2k4"]:
        m = models[name]
        assert np.array_equal(verlinde_fusion(compute_st(m)), m.N), name


def test_invariant_identity_and_d4(models):
    su = models["su2k4"]
    p = compute_st(su)
    res = check_modular_invariant(np.eye(5, dtype=int), p)
    assert max(res.values()) < 1e-12
    d4 = np.zeros((5, 5), dtype=int)
    d4[0, 0] = d4[0, 4] = d4[4, 0] = d4[4, 4] = 1
    d4[2, 2] = 2
    res = check_modular_invariant(d4, p)
    assert max(res.values()) < 1e-9


def test_random_matrix_not_invariant(models, rng):
    su = models["su2k4"]
    p = compute_st(su)
    hits = 0
    for _ in range(5):
        Z = rng.integers(0, 2, size=(5, 5))
        Z[0, 0] = 1
        res = check_modular_invariant(Z, p)
        if max(res.values()) > 0.1:
            hits += 1
    assert hits >= 4  # generically O(1) commutators


def test_enumerations(models):
    fib = compute_st(models["fibonacci"])
    found = enumerate_commutant(fib, 3)
    assert len(found) == 1 and np.array_equal(found[0], np.eye(2, dtype=int))
    isg = compute_st(models["ising"])
    found = enumerate_commutant(isg, 3)
    assert len(found) == 1 and np.array_equal(found[0], np.eye(3, dtype=int))
    z4 = compute_st(models["z4"])
    found = enumerate_commutant(z4, 3)
    conj = np.zeros((4, 4), dtype=int)
    for a in range(4):
        conj[a, (-a) % 4] = 1
    assert len(found) == 2
    assert any(np.array_equal(Z, conj) for Z in found)
    assert any(np.array_equal(Z, np.eye(4, dtype=int)) for Z in found)
    su = compute_st(models["su2k4"])
    found = enumerate_commutant(su, 3)
    d4 = np.zeros((5, 5), dtype=int)
    d4[0, 0] = d4[0, 4] = d4[4, 0] = d4[4, 4] = 1
    d4[2, 2] = 2
    assert any(np.array_equal(Z, d4) for Z in found)


def test_coupling_matrices_appear_in_commutant(models, algebras):
    cases = [("fibonacci", trivial_algebra(models["fibonacci"])),
             ("su2k4", algebras["z2"]),
             ("z4", algebras["z4fermion"]),
             ("fibonacci", algebras["fibtau"]),
             ("ising", algebras["isingpsi"])]
    for name, alg in cases:
        Z = coupling_matrix(alg)
        p = compute_st(models[name])
        found = enumerate_commutant(p, int(Z.max()) + 1)
        assert any(np.array_equal(Z, W) for W in found), name


def test_degenerate_braiding_flagged(models):
    p = compute_st(models["z2boson"])
    assert not p.modular
    with pytest.raises(UnsupportedOperationError):
        check_modular_invariant(np.eye(2, dtype=int), p)
    with pytest.raises(UnsupportedOperationError):
        enumerate_commutant(p, 2)
