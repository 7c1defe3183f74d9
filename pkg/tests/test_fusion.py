import numpy as np
import pytest

from qsystems.fusion import FusionData, StructureError, compute_qdims, validate_fusion

PHI = (1.0 + np.sqrt(5.0)) / 2.0


def fib_data(**kw):
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = N[1, 1, 1] = 1
    return FusionData(["1", "tau"], [0, 1], N, **kw)


def ising_N():
    N = np.zeros((3, 3, 3), dtype=int)
    for a in range(3):
        N[a, 0, a] = N[0, a, a] = 1
    N[1, 1, 0] = N[1, 1, 2] = 1
    N[1, 2, 1] = N[2, 1, 1] = 1
    N[2, 2, 0] = 1
    return N


def test_fibonacci_hand_checked_valid():
    rep = validate_fusion(fib_data())
    assert rep.ok, str(rep)


def test_single_label_valid():
    data = FusionData(["1"], [0], np.ones((1, 1, 1), dtype=int))
    assert validate_fusion(data).ok
    assert data.qdim[0] == pytest.approx(1.0)


def test_ising_wrong_dual_caught():
    # dual(s) mis-set to p: the conjugate axiom N^0_(s p) = 1 fails
    data = FusionData(["1", "s", "p"], [0, 2, 1], ising_N())
    rep = validate_fusion(data)
    assert not rep.ok
    assert any(code == "conjugates" for code, _, _ in rep.violations)


def test_associativity_violation_detected():
    N = ising_N()
    N[1, 2, 1] = 2  # s*p = 2s: (s p) p no longer matches s (p p)
    rep = validate_fusion(FusionData(["1", "s", "p"], [0, 1, 2], N,
                                     qdim=[1.0, np.sqrt(2.0), 1.0]))
    assert any(code == "associativity" for code, _, _ in rep.violations)


def test_malformed_shape_is_structural_error():
    with pytest.raises(StructureError):
        FusionData(["1", "tau"], [0, 1], np.ones((2, 2), dtype=int))
    with pytest.raises(StructureError):
        FusionData(["1", "tau"], [0], np.zeros((2, 2, 2), dtype=int))


def test_qdim_fibonacci_matches_polynomial_root():
    # oracle: the positive root of d^2 = d + 1
    root = max(np.roots([1.0, -1.0, -1.0]).real)
    d = compute_qdims(fib_data())
    assert d[1] == pytest.approx(root, abs=1e-12)
    assert d[1] == pytest.approx(1.6180339887, abs=1e-9)


def test_qdim_ising_perron_frobenius():
    # oracle: Perron-Frobenius eigenvalue of the s fusion matrix
    data = FusionData(["1", "s", "p"], [0, 1, 2], ising_N())
    d = compute_qdims(data)
    Ns = data.N[1]  # (N_s)_{mu nu} = N^nu_(s mu)
    pf = max(np.linalg.eigvals(Ns.astype(float)).real)
    assert d[1] == pytest.approx(pf, abs=1e-12)
    assert d[1] == pytest.approx(1.4142135623, abs=1e-9)
    assert d[2] == pytest.approx(1.0, abs=1e-12)


def test_qdim_equations_residual(models):
    for name, model in models.items():
        data = model.fusion
        d = compute_qdims(data)
        lhs = d[:, None] * d[None, :]
        rhs = np.einsum("lmn,n->lm", data.N, d)
        assert np.max(np.abs(lhs - rhs)) < 1e-12, name
        # bundled dimensions agree with the recomputed ones
        assert np.max(np.abs(d - data.qdim)) < 1e-9, name
        assert np.max(np.abs(d - d[data.dual])) < 1e-12, name


def test_bundled_categories_validate(models):
    for name, model in models.items():
        rep = validate_fusion(model.fusion)
        assert rep.ok, (name, str(rep))


def test_global_dim():
    assert fib_data().global_dim == pytest.approx(1 + PHI**2)
