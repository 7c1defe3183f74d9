import numpy as np
import pytest

from qsystems.morphisms import (
    Morphism,
    braid,
    categorical_trace,
    compose,
    distance,
    identity_morphism,
)
from qsystems.qsystem import (
    QSystem,
    ThetaSpec,
    assemble_qsystem,
    check_commutativity,
    lr_qsystem,
    lr_zeta,
    validate_qsystem,
)
from qsystems.ctps import ctps_braiding

PHI = (1.0 + np.sqrt(5.0)) / 2.0


def test_trivial_system_residuals_zero(lr_systems):
    q, D = lr_systems["trivial"]
    rep = validate_qsystem(q, tol=1e-12)
    assert rep.ok
    assert rep.worst() == 0.0
    assert q.theta.d_theta == 1.0


@pytest.mark.parametrize("name,dth", [("fibonacci", 1 + PHI**2), ("ising", 4.0)])
def test_diagonal_systems_valid(lr_systems, name, dth):
    q, D = lr_systems[name]
    rep = validate_qsystem(q, tol=1e-9)
    assert rep.ok, rep.residuals
    assert q.theta.d_theta == pytest.approx(dth, abs=1e-10)
    # unit multiplicity of the identity in theta
    assert D.obj_dim(0, q.theta.object) == 1


def test_d_theta_equals_trace(lr_systems):
    for name in ["fibonacci", "ising", "semion"]:
        q, D = lr_systems[name]
        tr = categorical_trace(identity_morphism(D, q.theta.object))
        assert tr.real == pytest.approx(q.theta.d_theta, abs=1e-9)


def test_unit_law_constant_is_dim_sqrt(lr_systems):
    # scaling w1 breaks the unit law with its sqrt(d(theta)) constant
    q, D = lr_systems["fibonacci"]
    bad = QSystem(theta=q.theta, w=q.w, w1=1.01 * q.w1)
    rep = validate_qsystem(bad, tol=1e-9)
    assert rep.residuals["unit_left"] > 1e-3
    assert rep.residuals["isometry"] > 1e-3


def test_zeta_perturbation_rejected(lr_systems):
    q, D = lr_systems["fibonacci"]
    theta = q.theta
    pairs = [D.unpack(lam) for lam, _ in theta.summands]
    base = lr_zeta(D, theta, pairs)
    for key in list(base):
        z = dict(base)
        z[key] = z[key] + 1e-3
        q2 = assemble_qsystem(theta, z)
        rep = validate_qsystem(q2, tol=1e-8)
        assert not rep.ok, key


def test_unitary_perturbation_of_w1_rejected(lr_systems, rng):
    q, D = lr_systems["ising"]
    th2 = q.w1.target
    blocks = {}
    for c in range(D.rank):
        n = D.obj_dim(c, th2)
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (h + h.conj().T)
        w, v = np.linalg.eigh(h)
        blocks[c] = v @ np.diag(np.exp(1e-3j * w)) @ v.conj().T
    u = Morphism(D, th2, th2, blocks)
    q2 = QSystem(theta=q.theta, w=q.w, w1=compose(u, q.w1))
    rep = validate_qsystem(q2, tol=1e-8)
    assert rep.residuals["isometry"] < 1e-10  # unitary: still an isometry
    assert not rep.ok  # but the algebra relations fail


def test_commutativity_diagonal_systems(lr_systems):
    for name in ["fibonacci", "ising", "semion", "z4"]:
        q, D = lr_systems[name]
        eps = braid(D, q.theta.object, q.theta.object)
        assert check_commutativity(q, eps) < 1e-9, name


def test_commutativity_wrong_convention_breaks(lr_systems):
    # braiding the opposite factor without conjugating is off by O(1)
    for name in ["fibonacci", "ising"]:
        q, D = lr_systems[name]
        eps_bad = ctps_braiding(D, q.theta, convention="unconjugated")
        assert check_commutativity(q, eps_bad) > 0.1, name


def test_theta_spec_indexing(models):
    m = models["su2k4"]
    spec = ThetaSpec(m, {0: 1, 2: 2, 4: 1})
    assert spec.summands == [(0, 1), (2, 1), (2, 2), (4, 1)]
    assert spec.index(2, 2) == 2
    assert spec.d_theta == pytest.approx(1 + 2 * m.qdim[2] + 1)


def test_multiplicity_two_diagonal_system(models):
    # Rep(A4) has N(3,3,3) = 2: the coefficient tensor carries genuine
    # multiplicity-index pairs and the construction must still close
    m = models["rep_a4"]
    assert m.N[3, 3, 3] == 2
    q, D = lr_qsystem(m)
    rep = validate_qsystem(q, tol=1e-9)
    assert rep.ok, rep.residuals
    assert q.theta.d_theta == pytest.approx(12.0, abs=1e-10)
    eps = braid(D, q.theta.object, q.theta.object)
    assert check_commutativity(q, eps) < 1e-9
