"""Canonical triples (theta, w, w1) and their defining relations.

A Q-system over a category model is an object theta (a direct sum of simple
sectors with multiplicities), an isometry w in Hom(id, theta) and an isometry
w1 in Hom(theta, theta^2) subject to

* unit law:        w* w1 = theta(w*) w1 = d(theta)^(-1/2) 1
* coassociativity: w1 w1 = theta(w1) w1
* Frobenius:       w1 w1* = theta(w1*) w1

where theta(x) = 1_theta x x (left monoidal multiplication).  The validator
reports the operator-norm residual of each relation; residual norms are the
largest singular value across sector blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .morphisms import (
    CategoryModel,
    Morphism,
    SumObject,
    adjoint,
    compose,
    deligne_product,
    distance,
    identity_morphism,
    lmul,
    mirror,
    rmul,
    unit_intro,
)

__all__ = ["ThetaSpec", "QSystem", "QReport", "validate_qsystem", "assemble_qsystem",
           "lr_zeta", "lr_qsystem", "check_commutativity"]


class ThetaSpec:
    """Direct sum of simple sectors with multiplicities, as a Q-system carrier.

    Summands are enumerated as (label, copy) pairs, lexicographically; the
    copy index runs from 1 to the multiplicity.  Tags on the underlying
    :class:`SumObject` are those pairs.
    """

    def __init__(self, model: CategoryModel, multiplicities: dict):
        self.model = model
        self.multiplicities = {int(k): int(v) for k, v in multiplicities.items() if v > 0}
        self.summands = [(lam, copy)
                         for lam in sorted(self.multiplicities)
                         for copy in range(1, self.multiplicities[lam] + 1)]
        self.object = SumObject(tuple((lam,) for lam, _ in self.summands),
                                tuple(self.summands))
        self.d_theta = float(sum(model.qdim[lam] for lam, _ in self.summands))

    def index(self, lam: int, copy: int = 1) -> int:
        return self.summands.index((lam, copy))

    def __len__(self):
        return len(self.summands)

    def __repr__(self):
        terms = [f"{v}*{self.model.fusion.names[k]}" for k, v in sorted(self.multiplicities.items())]
        return "ThetaSpec(" + " + ".join(terms) + ")"


@dataclass
class QSystem:
    """Canonical triple: theta with w in Hom(id, theta), w1 in Hom(theta, theta^2)."""

    theta: ThetaSpec
    w: Morphism
    w1: Morphism

    @property
    def model(self) -> CategoryModel:
        return self.theta.model


@dataclass
class QReport:
    """Residuals of the Q-system relations, with a pass flag at `tol`."""

    residuals: dict
    irreducible: bool
    tol: float
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.irreducible and all(v < self.tol for v in self.residuals.values())

    def worst(self) -> float:
        return max(self.residuals.values())

    def __str__(self):
        lines = [f"  {k:16s} {v: .3e}" for k, v in self.residuals.items()]
        lines.append(f"  irreducible      {self.irreducible}")
        lines.append(f"  pass             {self.ok} (tol {self.tol:g})")
        return "\n".join(lines)


def validate_qsystem(q: QSystem, tol: float = 1e-8) -> QReport:
    """Check the unit, coassociativity, Frobenius and isometry relations."""
    model = q.model
    th = q.theta.object
    c = q.theta.d_theta ** -0.5
    id_th = identity_morphism(model, th)
    w_star = adjoint(q.w)
    w1_star = adjoint(q.w1)
    residuals = {
        "unit_left": distance(compose(rmul(w_star, th), q.w1), c * id_th),
        "unit_right": distance(compose(lmul(th, w_star), q.w1), c * id_th),
        "coassociativity": distance(compose(rmul(q.w1, th), q.w1),
                                    compose(lmul(th, q.w1), q.w1)),
        "frobenius": distance(compose(q.w1, w1_star),
                              compose(lmul(th, w1_star), rmul(q.w1, th))),
        "isometry": distance(compose(w1_star, q.w1), id_th),
        "w_isometry": distance(compose(adjoint(q.w), q.w),
                               identity_morphism(model, q.w.source)),
    }
    irreducible = model.obj_dim(0, th) == 1
    return QReport(residuals=residuals, irreducible=irreducible, tol=tol)


def assemble_qsystem(theta: ThetaSpec, zeta) -> QSystem:
    """Assemble (theta, w, w1) from comultiplication coefficients.

    ``zeta`` maps ``(n, l, m, e) -> complex`` over summand indices n, l, m of
    theta and the multiplicity index e of Hom(nu, lam mu); missing keys are
    zero.  w is the injection of the identity summand, and

        w1 = sum (W_l x W_m) T^n_lm W_n*,
        T^n_lm = sum_e zeta[n,l,m,e] T_e.
    """
    model = theta.model
    th = theta.object
    if model.obj_dim(0, th) != 1:
        raise ValueError("theta must contain the identity sector exactly once")
    th2 = SumObject(
        tuple(wl + wm for wl in th.words for wm in th.words),
        tuple((tl, tm) for tl in th.tags for tm in th.tags),
    )
    w = unit_intro(model, th, 0)
    ns = len(theta)
    blocks = {}
    for c in range(model.rank):
        rows = model.obj_offsets(c, th2)
        cols = model.obj_offsets(c, th)
        M = np.zeros((rows[-1], cols[-1]), dtype=complex)
        for n, (nu, _) in enumerate(theta.summands):
            if c != nu:
                continue
            col = cols[n]
            for l, (lam, _) in enumerate(theta.summands):
                for m, (mu, _) in enumerate(theta.summands):
                    k = l * ns + m
                    nmult = int(model.N[lam, mu, nu])
                    for e in range(nmult):
                        val = zeta.get((n, l, m, e))
                        if val:
                            M[rows[k] + e, col] = val
        blocks[c] = M
    w1 = Morphism(model, th, th2, blocks)
    return QSystem(theta=theta, w=w, w1=w1)


def lr_zeta(D, theta: ThetaSpec, pairs: list) -> dict:
    """Closed-form coefficients for the identity coupling matrix.

    With both extensions trivial the coefficient formula collapses to
    sqrt(d(lam) d(mu) / (d(theta) d(nu))) delta_{e1 e2} on the diagonal
    summands lam x lam-op; `pairs` lists the factor pair of each summand.
    """
    m1, m2 = D.factors
    dth = theta.d_theta
    zeta = {}
    for n, (nu, _) in enumerate(theta.summands):
        nu1, nu2 = pairs[n]
        for l, (lam, _) in enumerate(theta.summands):
            lam1, lam2 = pairs[l]
            for m, (mu, _) in enumerate(theta.summands):
                mu1, mu2 = pairs[m]
                if D.N[lam, mu, nu] == 0:
                    continue
                val = np.sqrt(m1.qdim[lam1] * m1.qdim[mu1] / (dth * m1.qdim[nu1]))
                n2 = int(m2.N[lam2, mu2, nu2])
                for e1 in range(int(m1.N[lam1, mu1, nu1])):
                    for e2 in range(n2):
                        if e1 == e2:
                            zeta[(n, l, m, e1 * n2 + e2)] = val
    return zeta


def lr_qsystem(model: CategoryModel):
    """Q-system of the diagonal (identity coupling matrix) construction.

    Builds theta =ized sum of lam x lam-op over the Deligne product of the
    category with its antilinear opposite, with the collapsed coefficient
    formula.  Returns (qsystem, product_model).
    """
    D = deligne_product(model, mirror(model))
    mult = {D.pack(lam, lam): 1 for lam in range(model.rank)}
    theta = ThetaSpec(D, mult)
    pairs = [D.unpack(lam) for lam, _ in theta.summands]
    q = assemble_qsystem(theta, lr_zeta(D, theta, pairs))
    return q, D


def check_commutativity(q: QSystem, eps_theta: Morphism) -> float:
    """Residual of eps(theta, theta) w1 = w1 for a given braiding operator."""
    return distance(compose(eps_theta, q.w1), q.w1)
