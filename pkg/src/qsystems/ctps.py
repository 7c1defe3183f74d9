"""Canonical tensor product subfactor construction.

Starting from a pair of extensions of one braided system (the two chiral
inductions alpha^+ / alpha^- of an algebra object, or the trivial pair),
this module computes the coupling matrix, the comultiplication coefficient
tensor, and assembles the Q-system

    theta = sum_(lam1, lam2) Z[lam1, lam2] lam1 (x) lam2-op

over the Deligne product of the category with its antilinear opposite.  The
coefficient of the summand triple (l, m, n) on the tree-basis pair (e1, e2)
is

    sqrt(d(lam2) d(mu2) / (d(theta) d(nu2)))
        * Phi_nu[ lift1(T_e1)* (phi_l* x phi_m*) lift2(T_e2) phi_n ]

with phi_l the orthonormal bases of the induced hom spaces and Phi the
induced (normalized-trace) left inverse.  Everything downstream is checked,
not trusted: the Q-system relations, isometry, chiral locality, the braiding
fix ed-point identity, and the normality predicates on Z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .morphisms import (
    CategoryModel,
    Morphism,
    adjoint,
    braid,
    deligne_product,
    distance,
    hom_basis,
    mirror,
    word_obj,
)
from .qsystem import QReport, QSystem, ThetaSpec, assemble_qsystem, check_commutativity, validate_qsystem
from .induction import (
    AlgebraObject,
    BimodMap,
    bim_compose,
    hom_alpha,
    lift,
    mtimes,
    phi_scalar,
    trivial_algebra,
)

__all__ = [
    "ExtensionPair",
    "alpha_pair",
    "trivial_pair",
    "SummandIndex",
    "ZetaTensor",
    "zeta_coefficient",
    "zeta_tensor",
    "build_theta",
    "assemble_w1",
    "ctps_braiding",
    "check_e3",
    "NormalityResult",
    "check_normality",
    "CtpsResult",
    "build_ctps",
]


@dataclass(frozen=True)
class SummandIndex:
    """Multi-index of a theta summand: factor sectors plus a copy index."""

    lam1: int
    lam2: int
    copy: int


class ExtensionPair:
    """Two extensions of one braided system into the same algebra extension.

    Realized as the (sign1, sign2) pair of chiral inductions of a single
    algebra object; the trivial algebra gives the pair of trivial
    extensions.  Solves and stores the orthonormal hom-space bases phi and
    the coupling matrix Z.
    """

    def __init__(self, algebra: AlgebraObject, sign1: int = +1, sign2: int = -1):
        self.algebra = algebra
        self.model = algebra.model
        self.sign1 = sign1
        self.sign2 = sign2
        n = self.model.rank
        self.phi = {}
        Z = np.zeros((n, n), dtype=int)
        for lam1 in range(n):
            for lam2 in range(n):
                basis = hom_alpha(algebra, lam1, lam2, sign1, sign2).basis
                self.phi[(lam1, lam2)] = basis
                Z[lam1, lam2] = len(basis)
        self.Z = Z
        self.summands = [SummandIndex(l1, l2, copy)
                         for l1 in range(n) for l2 in range(n)
                         for copy in range(1, Z[l1, l2] + 1)]

    def phi_of(self, s: SummandIndex) -> BimodMap:
        return self.phi[(s.lam1, s.lam2)][s.copy - 1]

    def rotate_bases(self, rng) -> None:
        """Apply a random unitary to each hom-space basis (gauge move, for tests).

        The identity space (0, 0) is left untouched: its phase is pinned by
        the unit-law convention of the construction.
        """
        for key, basis in self.phi.items():
            k = len(basis)
            if k == 0 or key == (0, 0):
                continue
            a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            u, _ = np.linalg.qr(a)
            self.phi[key] = [sum((u[i, j] * basis[i] for i in range(k)),
                                 start=0.0 * basis[0]) for j in range(k)]


def alpha_pair(algebra: AlgebraObject, sign1: int = +1, sign2: int = -1) -> ExtensionPair:
    return ExtensionPair(algebra, sign1, sign2)


def trivial_pair(model: CategoryModel) -> ExtensionPair:
    return ExtensionPair(trivial_algebra(model), +1, -1)


@dataclass
class ZetaTensor:
    """Comultiplication coefficients, keyed (n, l, m, e1, e2) over summand indices."""

    entries: dict = field(default_factory=dict)

    def get(self, key, default=0.0):
        return self.entries.get(key, default)


def zeta_coefficient(pair: ExtensionPair, d_theta: float,
                     l: SummandIndex, m: SummandIndex, n: SummandIndex,
                     t_e1: Morphism, t_e2: Morphism) -> complex:
    """One coefficient of the comultiplication, from the trace formula."""
    model = pair.model
    if model.N[l.lam2, m.lam2, n.lam2] == 0 or model.N[l.lam1, m.lam1, n.lam1] == 0:
        return 0.0
    a = pair.algebra
    phi_l = pair.phi_of(l)
    phi_m = pair.phi_of(m)
    phi_n = pair.phi_of(n)
    x = bim_compose(
        lift(a, adjoint(t_e1), pair.sign1),
        bim_compose(mtimes(phi_l.H, phi_m.H),
                    bim_compose(lift(a, t_e2, pair.sign2), phi_n)),
    )
    pref = np.sqrt(model.qdim[l.lam2] * model.qdim[m.lam2]
                   / (d_theta * model.qdim[n.lam2]))
    return complex(pref * phi_scalar(x))


def zeta_tensor(pair: ExtensionPair, d_theta: float) -> ZetaTensor:
    """All fusion-compatible coefficients for the summands of the pair."""
    model = pair.model
    out = ZetaTensor()
    tree_cache = {}

    def trees(nu, lam, mu):
        key = (nu, lam, mu)
        if key not in tree_cache:
            tree_cache[key] = hom_basis(model, nu, word_obj((lam, mu)))
        return tree_cache[key]

    for l, m, n in itertools.product(pair.summands, repeat=3):
        if model.N[l.lam1, m.lam1, n.lam1] == 0 or model.N[l.lam2, m.lam2, n.lam2] == 0:
            continue
        for e1, t1 in enumerate(trees(n.lam1, l.lam1, m.lam1)):
            for e2, t2 in enumerate(trees(n.lam2, l.lam2, m.lam2)):
                val = zeta_coefficient(pair, d_theta, l, m, n, t1, t2)
                if val != 0.0:
                    out.entries[(n, l, m, e1, e2)] = val
    return out


def build_theta(D, Z: np.ndarray) -> ThetaSpec:
    """Theta over the product category with multiplicities Z; requires Z[0,0] = 1."""
    Z = np.asarray(Z)
    if Z[0, 0] != 1:
        raise ValueError("coupling matrix must have Z[0, 0] = 1 (irreducibility)")
    mult = {}
    n1, n2 = Z.shape
    for lam1 in range(n1):
        for lam2 in range(n2):
            if Z[lam1, lam2]:
                mult[D.pack(lam1, lam2)] = int(Z[lam1, lam2])
    return ThetaSpec(D, mult)


def assemble_w1(D, theta: ThetaSpec, zeta: ZetaTensor, pair: ExtensionPair) -> QSystem:
    """QSystem over the product category from factor-indexed coefficients."""
    m2 = D.factors[1]
    packed = {}
    pos = {}
    for i, (lam, copy) in enumerate(theta.summands):
        l1, l2 = D.unpack(lam)
        pos[SummandIndex(l1, l2, copy)] = i
    for (n, l, m, e1, e2), val in zeta.entries.items():
        n2 = int(m2.N[l.lam2, m.lam2, n.lam2])
        packed[(pos[n], pos[l], pos[m], e1 * n2 + e2)] = val
    return assemble_qsystem(theta, packed)


def ctps_braiding(D, theta: ThetaSpec, convention: str = "opposite") -> Morphism:
    """The braiding operator on theta^2 induced by the two factor braidings.

    ``convention="opposite"`` uses the product braiding of the category with
    its antilinear opposite (conjugated second-factor R data, the faithful
    model); ``convention="unconjugated"`` deliberately braids the second
    factor with the unmirrored R symbols, a negative control that must break
    the w1 fixed-point identity.
    """
    if convention == "opposite":
        return braid(D, theta.object, theta.object)
    if convention != "unconjugated":
        raise ValueError("convention must be 'opposite' or 'unconjugated'")
    m1 = D.factors[0]
    m2 = D.factors[1]
    bad_second = CategoryModel(m2.fusion,
                               lambda a, b, c, d: m2.F(a, b, c, d),
                               lambda a, b, c: np.conj(m2.R(a, b, c)),
                               name="unconjugated")
    Dbad = deligne_product(m1, bad_second)
    th_bad = ThetaSpec(Dbad, theta.multiplicities)
    eps = braid(Dbad, th_bad.object, th_bad.object)
    src = eps.source
    tgt = eps.target
    from .morphisms import SumObject

    return Morphism(D, SumObject(src.words, src.tags), SumObject(tgt.words, tgt.tags), eps.blocks)


def check_e3(pair: ExtensionPair) -> float:
    """Max residual of the braided-transition identity over all basis pairs.

    (psi x phi) lift1(eps(lam1, mu1)) = lift2(eps(lam2, mu2)) (phi x psi)
    for phi in Hom(alpha1_lam1, alpha2_lam2), psi in Hom(alpha1_mu1, alpha2_mu2).
    """
    model = pair.model
    a = pair.algebra
    worst = 0.0
    keys = [k for k, b in pair.phi.items() if b]
    for (lam1, lam2) in keys:
        for (mu1, mu2) in keys:
            eps1 = lift(a, braid(model, word_obj((lam1,)), word_obj((mu1,))), pair.sign1)
            eps2 = lift(a, braid(model, word_obj((lam2,)), word_obj((mu2,))), pair.sign2)
            for phi in pair.phi[(lam1, lam2)]:
                for psi in pair.phi[(mu1, mu2)]:
                    lhs = bim_compose(mtimes(psi, phi), eps1)
                    rhs = bim_compose(eps2, mtimes(phi, psi))
                    worst = max(worst, distance(lhs.mor, rhs.mor))
    return worst


@dataclass
class NormalityResult:
    """The coupling-matrix normality predicates and the witnessing bijection."""

    n2: bool
    n3: bool
    pi: list | None

    def as_dict(self):
        return {"n2": self.n2, "n3": self.n3, "pi": self.pi}


def check_normality(Z: np.ndarray, fus1, fus2) -> NormalityResult:
    """Evaluate the two combinatorial normality criteria on a coupling matrix.

    n2: no nontrivial sector couples to the trivial one on either side.
    n3: Z is the permutation matrix of a fusion-rule-preserving bijection.
    """
    Z = np.asarray(Z)
    n2 = bool(np.array_equal(Z[:, 0], np.eye(Z.shape[0], dtype=int)[0])
              and np.array_equal(Z[0, :], np.eye(Z.shape[1], dtype=int)[0]))
    pi = None
    n3 = False
    if Z.shape[0] == Z.shape[1] and np.array_equal(Z @ Z.T, np.eye(Z.shape[0], dtype=Z.dtype)):
        cand = [int(np.argmax(Z[i])) for i in range(Z.shape[0])]
        # permutation found; it must preserve dimensions and the fusion tensor
        ok = np.allclose(fus1.qdim, fus2.qdim[cand], atol=1e-9)
        if ok:
            n = Z.shape[0]
            ok = all(
                fus1.N[a, b, c] == fus2.N[cand[a], cand[b], cand[c]]
                for a in range(n) for b in range(n) for c in range(n)
            )
        if ok:
            n3 = True
            pi = cand
    return NormalityResult(n2=n2, n3=n3, pi=pi)


@dataclass
class CtpsResult:
    """Everything the construction produced, plus its validation residuals."""

    pair: ExtensionPair
    product_model: object
    Z: np.ndarray
    theta: ThetaSpec
    qsystem: QSystem
    zeta: ZetaTensor
    report: QReport
    e3_residual: float
    commutativity: float | None
    normality: NormalityResult
    dim_identity_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        checks = [self.report.ok, self.e3_residual < self.tol * 10,
                  self.dim_identity_residual < self.tol]
        if self.commutativity is not None:
            checks.append(self.commutativity < self.tol * 10)
        return all(checks)

    def residuals(self) -> dict:
        out = dict(self.report.residuals)
        out["chiral_locality"] = self.e3_residual
        out["commutativity"] = self.commutativity
        out["dim_identity"] = self.dim_identity_residual
        return out


def build_ctps(pair: ExtensionPair, tol: float = 1e-8, skip_e3: bool = False) -> CtpsResult:
    """Full pipeline: hom spaces -> Z -> coefficients -> (theta, w, w1) -> checks."""
    model = pair.model
    D = deligne_product(model, mirror(model))
    Z = pair.Z
    theta = build_theta(D, Z)
    zeta = zeta_tensor(pair, theta.d_theta)
    q = assemble_w1(D, theta, zeta, pair)
    report = validate_qsystem(q, tol=tol)
    dims = np.array([model.qdim[l1] * model.qdim[l2]
                     for l1 in range(model.rank) for l2 in range(model.rank)])
    dim_resid = abs(float((Z.reshape(-1) * dims).sum()) - theta.d_theta)
    e3 = 0.0 if skip_e3 else check_e3(pair)
    comm = None
    if model.braided:
        if e3 < tol * 10:
            eps = ctps_braiding(D, theta)
            comm = check_commutativity(q, eps)
    norm = check_normality(Z, model.fusion, model.fusion)
    return CtpsResult(pair=pair, product_model=D, Z=Z, theta=theta, qsystem=q,
                      zeta=zeta, report=report, e3_residual=e3, commutativity=comm,
                      normality=norm, dim_identity_residual=dim_resid, tol=tol)
