"""Algebra objects and alpha-induction over a braided category model.

An algebra object Theta (a Q-system in Frobenius normalization: unit
isometry u, multiplication m with m m* = d(Theta) and m(u x 1) = 1) induces,
for every sector lam and sign, a Theta-Theta bimodule on the object
Theta x lam: the left action is multiplication, the right action threads
Theta past lam through the braiding (over- or under-crossing according to
the sign).  Morphism spaces between induced bimodules are solved as null
spaces of the module-intertwining constraints inside the plain category;
their dimensions assemble into the coupling matrix

    Z[lam, mu] = dim Hom(alpha^+_lam, alpha^-_mu).

Products of bimodule maps are relative tensor products over Theta, evaluated
through the canonical multiplication / splitting pair, so the whole operator
calculus of the extension happens at the level of category morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .morphisms import (
    CategoryModel,
    Morphism,
    SumObject,
    UnsupportedOperationError,
    adjoint,
    braid,
    categorical_trace,
    compose,
    conjugate_pair,
    distance,
    identity_morphism,
    lmul,
    mono_product,
    rmul,
    unit_intro,
    word_obj,
)
from .qsystem import QReport, QSystem, ThetaSpec, validate_qsystem

__all__ = [
    "AlgebraObject",
    "trivial_algebra",
    "algebra_from_qsystem",
    "to_qsystem",
    "verify_algebra",
    "solve_haploid_algebra",
    "Bimod",
    "BimodMap",
    "bim_object",
    "left_action",
    "right_action",
    "lift",
    "mtimes",
    "module_residual",
    "trace_ip",
    "phi_scalar",
    "induced_left_inverse_scalar",
    "bimodule_hom",
    "InducedBimodule",
    "alpha_object",
    "InducedMorphismSpace",
    "hom_alpha",
    "coupling_matrix",
]


@dataclass
class AlgebraObject:
    """Haploid Frobenius algebra: object with unit and multiplication.

    ``unit`` is an isometry in Hom(id, Theta) and ``mult`` in Hom(Theta^2,
    Theta) is normalized so that mult (unit x 1) = 1 and mult mult* =
    d(Theta); equivalently mult = sqrt(d) w1* for the Q-system isometry w1.
    """

    theta: ThetaSpec
    unit: Morphism
    mult: Morphism

    @property
    def model(self) -> CategoryModel:
        return self.theta.model

    @property
    def object(self) -> SumObject:
        return self.theta.object

    @property
    def d(self) -> float:
        return self.theta.d_theta


def trivial_algebra(model: CategoryModel) -> AlgebraObject:
    theta = ThetaSpec(model, {0: 1})
    unit = unit_intro(model, theta.object)
    mult = adjoint(compose(lmul(theta.object, unit),
                           identity_morphism(model, theta.object)))
    return AlgebraObject(theta=theta, unit=unit, mult=mult)


def algebra_from_qsystem(q: QSystem) -> AlgebraObject:
    scale = np.sqrt(q.theta.d_theta)
    return AlgebraObject(theta=q.theta, unit=q.w, mult=scale * adjoint(q.w1))


def to_qsystem(a: AlgebraObject) -> QSystem:
    scale = 1.0 / np.sqrt(a.d)
    return QSystem(theta=a.theta, w=a.unit, w1=scale * adjoint(a.mult))


def verify_algebra(a: AlgebraObject, tol: float = 1e-8) -> QReport:
    """Unit / associativity / Frobenius checks via the Q-system relations."""
    return validate_qsystem(to_qsystem(a), tol=tol)


def solve_haploid_algebra(model: CategoryModel, multiplicities: dict,
                          rng=None, attempts: int = 20) -> AlgebraObject:
    """Solve multiplication coefficients making Theta a Q-system.

    Newton iteration on the residuals of the Q-system relations over the
    coefficient space of Hom(Theta^2, Theta), with the unit channels pinned
    by the unit law.  Intended for small algebras (simple-current and
    two-summand cases); raises if no solution is found.
    """
    rng = rng or np.random.default_rng(0)
    theta = ThetaSpec(model, multiplicities)
    if model.obj_dim(0, theta.object) != 1:
        raise ValueError("algebra must be haploid (identity multiplicity 1)")
    th = theta.object
    th2 = SumObject(tuple(a + b for a in th.words for b in th.words),
                    tuple((s, t) for s in th.tags for t in th.tags))
    ns = len(theta)

    # free coefficients: channels (l, m) -> n with multiplicity, unit channels fixed
    slots = []
    for l, (lam, _) in enumerate(theta.summands):
        for m, (mu, _) in enumerate(theta.summands):
            for n, (nu, _) in enumerate(theta.summands):
                for e in range(int(model.N[lam, mu, nu])):
                    fixed = 1.0 if (lam == 0 or mu == 0) else None
                    slots.append((l, m, n, e, fixed))

    def build(x):
        coeffs = {}
        i = 0
        for (l, m, n, e, fixed) in slots:
            if fixed is not None:
                coeffs[(n, l, m, e)] = fixed
            else:
                coeffs[(n, l, m, e)] = x[2 * i] + 1j * x[2 * i + 1]
                i += 1
        # mult blocks: adjoint of the coefficient placement
        blocks = {}
        for c in range(model.rank):
            rows = model.obj_offsets(c, th)
            cols = model.obj_offsets(c, th2)
            M = np.zeros((rows[-1], cols[-1]), dtype=complex)
            for (n, l, m, e), v in coeffs.items():
                nu = theta.summands[n][0]
                if c != nu or v == 0:
                    continue
                M[rows[n], cols[l * ns + m] + e] = v
            blocks[c] = M
        return AlgebraObject(theta=theta, unit=unit_intro(model, th), mult=Morphism(model, th2, th, blocks))

    nfree = sum(1 for s in slots if s[4] is None)

    def residual(x):
        a = build(x)
        q = to_qsystem(a)
        rep = validate_qsystem(q, tol=1.0)
        out = []
        id_th = identity_morphism(model, th)
        c0 = q.theta.d_theta ** -0.5
        pieces = [
            compose(rmul(adjoint(q.w), th), q.w1) - c0 * id_th,
            compose(rmul(q.w1, th), q.w1) - compose(lmul(th, q.w1), q.w1),
            compose(adjoint(q.w1), q.w1) - id_th,
        ]
        for p in pieces:
            for B in p.blocks.values():
                out.extend(B.ravel().real)
                out.extend(B.ravel().imag)
        return np.array(out)

    for attempt in range(attempts):
        x = rng.standard_normal(2 * nfree)
        for _ in range(60):
            r0 = residual(x)
            if np.max(np.abs(r0)) < 1e-12:
                break
            J = np.zeros((len(r0), len(x)))
            h = 1e-7
            for j in range(len(x)):
                xp = x.copy()
                xp[j] += h
                J[:, j] = (residual(xp) - r0) / h
            step, *_ = np.linalg.lstsq(J, -r0, rcond=None)
            if not np.all(np.isfinite(step)):
                break
            x = x + step
        else:
            continue
        if np.max(np.abs(residual(x))) < 1e-12:
            a = build(x)
            if verify_algebra(a, tol=1e-9).ok:
                return a
    raise ValueError("no Q-system structure found for the given multiplicities")


# ---------------------------------------------------------------------------
# induced bimodules


@dataclass(frozen=True)
class Bimod:
    """Signed word: the induced bimodule on Theta x word, one sign per letter."""

    word: tuple
    signs: tuple

    def __post_init__(self):
        if len(self.word) != len(self.signs):
            raise ValueError("one sign per letter")
        if any(s not in (+1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")


@dataclass
class BimodMap:
    """Morphism of induced bimodules, carried by a category morphism."""

    algebra: AlgebraObject
    src: Bimod
    tgt: Bimod
    mor: Morphism

    def __add__(self, other):
        return BimodMap(self.algebra, self.src, self.tgt, self.mor + other.mor)

    def __sub__(self, other):
        return BimodMap(self.algebra, self.src, self.tgt, self.mor - other.mor)

    def __mul__(self, z):
        return BimodMap(self.algebra, self.src, self.tgt, z * self.mor)

    __rmul__ = __mul__

    @property
    def H(self):
        return BimodMap(self.algebra, self.tgt, self.src, adjoint(self.mor))


def bim_object(a: AlgebraObject, b: Bimod) -> SumObject:
    from .morphisms import sum_product

    return sum_product(a.object, word_obj(b.word))


def bim_compose(f: BimodMap, g: BimodMap) -> BimodMap:
    if f.src != g.tgt:
        raise ValueError(f"bimodule maps do not compose: {g.tgt} != {f.src}")
    return BimodMap(f.algebra, g.src, f.tgt, compose(f.mor, g.mor))


def bim_identity(a: AlgebraObject, b: Bimod) -> BimodMap:
    return BimodMap(a, b, b, identity_morphism(a.model, bim_object(a, b)))


def _eps_signed(a: AlgebraObject, b: Bimod) -> Morphism:
    """Crossing of Theta left past the signed word: Hom(word Theta, Theta word)."""
    model = a.model
    if not b.word:
        return identity_morphism(model, a.object)
    x, s = b.word[0], b.signs[0]
    rest = Bimod(b.word[1:], b.signs[1:])
    if s == +1:
        head = braid(model, word_obj((x,)), a.object)
    else:
        head = adjoint(braid(model, a.object, word_obj((x,))))
    step = rmul(head, word_obj(rest.word))
    return compose(step, lmul(word_obj((x,)), _eps_signed(a, rest)))


def left_action(a: AlgebraObject, b: Bimod) -> Morphism:
    """Hom(Theta Theta word, Theta word): multiply on the left factor."""
    return rmul(a.mult, word_obj(b.word))


def right_action(a: AlgebraObject, b: Bimod) -> Morphism:
    """Hom(Theta word Theta, Theta word): braid Theta past the word, then multiply."""
    if b.word and not a.model.braided:
        raise UnsupportedOperationError("induced right action needs a braiding")
    move = lmul(a.object, _eps_signed(a, b))
    return compose(rmul(a.mult, word_obj(b.word)), move)


def lift(a: AlgebraObject, n: Morphism, sign: int) -> BimodMap:
    """Extension homomorphism applied to a category intertwiner: 1_Theta x n.

    Maps Hom(word, word') into the bimodule maps of the sign-induced
    modules; this is the monoidal-functor image of the plain intertwiner.
    """
    srcw = n.source.words[0]
    tgtw = n.target.words[0]
    if len(n.source.words) != 1 or len(n.target.words) != 1:
        raise ValueError("lift expects word-to-word intertwiners")
    return BimodMap(
        a,
        Bimod(srcw, (sign,) * len(srcw)),
        Bimod(tgtw, (sign,) * len(tgtw)),
        lmul(a.object, n),
    )


def _mult_map(a: AlgebraObject, x: Bimod, y: Bimod) -> Morphism:
    """Hom(Theta x Theta y, Theta x y): multiply through the signed crossing."""
    model = a.model
    wx, wy = word_obj(x.word), word_obj(y.word)
    move = lmul(a.object, rmul(_eps_signed(a, x), wy))
    return compose(rmul(a.mult, word_obj(x.word + y.word)), move)


def _split_map(a: AlgebraObject, x: Bimod, y: Bimod) -> Morphism:
    """Right inverse of :func:`_mult_map`: comultiply and cross back."""
    model = a.model
    wy = word_obj(y.word)
    out = rmul(adjoint(a.mult), word_obj(x.word + y.word))
    back = lmul(a.object, rmul(adjoint(_eps_signed(a, x)), wy))
    return (1.0 / a.d) * compose(back, out)


def mtimes(f: BimodMap, g: BimodMap) -> BimodMap:
    """Monoidal product of bimodule maps (relative tensor product over Theta)."""
    a = f.algebra
    src = Bimod(f.src.word + g.src.word, f.src.signs + g.src.signs)
    tgt = Bimod(f.tgt.word + g.tgt.word, f.tgt.signs + g.tgt.signs)
    mid = mono_product(f.mor, g.mor)
    mor = compose(_mult_map(a, f.tgt, g.tgt), compose(mid, _split_map(a, f.src, g.src)))
    return BimodMap(a, src, tgt, mor)


def module_residual(f: BimodMap) -> float:
    """Violation of the left and right module-intertwining constraints."""
    a = f.algebra
    lhs_l = compose(f.mor, left_action(a, f.src))
    rhs_l = compose(left_action(a, f.tgt), lmul(a.object, f.mor))
    lhs_r = compose(f.mor, right_action(a, f.src))
    rhs_r = compose(right_action(a, f.tgt), rmul(f.mor, a.object))
    return max(distance(lhs_l, rhs_l), distance(lhs_r, rhs_r))


def trace_ip(f: BimodMap, g: BimodMap) -> complex:
    """(f, g) = Tr(f* g) / (d(Theta) d(word)): the induced left-inverse pairing."""
    a = f.algebra
    val = categorical_trace(compose(adjoint(f.mor), g.mor))
    return complex(val / (a.d * a.model.word_dim(f.src.word)))


def phi_scalar(f: BimodMap) -> complex:
    """Induced standard left inverse on endomorphisms: normalized trace."""
    a = f.algebra
    return complex(categorical_trace(f.mor) / (a.d * a.model.word_dim(f.src.word)))


def induced_left_inverse_scalar(x: BimodMap) -> complex:
    """Left inverse of an induced endomorphism via the lifted duality isometry.

    Evaluates iota(R)* (1_conj x X) iota(R) and extracts the scalar; by the
    uniqueness of standard inverses this must equal :func:`phi_scalar`.
    """
    a = x.algebra
    model = a.model
    if len(x.src.word) != 1 or x.src != x.tgt:
        raise ValueError("expected an endomorphism of a single induced sector")
    lam = x.src.word[0]
    sign = x.src.signs[0]
    pair = conjugate_pair(model, lam)
    r_lift = lift(a, pair.r, sign)
    lamd_id = bim_identity(a, Bimod((int(model.dual[lam]),), (sign,)))
    inner = mtimes(lamd_id, x)
    total = bim_compose(r_lift.H, bim_compose(inner, r_lift))
    return complex(categorical_trace(total.mor) / a.d)


# ---------------------------------------------------------------------------
# hom-space solver


def _vec_coords(model, src_obj, tgt_obj):
    coords = []
    for c in range(model.rank):
        dt, ds = model.obj_dim(c, tgt_obj), model.obj_dim(c, src_obj)
        for i in range(dt):
            for j in range(ds):
                coords.append((c, i, j))
    return coords


def _from_vec(model, src_obj, tgt_obj, coords, v) -> Morphism:
    blocks = {c: np.zeros((model.obj_dim(c, tgt_obj), model.obj_dim(c, src_obj)), dtype=complex)
              for c in range(model.rank)}
    for (c, i, j), val in zip(coords, v):
        blocks[c][i, j] = val
    return Morphism(model, src_obj, tgt_obj, blocks)


def _to_vec(coords, f: Morphism):
    return np.array([f.blocks[c][i, j] for (c, i, j) in coords])


def bimodule_hom(a: AlgebraObject, src: Bimod, tgt: Bimod, cutoff: float = 1e-8):
    """Orthonormal basis of the bimodule maps src -> tgt.

    Solves the left/right intertwining constraints as a null-space problem
    (SVD with relative rank cutoff), then orthonormalizes in the induced
    scalar product and fixes phases so the first nonvanishing coefficient is
    positive real.
    """
    model = a.model
    so, to = bim_object(a, src), bim_object(a, tgt)
    coords = _vec_coords(model, so, to)
    nv = len(coords)
    if nv == 0:
        return []
    al_s, al_t = left_action(a, src), left_action(a, tgt)
    ar_s, ar_t = right_action(a, src), right_action(a, tgt)
    rows = []
    for k in range(nv):
        v = np.zeros(nv)
        v[k] = 1.0
        f = _from_vec(model, so, to, coords, v)
        lres = compose(f, al_s) - compose(al_t, lmul(a.object, f))
        rres = compose(f, ar_s) - compose(ar_t, rmul(f, a.object))
        col = np.concatenate([np.concatenate([B.ravel() for B in m.blocks.values()])
                              if any(B.size for B in m.blocks.values()) else np.zeros(0)
                              for m in (lres, rres)])
        rows.append(col)
    A = np.array(rows).T
    if A.shape[0] == 0:
        null = np.eye(nv)
    else:
        u, s, vh = np.linalg.svd(A)
        smax = s[0] if len(s) else 0.0
        rank = int(np.sum(s > cutoff * max(smax, 1.0)))
        null = vh[rank:].conj().T
    if null.shape[1] == 0:
        return []
    cands = [_from_vec(model, so, to, coords, null[:, k]) for k in range(null.shape[1])]
    maps = [BimodMap(a, src, tgt, f) for f in cands]
    # Gram-Schmidt in the induced scalar product
    ortho = []
    for f in maps:
        for g in ortho:
            f = f - trace_ip(g, f) * g
        nrm = np.sqrt(trace_ip(f, f).real)
        if nrm < 1e-10:
            continue
        f = (1.0 / nrm) * f
        vec = _to_vec(coords, f.mor)
        piv = np.flatnonzero(np.abs(vec) > 1e-9)
        if len(piv):
            ph = vec[piv[0]] / abs(vec[piv[0]])
            f = np.conj(ph) * f
        ortho.append(f)
    return ortho


@dataclass
class InducedBimodule:
    """Descriptor of alpha^sign_lam: underlying object, actions, dimension."""

    lam: int
    sign: int
    object: SumObject
    left: Morphism
    right: Morphism
    dimension: float


def alpha_object(a: AlgebraObject, lam: int, sign: int) -> InducedBimodule:
    b = Bimod((int(lam),), (sign,))
    obj = bim_object(a, b)
    dim = categorical_trace(identity_morphism(a.model, obj)).real / a.d
    return InducedBimodule(lam=int(lam), sign=sign, object=obj,
                           left=left_action(a, b), right=right_action(a, b),
                           dimension=float(dim))


@dataclass
class InducedMorphismSpace:
    """Solved Hom(alpha^{s1}_lam, alpha^{s2}_mu) with an orthonormal basis."""

    lam: int
    mu: int
    sign1: int
    sign2: int
    basis: list
    gram: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)


def hom_alpha(a: AlgebraObject, lam: int, mu: int, sign1: int = +1, sign2: int = -1) -> InducedMorphismSpace:
    basis = bimodule_hom(a, Bimod((int(lam),), (sign1,)), Bimod((int(mu),), (sign2,)))
    gram = np.array([[trace_ip(f, g) for g in basis] for f in basis]) if basis else np.zeros((0, 0))
    return InducedMorphismSpace(lam=int(lam), mu=int(mu), sign1=sign1, sign2=sign2,
                                basis=basis, gram=gram)


def coupling_matrix(a: AlgebraObject, sign1: int = +1, sign2: int = -1) -> np.ndarray:
    """Z[lam, mu] = dim Hom(alpha^{sign1}_lam, alpha^{sign2}_mu), integer matrix."""
    n = a.model.rank
    Z = np.zeros((n, n), dtype=int)
    for lam in range(n):
        for mu in range(n):
            Z[lam, mu] = hom_alpha(a, lam, mu, sign1, sign2).dim
    return Z
