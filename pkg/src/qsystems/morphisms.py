"""Block-sparse intertwiner calculus over fusion-tree bases.

Objects are formal direct sums of tensor words in the simple sectors of a
skeletal category with unitary recoupling (F) and optionally braiding (R)
data.  A morphism X -> Y is stored sector-blockwise: for every simple c a
complex matrix from the canonical fusion-tree basis of Hom(c, X) to the one
of Hom(c, Y).  Tree bases are left parenthesized: a basis vector of
Hom(c, (x1, ..., xk)) is a fusion path ((a1, e1), ..., (ak, ek)) with
a1 = x1, ak = c and e_i a multiplicity index of Hom(a_i, a_{i-1} x_i);
paths are enumerated lexicographically.

All structural data enters through two unitary tensors:

* ``F(a, b, c; d)`` relates the two parenthesizations of Hom(d, abc).
  Columns are indexed by right trees (tau, g, h), rows by left trees
  (sig, e, f)::

      (1_a x T^{bc->tau}_g) T^{a tau->d}_h
          = sum_{sig,e,f} F[(sig,e,f),(tau,g,h)] (T^{ab->sig}_e x 1_c) T^{sig c->d}_f

* ``R(a, b; c)`` braids elementary pairs::

      eps(a, b) T^{ab->c}_e = sum_f R[f, e] T^{ba->c}_f

The gauge must be unital: F is the identity whenever one of a, b, c is the
identity sector (the model enforces this), and duality morphisms are derived
from F, so no separate cup/cap data is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fusion import FusionData, StructureError, validate_fusion

__all__ = [
    "Word",
    "SumObject",
    "word_obj",
    "unit_obj",
    "sum_product",
    "CategoryModel",
    "Morphism",
    "ObjectMismatchError",
    "UnsupportedOperationError",
    "identity_morphism",
    "zero_morphism",
    "injection",
    "basis_vector",
    "unit_intro",
    "hom_basis",
    "compose",
    "adjoint",
    "rmul",
    "lmul",
    "mono_product",
    "ConjugatePair",
    "conjugate_pair",
    "word_dual",
    "word_conjugate_pair",
    "left_inverse",
    "right_inverse",
    "braid",
    "categorical_trace",
    "twist",
    "op_norm",
    "distance",
    "random_morphism",
    "pentagon_residual",
    "hexagon_residual",
    "f_unitarity_residual",
    "r_unitarity_residual",
    "conjugate_residual",
    "CategoryReport",
    "validate_category",
    "mirror",
    "deligne_product",
]

Word = tuple  # tuple[int, ...]


class ObjectMismatchError(ValueError):
    """Morphisms composed or compared across different objects."""


class UnsupportedOperationError(RuntimeError):
    """Operation requires structure the model does not carry (e.g. braiding)."""


@dataclass(frozen=True)
class SumObject:
    """Formal finite direct sum of tensor words, with unique summand tags."""

    words: tuple
    tags: tuple

    def __post_init__(self):
        if len(self.words) != len(self.tags):
            raise StructureError("one tag per summand required")
        if len(set(self.tags)) != len(self.tags):
            raise StructureError("summand tags must be unique")

    def __len__(self):
        return len(self.words)

    def __repr__(self):
        return f"SumObject({list(self.words)})"


def word_obj(word, tag=None) -> SumObject:
    w = tuple(int(x) for x in word)
    return SumObject((w,), (tag if tag is not None else 0,))


def unit_obj() -> SumObject:
    return word_obj(())


def as_obj(x) -> SumObject:
    if isinstance(x, SumObject):
        return x
    return word_obj(tuple(x))


def sum_product(a: SumObject, b: SumObject) -> SumObject:
    words = tuple(wa + wb for wa in a.words for wb in b.words)
    tags = tuple((ta, tb) for ta in a.tags for tb in b.tags)
    return SumObject(words, tags)


def same_object(a: SumObject, b: SumObject) -> bool:
    return a.words == b.words


class CategoryModel:
    """Skeletal unitary fusion category with F (and optionally R) data.

    ``f_provider(a, b, c, d)`` must return the unitary recoupling matrix in
    the index convention of :func:`CategoryModel.f_left` /
    :func:`CategoryModel.f_right`; it is never called when one of a, b, c is
    the identity label (unital gauge is assumed there).  ``r_provider`` is
    optional; without it the category is unbraided and braiding operations
    raise :class:`UnsupportedOperationError`.

    The model memoizes tree bases and recoupling data per instance; all
    operations on it are pure, so instances can be shared across workers.
    """

    def __init__(self, fusion: FusionData, f_provider, r_provider=None, name: str = ""):
        self.fusion = fusion
        self.name = name or fusion.names[0]
        self._f_provider = f_provider
        self._r_provider = r_provider
        self._f_cache = {}
        self._r_cache = {}
        self._left_idx = {}
        self._right_idx = {}
        self._tails = {}
        self._insert = {}
        self._conj = {}
        self._offsets = {}

    # -- basic data --------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.fusion.rank

    @property
    def N(self) -> np.ndarray:
        return self.fusion.N

    @property
    def dual(self) -> np.ndarray:
        return self.fusion.dual

    @property
    def qdim(self) -> np.ndarray:
        return self.fusion.qdim

    @property
    def braided(self) -> bool:
        return self._r_provider is not None

    def word_dim(self, word) -> float:
        d = 1.0
        for x in word:
            d *= self.qdim[x]
        return d

    def obj_qdim(self, obj: SumObject) -> float:
        return float(sum(self.word_dim(w) for w in obj.words))

    # -- recoupling data ---------------------------------------------------

    def f_left(self, a, b, c, d):
        """Left-tree index list [(sig, e, f)] of Hom(d, abc)."""
        key = (a, b, c, d)
        out = self._left_idx.get(key)
        if out is None:
            N = self.N
            out = [
                (sig, e, f)
                for sig in range(self.rank)
                for e in range(N[a, b, sig])
                for f in range(N[sig, c, d])
            ]
            self._left_idx[key] = out
        return out

    def f_right(self, a, b, c, d):
        """Right-tree index list [(tau, g, h)] of Hom(d, abc)."""
        key = (a, b, c, d)
        out = self._right_idx.get(key)
        if out is None:
            N = self.N
            out = [
                (tau, g, h)
                for tau in range(self.rank)
                for g in range(N[b, c, tau])
                for h in range(N[a, tau, d])
            ]
            self._right_idx[key] = out
        return out

    def F(self, a, b, c, d) -> np.ndarray:
        key = (a, b, c, d)
        out = self._f_cache.get(key)
        if out is not None:
            return out
        nl = len(self.f_left(a, b, c, d))
        nr = len(self.f_right(a, b, c, d))
        if nl != nr:
            raise StructureError(f"fusion data not associative at {key}: {nl} != {nr}")
        if nl == 0:
            out = np.zeros((0, 0), dtype=complex)
        elif a == 0 or b == 0 or c == 0:
            out = np.eye(nl, dtype=complex)
        else:
            out = np.asarray(self._f_provider(a, b, c, d), dtype=complex)
            if out.shape != (nl, nr):
                raise StructureError(f"F{key} has shape {out.shape}, expected {(nl, nr)}")
        self._f_cache[key] = out
        return out

    def R(self, a, b, c) -> np.ndarray:
        if not self.braided:
            raise UnsupportedOperationError("category carries no braiding")
        key = (a, b, c)
        out = self._r_cache.get(key)
        if out is not None:
            return out
        rows, cols = int(self.N[b, a, c]), int(self.N[a, b, c])
        if rows == 0 or cols == 0:
            out = np.zeros((rows, cols), dtype=complex)
        elif a == 0 or b == 0:
            out = np.eye(rows, dtype=complex)
        else:
            out = np.asarray(self._r_provider(a, b, c), dtype=complex)
            if out.shape != (rows, cols):
                raise StructureError(f"R{key} has shape {out.shape}, expected {(rows, cols)}")
        self._r_cache[key] = out
        return out

    # -- tree bases --------------------------------------------------------

    def tails(self, b, word, c):
        """Fusion paths from charge b through `word` to total charge c."""
        key = (b, word, c)
        out = self._tails.get(key)
        if out is not None:
            return out
        if not word:
            out = ((),) if b == c else ()
        else:
            x, rest = word[0], word[1:]
            acc = []
            for a in range(self.rank):
                n = self.N[b, x, a]
                for e in range(n):
                    for t in self.tails(a, rest, c):
                        acc.append(((a, e),) + t)
            out = tuple(acc)
        self._tails[key] = out
        return out

    def paths(self, c, word):
        return self.tails(0, word, c)

    def dim_word(self, c, word) -> int:
        return len(self.tails(0, word, c))

    def obj_dim(self, c, obj: SumObject) -> int:
        return self.obj_offsets(c, obj)[-1]

    def obj_offsets(self, c, obj: SumObject):
        """Cumulative basis offsets of the summands of `obj` in sector c."""
        key = (c, obj.words)
        out = self._offsets.get(key)
        if out is None:
            offs = [0]
            for w in obj.words:
                offs.append(offs[-1] + self.dim_word(c, w))
            out = tuple(offs)
            self._offsets[key] = out
        return out

    # -- left-insertion recoupling -----------------------------------------

    def detached_index(self, a, word, c):
        """Index list [(b, i, g)] of the detached basis (1_a x t^word_{b,i}) T^{ab->c}_g."""
        out = []
        for b in range(self.rank):
            np_b = len(self.paths(b, word))
            ng = self.N[a, b, c]
            for i in range(np_b):
                for g in range(ng):
                    out.append((b, i, g))
        return out

    def lam_insert(self, a, word):
        """Unitaries expanding the detached basis in the left-tree basis.

        Returns a dict ``c -> matrix`` whose columns are the coordinates of
        ``(1_a x t^word_{b,i}) T^{ab->c}_g`` (column order ``(b, i, g)`` with b
        ascending) in the tail basis ``tails(a, word, c)``.
        """
        key = (a, word)
        out = self._insert.get(key)
        if out is not None:
            return out
        out = {}
        if len(word) == 0:
            for c in range(self.rank):
                out[c] = np.eye(1, dtype=complex) if c == a else np.zeros((0, 0), dtype=complex)
        elif len(word) == 1:
            x = word[0]
            for c in range(self.rank):
                n = self.N[a, x, c]
                out[c] = np.eye(n, dtype=complex)
        else:
            v, x = word[:-1], word[-1]
            lam_v = self.lam_insert(a, v)
            for c in range(self.rank):
                rows = self.tails(a, word, c)
                row_pos = {p: i for i, p in enumerate(rows)}
                cols = self.detached_index(a, word, c)
                M = np.zeros((len(rows), len(cols)), dtype=complex)
                for col, (b, i, g) in enumerate(cols):
                    pw = self.paths(b, word)[i]
                    pv, (b_end, e) = pw[:-1], pw[-1]
                    bp = pv[-1][0] if pv else 0
                    iv = self.paths(bp, v).index(pv)
                    Fm = self.F(a, bp, x, c)
                    rci = self.f_right(a, bp, x, c).index((b, e, g))
                    for (sig, f1, f2), fval in zip(self.f_left(a, bp, x, c), Fm[:, rci]):
                        if fval == 0:
                            continue
                        lam_s = lam_v[sig]
                        if lam_s.shape[0] == 0:
                            continue
                        col_v = self.detached_index(a, v, sig).index((bp, iv, f1))
                        vec = lam_s[:, col_v]
                        for qi, val in enumerate(vec):
                            if val != 0:
                                q = self.tails(a, v, sig)[qi]
                                M[row_pos[q + ((c, f2),)], col] += fval * val
                out[c] = M
        self._insert[key] = out
        return out

    def __repr__(self):
        return f"CategoryModel({self.name!r}, rank={self.rank}, braided={self.braided})"


# ---------------------------------------------------------------------------
# morphisms


class Morphism:
    """Sector-blockwise linear map between fusion-tree bases of hom spaces."""

    __slots__ = ("model", "source", "target", "blocks")

    def __init__(self, model: CategoryModel, source: SumObject, target: SumObject, blocks: dict):
        self.model = model
        self.source = source
        self.target = target
        self.blocks = {}
        for c in range(model.rank):
            dt, ds = model.obj_dim(c, target), model.obj_dim(c, source)
            B = blocks.get(c)
            if B is None:
                B = np.zeros((dt, ds), dtype=complex)
            else:
                B = np.asarray(B, dtype=complex)
                if B.shape != (dt, ds):
                    raise StructureError(f"block {c} has shape {B.shape}, expected {(dt, ds)}")
            self.blocks[c] = B

    def block(self, c) -> np.ndarray:
        return self.blocks[c]

    # -- algebra ------------------------------------------------------------

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        if not (same_object(self.source, other.source) and same_object(self.target, other.target)):
            raise ObjectMismatchError("sum of morphisms between different objects")
        return Morphism(self.model, self.source, self.target,
                        {c: self.blocks[c] + other.blocks[c] for c in self.blocks})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-1.0) * other

    def __mul__(self, z) -> "Morphism":
        return Morphism(self.model, self.source, self.target,
                        {c: z * B for c, B in self.blocks.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    @property
    def H(self) -> "Morphism":
        return adjoint(self)

    def norm(self) -> float:
        return op_norm(self)

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


def compose(f: Morphism, g: Morphism) -> Morphism:
    """f after g (blockwise matrix product)."""
    if f.model is not g.model and f.model.fusion is not g.model.fusion:
        raise ObjectMismatchError("morphisms live over different models")
    if not same_object(g.target, f.source):
        raise ObjectMismatchError(f"cannot compose: {g.target!r} != {f.source!r}")
    return Morphism(f.model, g.source, f.target,
                    {c: f.blocks[c] @ g.blocks[c] for c in f.blocks})


def adjoint(f: Morphism) -> Morphism:
    return Morphism(f.model, f.target, f.source, {c: B.conj().T for c, B in f.blocks.items()})


def identity_morphism(model: CategoryModel, obj) -> Morphism:
    obj = as_obj(obj)
    return Morphism(model, obj, obj, {c: np.eye(model.obj_dim(c, obj), dtype=complex)
                                      for c in range(model.rank)})


def zero_morphism(model: CategoryModel, source, target) -> Morphism:
    return Morphism(model, as_obj(source), as_obj(target), {})


def injection(model: CategoryModel, obj: SumObject, k: int) -> Morphism:
    """Isometry of the k-th summand into `obj` (the W_k of a direct sum)."""
    src = SumObject((obj.words[k],), (obj.tags[k],))
    blocks = {}
    for c in range(model.rank):
        offs = model.obj_offsets(c, obj)
        B = np.zeros((offs[-1], offs[k + 1] - offs[k]), dtype=complex)
        B[offs[k]:offs[k + 1], :] = np.eye(offs[k + 1] - offs[k])
        blocks[c] = B
    return Morphism(model, src, obj, blocks)


def basis_vector(model: CategoryModel, nu: int, obj, index: int) -> Morphism:
    """The index-th tree-basis isometry in Hom(nu, obj)."""
    obj = as_obj(obj)
    if obj.words == ((),):
        if nu != 0 or index != 0:
            raise ObjectMismatchError("Hom(nu, unit) vanishes for nu != 0")
        return identity_morphism(model, unit_obj())
    blocks = {}
    d = model.obj_dim(nu, obj)
    col = np.zeros((d, 1), dtype=complex)
    col[index, 0] = 1.0
    blocks[nu] = col
    return Morphism(model, word_obj((nu,)), obj, blocks)


def unit_intro(model: CategoryModel, obj, index: int = 0) -> Morphism:
    """The index-th tree-basis isometry in Hom(unit, obj), from the empty word."""
    obj = as_obj(obj)
    blocks = {}
    d = model.obj_dim(0, obj)
    col = np.zeros((d, 1), dtype=complex)
    col[index, 0] = 1.0
    blocks[0] = col
    return Morphism(model, unit_obj(), obj, blocks)


def hom_basis(model: CategoryModel, nu: int, obj) -> list:
    """Orthonormal isometries spanning Hom(nu, obj); count is the tree dimension."""
    obj = as_obj(obj)
    return [basis_vector(model, nu, obj, i) for i in range(model.obj_dim(nu, obj))]


# ---------------------------------------------------------------------------
# monoidal products


def _word_sub_blocks(f: Morphism, ks: int, kt: int) -> dict:
    """Word-level sub-block of f between source summand ks and target summand kt."""
    model = f.model
    out = {}
    for c in range(model.rank):
        so = model.obj_offsets(c, f.source)
        to = model.obj_offsets(c, f.target)
        out[c] = f.blocks[c][to[kt]:to[kt + 1], so[ks]:so[ks + 1]]
    return out


def rmul(f: Morphism, right) -> Morphism:
    """f x 1_right."""
    model = f.model
    right = as_obj(right)
    src = sum_product(f.source, right)
    tgt = sum_product(f.target, right)
    nb = len(right)
    blocks = {c: np.zeros((model.obj_dim(c, tgt), model.obj_dim(c, src)), dtype=complex)
              for c in range(model.rank)}
    for ks, ws in enumerate(f.source.words):
        for kt, wt in enumerate(f.target.words):
            fsub = _word_sub_blocks(f, ks, kt)
            if all(B.size == 0 or not B.any() for B in fsub.values()):
                continue
            for kb, wb in enumerate(right.words):
                ksrc = ks * nb + kb
                ktgt = kt * nb + kb
                for c in range(model.rank):
                    M = blocks[c]
                    roff = model.obj_offsets(c, tgt)[ktgt]
                    coff = model.obj_offsets(c, src)[ksrc]
                    rows = model.paths(c, wt + wb)
                    cols = model.paths(c, ws + wb)
                    row_pos = {p: i for i, p in enumerate(rows)}
                    col_pos = {p: i for i, p in enumerate(cols)}
                    for m in range(model.rank):
                        sub = fsub[m]
                        if sub.size == 0 or not sub.any():
                            continue
                        ps = model.paths(m, ws)
                        pt = model.paths(m, wt)
                        tls = model.tails(m, wb, c)
                        if not tls:
                            continue
                        for j, py in enumerate(pt):
                            for i, px in enumerate(ps):
                                v = sub[j, i]
                                if v == 0:
                                    continue
                                for t in tls:
                                    M[roff + row_pos[py + t], coff + col_pos[px + t]] += v
    return Morphism(model, src, tgt, blocks)


def _letter_block(model, m, fsub, ws, wt, c) -> np.ndarray:
    """Block of (1_m x f_part) mapping tails(m, ws, c) -> tails(m, wt, c)."""
    lam_s = model.lam_insert(m, ws)[c]
    lam_t = model.lam_insert(m, wt)[c]
    cols_s = model.detached_index(m, ws, c)
    cols_t = model.detached_index(m, wt, c)
    D = np.zeros((len(cols_t), len(cols_s)), dtype=complex)
    for jj, (b, j, g) in enumerate(cols_t):
        sub = fsub[b]
        if sub.size == 0:
            continue
        for ii, (b2, i, g2) in enumerate(cols_s):
            if b2 == b and g2 == g:
                D[jj, ii] = sub[j, i]
    return lam_t @ D @ lam_s.conj().T


def lmul(left, f: Morphism) -> Morphism:
    """1_left x f."""
    model = f.model
    left = as_obj(left)
    src = sum_product(left, f.source)
    tgt = sum_product(left, f.target)
    ns, nt = len(f.source), len(f.target)
    blocks = {c: np.zeros((model.obj_dim(c, tgt), model.obj_dim(c, src)), dtype=complex)
              for c in range(model.rank)}
    for ks, ws in enumerate(f.source.words):
        for kt, wt in enumerate(f.target.words):
            fsub = _word_sub_blocks(f, ks, kt)
            if all(B.size == 0 or not B.any() for B in fsub.values()):
                continue
            for ka, wa in enumerate(left.words):
                ksrc = ka * ns + ks
                ktgt = ka * nt + kt
                for c in range(model.rank):
                    M = blocks[c]
                    roff = model.obj_offsets(c, tgt)[ktgt]
                    coff = model.obj_offsets(c, src)[ksrc]
                    rows = model.paths(c, wa + wt)
                    cols = model.paths(c, wa + ws)
                    row_pos = {p: i for i, p in enumerate(rows)}
                    col_pos = {p: i for i, p in enumerate(cols)}
                    for m in range(model.rank):
                        pxs = model.paths(m, wa)
                        if not pxs:
                            continue
                        B = _letter_block(model, m, fsub, ws, wt, c)
                        if B.size == 0 or not B.any():
                            continue
                        ts = model.tails(m, ws, c)
                        tt = model.tails(m, wt, c)
                        for px in pxs:
                            for j, tj in enumerate(tt):
                                for i, ti in enumerate(ts):
                                    v = B[j, i]
                                    if v != 0:
                                        M[roff + row_pos[px + tj], coff + col_pos[px + ti]] += v
    return Morphism(model, src, tgt, blocks)


def mono_product(f: Morphism, g: Morphism) -> Morphism:
    """Monoidal product f x g = (f x 1) (1 x g)."""
    return compose(rmul(f, g.target), lmul(f.source, g))


# ---------------------------------------------------------------------------
# duality


@dataclass
class ConjugatePair:
    """Standard solution (r, rbar) of the conjugate equations for an object."""

    r: Morphism      # Hom(unit, conj(X) X)
    rbar: Morphism   # Hom(unit, X conj(X))


def conjugate_pair(model: CategoryModel, lam: int) -> ConjugatePair:
    """Duality isometries of a simple sector, derived from F.

    ``rbar`` is the canonical tree vector of Hom(id, lam conj(lam)); the
    coefficient of ``r`` is fixed by the conjugate equations and carries the
    Frobenius-Schur indicator for self-dual sectors.
    """
    cached = model._conj.get(lam)
    if cached is not None:
        return cached
    lamd = int(model.dual[lam])
    rbar = unit_intro(model, word_obj((lam, lamd)))
    if lam == 0:
        pair = ConjugatePair(r=rbar, rbar=rbar)
        model._conj[lam] = pair
        return pair
    Fm = model.F(lam, lamd, lam, lam)
    li = model.f_left(lam, lamd, lam, lam).index((0, 0, 0))
    ri = model.f_right(lam, lamd, lam, lam).index((0, 0, 0))
    f00 = Fm[li, ri]
    if abs(f00) < 1e-14:
        raise StructureError(f"degenerate duality datum F[{lam}]")
    coeff = 1.0 / (model.qdim[lam] * np.conj(f00))
    r = coeff * unit_intro(model, word_obj((lamd, lam)))
    pair = ConjugatePair(r=r, rbar=rbar)
    model._conj[lam] = pair
    return pair


def word_dual(model: CategoryModel, word) -> tuple:
    return tuple(int(model.dual[x]) for x in reversed(word))


def word_conjugate_pair(model: CategoryModel, word) -> ConjugatePair:
    """Conjugate solution for a tensor word, built iteratively from letters."""
    word = tuple(word)
    if not word:
        one = identity_morphism(model, unit_obj())
        return ConjugatePair(r=one, rbar=one)
    v, x = word[:-1], word[-1]
    px = conjugate_pair(model, x)
    if not v:
        return px
    pv = word_conjugate_pair(model, v)
    xd = (int(model.dual[x]),)
    r = compose(lmul(word_obj(xd), rmul(pv.r, word_obj((x,)))), px.r)
    rbar = compose(lmul(word_obj(v), rmul(px.rbar, word_obj(word_dual(model, v)))), pv.rbar)
    return ConjugatePair(r=r, rbar=rbar)


def _strip_prefix(obj: SumObject, word) -> SumObject:
    k = len(word)
    for w in obj.words:
        if w[:k] != word:
            raise ObjectMismatchError(f"object {obj!r} is not left divisible by {word}")
    return SumObject(tuple(w[k:] for w in obj.words), obj.tags)


def _strip_suffix(obj: SumObject, word) -> SumObject:
    k = len(word)
    for w in obj.words:
        if k and w[-k:] != word:
            raise ObjectMismatchError(f"object {obj!r} is not right divisible by {word}")
    return SumObject(tuple(w[:len(w) - k] for w in obj.words), obj.tags)


def left_inverse(model: CategoryModel, word, f: Morphism) -> Morphism:
    """Standard left inverse: strips the word prefix of an intertwiner.

    For f in Hom(word A, word B) returns
    (r* x 1_B)(1_conj(word) x f)(r x 1_A) in Hom(A, B).
    """
    word = tuple(word) if not isinstance(word, int) else (word,)
    a = _strip_prefix(f.source, word)
    b = _strip_prefix(f.target, word)
    pair = word_conjugate_pair(model, word)
    wd = word_obj(word_dual(model, word))
    lo = compose(rmul(adjoint(pair.r), b), compose(lmul(wd, f), rmul(pair.r, a)))
    return Morphism(model, a, b, lo.blocks)


def right_inverse(model: CategoryModel, word, f: Morphism) -> Morphism:
    """Standard right inverse: strips the word suffix of an intertwiner."""
    word = tuple(word) if not isinstance(word, int) else (word,)
    a = _strip_suffix(f.source, word)
    b = _strip_suffix(f.target, word)
    pair = word_conjugate_pair(model, word)
    wd = word_obj(word_dual(model, word))
    lo = compose(lmul(b, adjoint(pair.rbar)), compose(rmul(f, wd), lmul(a, pair.rbar)))
    return Morphism(model, a, b, lo.blocks)


# ---------------------------------------------------------------------------
# braiding


def _braid_elementary(model: CategoryModel, x: int, y: int) -> Morphism:
    blocks = {c: model.R(x, y, c) for c in range(model.rank)}
    return Morphism(model, word_obj((x, y)), word_obj((y, x)), blocks)


def _braid_words(model: CategoryModel, xw, yw) -> Morphism:
    if len(xw) == 0 or len(yw) == 0:
        return identity_morphism(model, word_obj(xw + yw))
    if len(xw) == 1:
        if len(yw) == 1:
            return _braid_elementary(model, xw[0], yw[0])
        yv, yl = yw[:-1], yw[-1:]
        inner = rmul(_braid_words(model, xw, yv), word_obj(yl))
        outer = lmul(word_obj(yv), _braid_words(model, xw, yl))
        return compose(outer, inner)
    xv, xl = xw[:-1], xw[-1:]
    inner = lmul(word_obj(xv), _braid_words(model, xl, yw))
    outer = rmul(_braid_words(model, xv, yw), word_obj(xl))
    return compose(outer, inner)


def braid(model: CategoryModel, a, b) -> Morphism:
    """Braiding eps(a, b) in Hom(a b, b a), extended to sums and words."""
    if not model.braided:
        raise UnsupportedOperationError("category carries no braiding")
    a, b = as_obj(a), as_obj(b)
    src = sum_product(a, b)
    tgt = sum_product(b, a)
    na, nb = len(a), len(b)
    blocks = {c: np.zeros((model.obj_dim(c, tgt), model.obj_dim(c, src)), dtype=complex)
              for c in range(model.rank)}
    for ka, wa in enumerate(a.words):
        for kb, wb in enumerate(b.words):
            eps = _braid_words(model, wa, wb)
            ksrc = ka * nb + kb
            ktgt = kb * na + ka
            for c in range(model.rank):
                roff = model.obj_offsets(c, tgt)[ktgt]
                coff = model.obj_offsets(c, src)[ksrc]
                B = eps.blocks[c]
                blocks[c][roff:roff + B.shape[0], coff:coff + B.shape[1]] = B
    return Morphism(model, src, tgt, blocks)


def categorical_trace(f: Morphism) -> complex:
    """Spherical trace: sum_c d(c) tr(block_c); Tr(1_X) = d(X)."""
    if not same_object(f.source, f.target):
        raise ObjectMismatchError("trace requires an endomorphism")
    return complex(sum(f.model.qdim[c] * np.trace(B) for c, B in f.blocks.items() if B.size))


def twist(model: CategoryModel, lam: int) -> complex:
    """Topological spin theta(lam) = Tr(eps(lam, lam)) / d(lam)."""
    w = word_obj((lam,))
    return categorical_trace(braid(model, w, w)) / model.qdim[lam]


# ---------------------------------------------------------------------------
# norms / test helpers


def op_norm(f: Morphism) -> float:
    out = 0.0
    for B in f.blocks.values():
        if B.size:
            out = max(out, float(np.linalg.norm(B, 2)))
    return out


def distance(f: Morphism, g: Morphism) -> float:
    return op_norm(f - g)


def random_morphism(model: CategoryModel, source, target, rng) -> Morphism:
    source, target = as_obj(source), as_obj(target)
    blocks = {}
    for c in range(model.rank):
        dt, ds = model.obj_dim(c, target), model.obj_dim(c, source)
        blocks[c] = rng.standard_normal((dt, ds)) + 1j * rng.standard_normal((dt, ds))
    return Morphism(model, source, target, blocks)


# ---------------------------------------------------------------------------
# coherence validators


def pentagon_residual(model: CategoryModel) -> float:
    """Max deviation of the two recoupling routes Hom(e, abcd), over all labels."""
    n = model.rank
    N = model.N
    worst = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in range(n):
                        left = [(f, al, g, be, ga)
                                for f in range(n) for al in range(N[a, b, f])
                                for g in range(n) for be in range(N[f, c, g])
                                for ga in range(N[g, d, e])]
                        if not left:
                            continue
                        right = [(h, de, k, ep, ze)
                                 for h in range(n) for de in range(N[c, d, h])
                                 for k in range(n) for ep in range(N[b, h, k])
                                 for ze in range(N[a, k, e])]
                        lpos = {t: i for i, t in enumerate(left)}
                        PA = np.zeros((len(left), len(right)), dtype=complex)
                        PB = np.zeros_like(PA)
                        for col, (h, de, k, ep, ze) in enumerate(right):
                            # route A: three recouplings
                            F1 = model.F(b, c, d, k)
                            c1 = model.f_right(b, c, d, k).index((h, de, ep))
                            for (m, mu, nu), v1 in zip(model.f_left(b, c, d, k), F1[:, c1]):
                                if v1 == 0:
                                    continue
                                F2 = model.F(a, m, d, e)
                                c2 = model.f_right(a, m, d, e).index((k, nu, ze))
                                for (g, rho, sg), v2 in zip(model.f_left(a, m, d, e), F2[:, c2]):
                                    if v2 == 0:
                                        continue
                                    F3 = model.F(a, b, c, g)
                                    c3 = model.f_right(a, b, c, g).index((m, mu, rho))
                                    for (f, al, be), v3 in zip(model.f_left(a, b, c, g), F3[:, c3]):
                                        if v3 == 0:
                                            continue
                                        PA[lpos[(f, al, g, be, sg)], col] += v1 * v2 * v3
                            # route B: two recouplings
                            F4 = model.F(a, b, h, e)
                            c4 = model.f_right(a, b, h, e).index((k, ep, ze))
                            for (f, al, epp), v4 in zip(model.f_left(a, b, h, e), F4[:, c4]):
                                if v4 == 0:
                                    continue
                                F5 = model.F(f, c, d, e)
                                c5 = model.f_right(f, c, d, e).index((h, de, epp))
                                for (g, be, ga), v5 in zip(model.f_left(f, c, d, e), F5[:, c5]):
                                    if v5 == 0:
                                        continue
                                    PB[lpos[(f, al, g, be, ga)], col] += v4 * v5
                        if PA.size:
                            worst = max(worst, float(np.max(np.abs(PA - PB))))
    return worst


def f_unitarity_residual(model: CategoryModel) -> float:
    n = model.rank
    worst = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    F = model.F(a, b, c, d)
                    if F.size:
                        worst = max(worst, float(np.max(np.abs(F @ F.conj().T - np.eye(F.shape[0])))))
    return worst


def hexagon_residual(model: CategoryModel) -> float:
    """Naturality of the composite word braiding against all trivalent vertices.

    Checks eps(a, y1 y2)(1_a x T) = (T x 1_a) eps(a, h) and its mirror for
    every vertex T in Hom(h, y1 y2); together with unitarity this is the
    operational form of the hexagon identities used by the engine.
    """
    if not model.braided:
        raise UnsupportedOperationError("category carries no braiding")
    n = model.rank
    worst = 0.0
    for y1 in range(n):
        for y2 in range(n):
            pair = word_obj((y1, y2))
            for h in range(n):
                for g in range(model.N[y1, y2, h]):
                    T = basis_vector(model, h, pair, model.paths(h, (y1, y2)).index(((y1, 0), (h, g))))
                    for a in range(n):
                        aw = word_obj((a,))
                        lhs = compose(braid(model, aw, pair), lmul(aw, T))
                        rhs = compose(rmul(T, aw), braid(model, aw, word_obj((h,))))
                        worst = max(worst, distance(lhs, rhs))
                        lhs2 = compose(braid(model, pair, aw), rmul(T, aw))
                        rhs2 = compose(lmul(aw, T), braid(model, word_obj((h,)), aw))
                        worst = max(worst, distance(lhs2, rhs2))
    return worst


def r_unitarity_residual(model: CategoryModel) -> float:
    n = model.rank
    worst = 0.0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                R = model.R(a, b, c)
                if R.size:
                    worst = max(worst, float(np.max(np.abs(R @ R.conj().T - np.eye(R.shape[0])))))
    return worst


def conjugate_residual(model: CategoryModel) -> float:
    """Max violation of the two conjugate equations over all sectors."""
    worst = 0.0
    for lam in range(model.rank):
        lamd = int(model.dual[lam])
        pair = conjugate_pair(model, lam)
        wl, wld = word_obj((lam,)), word_obj((lamd,))
        lhs1 = compose(lmul(wl, adjoint(pair.r)), rmul(pair.rbar, wl))
        want1 = (1.0 / model.qdim[lam]) * identity_morphism(model, wl)
        worst = max(worst, distance(lhs1, want1))
        lhs2 = compose(lmul(wld, adjoint(pair.rbar)), rmul(pair.r, wld))
        want2 = (1.0 / model.qdim[lam]) * identity_morphism(model, wld)
        worst = max(worst, distance(lhs2, want2))
    return worst


@dataclass
class CategoryReport:
    """Coherence check outcome for a loaded category model."""

    fusion_ok: bool
    fusion_violations: list
    pentagon: float
    f_unitarity: float
    conjugates: float
    hexagon: float | None
    r_unitarity: float | None
    tol: float

    @property
    def ok(self) -> bool:
        vals = [self.pentagon, self.f_unitarity, self.conjugates]
        if self.hexagon is not None:
            vals += [self.hexagon, self.r_unitarity]
        return self.fusion_ok and all(v < self.tol for v in vals)

    def residuals(self) -> dict:
        out = {"pentagon": self.pentagon, "f_unitarity": self.f_unitarity,
               "conjugate_equations": self.conjugates}
        if self.hexagon is not None:
            out["hexagon"] = self.hexagon
            out["r_unitarity"] = self.r_unitarity
        return out


def validate_category(model: CategoryModel, tol: float = 1e-9) -> CategoryReport:
    """Fusion axioms plus pentagon / unitarity / duality (and hexagon if braided)."""
    frep = validate_fusion(model.fusion)
    hexa = r_uni = None
    if model.braided:
        hexa = hexagon_residual(model)
        r_uni = r_unitarity_residual(model)
    return CategoryReport(
        fusion_ok=frep.ok,
        fusion_violations=frep.violations,
        pentagon=pentagon_residual(model),
        f_unitarity=f_unitarity_residual(model),
        conjugates=conjugate_residual(model),
        hexagon=hexa,
        r_unitarity=r_uni,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# derived models


def mirror(model: CategoryModel) -> CategoryModel:
    """Antilinear opposite of the category: conjugated F and R data.

    This is the model of the opposite system: the canonical functor sending
    an intertwiner T to its opposite is antilinear and maps tree bases to
    tree bases, so all structure constants conjugate.
    """
    f = lambda a, b, c, d: np.conj(model.F(a, b, c, d))
    r = (lambda a, b, c: np.conj(model.R(a, b, c))) if model.braided else None
    return CategoryModel(model.fusion, f, r, name=model.name + "_op")


class ProductModel(CategoryModel):
    """Deligne product of two category models; labels are packed pairs."""

    def __init__(self, m1: CategoryModel, m2: CategoryModel, name=""):
        n1, n2 = m1.rank, m2.rank
        names = [f"{a}|{b}" for a in m1.fusion.names for b in m2.fusion.names]
        dual = np.array([int(m1.dual[i]) * n2 + int(m2.dual[j])
                         for i in range(n1) for j in range(n2)])
        N = np.einsum("ikm,jln->ijklmn", m1.N, m2.N).reshape(n1 * n2, n1 * n2, n1 * n2)
        qd = np.array([m1.qdim[i] * m2.qdim[j] for i in range(n1) for j in range(n2)])
        fusion = FusionData(names, dual, N, qd)
        self.factors = (m1, m2)
        self._n2 = n2
        r = self._r_product if (m1.braided and m2.braided) else None
        super().__init__(fusion, self._f_product, r,
                         name=name or f"{m1.name}(x){m2.name}")

    def pack(self, i: int, j: int) -> int:
        return i * self._n2 + j

    def unpack(self, k: int) -> tuple:
        return divmod(k, self._n2)

    def _f_product(self, a, b, c, d):
        m1, m2 = self.factors
        a1, a2 = self.unpack(a)
        b1, b2 = self.unpack(b)
        c1, c2 = self.unpack(c)
        d1, d2 = self.unpack(d)
        F1 = m1.F(a1, b1, c1, d1)
        F2 = m2.F(a2, b2, c2, d2)
        l1 = {t: i for i, t in enumerate(m1.f_left(a1, b1, c1, d1))}
        l2 = {t: i for i, t in enumerate(m2.f_left(a2, b2, c2, d2))}
        r1 = {t: i for i, t in enumerate(m1.f_right(a1, b1, c1, d1))}
        r2 = {t: i for i, t in enumerate(m2.f_right(a2, b2, c2, d2))}
        left = self.f_left(a, b, c, d)
        right = self.f_right(a, b, c, d)
        M = np.zeros((len(left), len(right)), dtype=complex)
        for i, (sig, e, f) in enumerate(left):
            s1, s2 = self.unpack(sig)
            e1, e2 = divmod(e, int(m2.N[a2, b2, s2]))
            f1, f2 = divmod(f, int(m2.N[s2, c2, d2]))
            i1 = l1[(s1, e1, f1)]
            i2 = l2[(s2, e2, f2)]
            for j, (tau, g, h) in enumerate(right):
                t1, t2 = self.unpack(tau)
                g1, g2 = divmod(g, int(m2.N[b2, c2, t2]))
                h1, h2 = divmod(h, int(m2.N[a2, t2, d2]))
                M[i, j] = F1[i1, r1[(t1, g1, h1)]] * F2[i2, r2[(t2, g2, h2)]]
        return M

    def _r_product(self, a, b, c):
        m1, m2 = self.factors
        a1, a2 = self.unpack(a)
        b1, b2 = self.unpack(b)
        c1, c2 = self.unpack(c)
        return np.kron(m1.R(a1, b1, c1), m2.R(a2, b2, c2))


def deligne_product(m1: CategoryModel, m2: CategoryModel, name="") -> ProductModel:
    return ProductModel(m1, m2, name=name)
