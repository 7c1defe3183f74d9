"""Bundle file formats and machine-readable reports.

Category bundles and algebra bundles are JSON documents; complex numbers are
stored as [re, im] pairs of decimal doubles and tree bases are addressed by
explicit (channel, multiplicity...) index triples, so files are unambiguous
and diff friendly.  Multiplicity indices are 0-based throughout.

Canonical form: entries are sorted, zero entries and the identity-sector
recouplings (implied by the unital gauge) are omitted; a parse -> serialize
-> parse round trip is the identity on models.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fusion import FusionData
from .induction import AlgebraObject
from .morphisms import CategoryModel, Morphism, SumObject
from .qsystem import ThetaSpec

__all__ = [
    "BundleError",
    "save_category",
    "load_category",
    "save_algebra",
    "load_algebra",
    "read_matrix",
    "write_matrix",
    "write_report",
]

CATEGORY_FORMAT = "fusion-category-bundle-v1"
ALGEBRA_FORMAT = "algebra-bundle-v1"


def _dump_doc(doc: dict) -> str:
    """Top-level keys one per line, list entries one per line (diff friendly)."""
    lines = ["{"]
    for i, key in enumerate(sorted(doc)):
        val = doc[key]
        sep = "," if i < len(doc) - 1 else ""
        if isinstance(val, list) and val and isinstance(val[0], (list, tuple)):
            lines.append(json.dumps(key) + ": [")
            for j, entry in enumerate(val):
                tail = "," if j < len(val) - 1 else ""
                lines.append(" " + json.dumps(entry, separators=(", ", ": ")) + tail)
            lines.append("]" + sep)
        else:
            lines.append(json.dumps(key) + ": " + json.dumps(val, separators=(", ", ": ")) + sep)
    lines.append("}")
    return "\n".join(lines) + "\n"


class BundleError(ValueError):
    """Malformed or inconsistent bundle file."""


def _c2j(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _j2c(v) -> complex:
    return complex(float(v[0]), float(v[1]))


# ---------------------------------------------------------------------------
# category bundles


def save_category(model: CategoryModel, path, provenance: str = "") -> None:
    n = model.rank
    doc = {
        "format": CATEGORY_FORMAT,
        "name": model.name,
        "provenance": provenance,
        "labels": list(model.fusion.names),
        "dual": [int(x) for x in model.dual],
        "N": [[a, b, c, int(model.N[a, b, c])]
              for a in range(n) for b in range(n) for c in range(n)
              if model.N[a, b, c]],
        "qdim": [float(x) for x in model.qdim],
        "unitary": True,
        "braided": bool(model.braided),
        "F": [],
        "R": [],
    }
    for a in range(1, n):
        for b in range(1, n):
            for c in range(1, n):
                for d in range(n):
                    left = model.f_left(a, b, c, d)
                    if not left:
                        continue
                    F = model.F(a, b, c, d)
                    right = model.f_right(a, b, c, d)
                    for i, lt in enumerate(left):
                        for j, rt in enumerate(right):
                            if abs(F[i, j]) > 1e-15:
                                doc["F"].append([a, b, c, d, list(lt), list(rt), _c2j(F[i, j])])
    if model.braided:
        for a in range(1, n):
            for b in range(1, n):
                for c in range(n):
                    R = model.R(a, b, c)
                    for f in range(R.shape[0]):
                        for e in range(R.shape[1]):
                            if abs(R[f, e]) > 1e-15:
                                doc["R"].append([a, b, c, f, e, _c2j(R[f, e])])
    Path(path).write_text(_dump_doc(doc))


def load_category(path) -> CategoryModel:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BundleError(f"cannot parse category bundle {path}: {exc}") from exc
    try:
        if doc["format"] != CATEGORY_FORMAT:
            raise BundleError(f"unexpected format field {doc.get('format')!r}")
        names = doc["labels"]
        n = len(names)
        N = np.zeros((n, n, n), dtype=int)
        for a, b, c, v in doc["N"]:
            N[a, b, c] = v
        fus = FusionData(names, doc["dual"], N, doc.get("qdim"))
        f_entries = {}
        for a, b, c, d, lt, rt, v in doc["F"]:
            f_entries.setdefault((a, b, c, d), []).append((tuple(lt), tuple(rt), _j2c(v)))
        r_entries = {}
        for a, b, c, f, e, v in doc.get("R", []):
            r_entries.setdefault((a, b, c), []).append((f, e, _j2c(v)))
        braided = bool(doc.get("braided", False))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, BundleError):
            raise
        raise BundleError(f"malformed category bundle {path}: {exc}") from exc

    cell = {}

    def f_provider(a, b, c, d):
        model = cell["model"]
        left = {t: i for i, t in enumerate(model.f_left(a, b, c, d))}
        right = {t: i for i, t in enumerate(model.f_right(a, b, c, d))}
        M = np.zeros((len(left), len(right)), dtype=complex)
        for lt, rt, v in f_entries.get((a, b, c, d), []):
            if lt not in left or rt not in right:
                raise BundleError(f"F entry {(a, b, c, d, lt, rt)} is not fusion compatible")
            M[left[lt], right[rt]] = v
        return M

    def r_provider(a, b, c):
        model = cell["model"]
        rows, cols = int(model.N[b, a, c]), int(model.N[a, b, c])
        M = np.zeros((rows, cols), dtype=complex)
        for f, e, v in r_entries.get((a, b, c), []):
            if f >= rows or e >= cols:
                raise BundleError(f"R entry {(a, b, c, f, e)} is not fusion compatible")
            M[f, e] = v
        return M

    model = CategoryModel(fus, f_provider, r_provider if braided else None,
                          name=doc.get("name", Path(path).stem))
    cell["model"] = model
    return model


# ---------------------------------------------------------------------------
# algebra bundles


def save_algebra(alg: AlgebraObject, path, name: str = "", provenance: str = "") -> None:
    model = alg.model
    theta = alg.theta
    ns = len(theta)
    mult_vec = [int(theta.multiplicities.get(lam, 0)) for lam in range(model.rank)]
    entries = []
    for ni, (nu, _) in enumerate(theta.summands):
        rows = model.obj_offsets(nu, theta.object)
        for li, (lam, _) in enumerate(theta.summands):
            for mi, (mu, _) in enumerate(theta.summands):
                cols = model.obj_offsets(nu, _theta_sq(theta))
                base = cols[li * ns + mi]
                for e in range(int(model.N[lam, mu, nu])):
                    v = alg.mult.blocks[nu][rows[ni], base + e]
                    if abs(v) > 1e-15:
                        entries.append([li, mi, ni, e, _c2j(v)])
    doc = {
        "format": ALGEBRA_FORMAT,
        "name": name or "algebra",
        "provenance": provenance,
        "category": model.name,
        "multiplicity": mult_vec,
        "coefficients": entries,
    }
    Path(path).write_text(_dump_doc(doc))


def _theta_sq(theta: ThetaSpec) -> SumObject:
    th = theta.object
    return SumObject(tuple(a + b for a in th.words for b in th.words),
                     tuple((s, t) for s in th.tags for t in th.tags))


def load_algebra(path, model: CategoryModel) -> AlgebraObject:
    from .morphisms import unit_intro

    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BundleError(f"cannot parse algebra bundle {path}: {exc}") from exc
    try:
        if doc["format"] != ALGEBRA_FORMAT:
            raise BundleError(f"unexpected format field {doc.get('format')!r}")
        mult_vec = doc["multiplicity"]
        if len(mult_vec) != model.rank:
            raise BundleError(f"multiplicity vector has length {len(mult_vec)}, "
                              f"category has {model.rank} sectors")
        theta = ThetaSpec(model, {lam: v for lam, v in enumerate(mult_vec) if v})
        ns = len(theta)
        th2 = _theta_sq(theta)
        blocks = {c: np.zeros((model.obj_dim(c, theta.object), model.obj_dim(c, th2)),
                              dtype=complex) for c in range(model.rank)}
        for li, mi, ni, e, v in doc["coefficients"]:
            nu = theta.summands[ni][0]
            rows = model.obj_offsets(nu, theta.object)
            cols = model.obj_offsets(nu, th2)
            blocks[nu][rows[ni], cols[li * ns + mi] + e] = _j2c(v)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, BundleError):
            raise
        raise BundleError(f"malformed algebra bundle {path}: {exc}") from exc
    mult = Morphism(model, th2, theta.object, blocks)
    return AlgebraObject(theta=theta, unit=unit_intro(model, theta.object), mult=mult)


# ---------------------------------------------------------------------------
# integer matrices and reports


def read_matrix(path) -> np.ndarray:
    try:
        rows = []
        for line in Path(path).read_text().splitlines():
            line = line.split("#")[0].strip()
            if line:
                rows.append([int(x) for x in line.split()])
        Z = np.array(rows, dtype=int)
        if Z.ndim != 2:
            raise ValueError("not a 2d grid")
        return Z
    except (OSError, ValueError) as exc:
        raise BundleError(f"cannot read integer matrix {path}: {exc}") from exc


def write_matrix(Z, path) -> None:
    lines = [" ".join(str(int(v)) for v in row) for row in np.asarray(Z)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_report(report: dict, path) -> None:
    def default(o):
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(f"not serializable: {type(o)}")

    Path(path).write_text(json.dumps(report, indent=1, sort_keys=True, default=default) + "\n")
