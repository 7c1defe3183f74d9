#!/usr/bin/env python3
"""Regenerate the category/algebra bundles shipped in data/.

Categories come from qsystems.catalog; algebra multiplication coefficients
are solved numerically from the Q-system relations and frozen into files.
Every written bundle is re-loaded and re-validated before the script
reports success.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from qsystems import catalog
from qsystems.induction import solve_haploid_algebra, verify_algebra
from qsystems.io import load_algebra, load_category, save_algebra, save_category, write_matrix
from qsystems.morphisms import validate_category

DATA = Path(__file__).resolve().parents[1] / "data"

PROVENANCE = {
    "trivial": "single sector, identity data",
    "fibonacci": "golden-ratio anyons, standard real unitary gauge",
    "ising": "Ising anyons (nu = 1), standard unitary gauge",
    "su2k4": "SU(2) level 4, symmetrized q-Racah recoupling",
    "z2boson": "Z2 bosons: trivial associator, symmetric degenerate braiding",
    "semion": "Z2 semion: cocycle associator, twist i",
    "z4": "Z4 anyons, twists zeta_8^(a^2), cocycle associator",
    "rep_a4": "representations of the alternating group on 4 letters "
              "(multiplicity two in 3 x 3), symmetric braiding",
}

ALGEBRAS = [
    # (file, category, multiplicities, note)
    ("z2.alg", "su2k4", {0: 1, 4: 1},
     "order-two simple current algebra 0 (+) 4"),
    ("fibtau.alg", "fibonacci", {0: 1, 1: 1},
     "two-summand algebra 1 (+) tau, golden-ratio coefficients"),
    ("isingpsi.alg", "ising", {0: 1, 2: 1},
     "fermionic algebra 1 (+) p (nonlocal)"),
    ("z4fermion.alg", "z4", {0: 1, 2: 1},
     "fermionic subgroup algebra 0 (+) 2 (nonlocal)"),
]


def main():
    DATA.mkdir(exist_ok=True)
    models = {}
    for name, make in catalog.CATALOG.items():
        model = make()
        path = DATA / f"{name}.cat"
        save_category(model, path, provenance=PROVENANCE[name])
        loaded = load_category(path)
        rep = validate_category(loaded, tol=1e-9)
        assert rep.ok, (name, rep.residuals())
        models[name] = loaded
        print(f"wrote {path}  (rank {model.rank}, checks ok)")

    rng = np.random.default_rng(2024)
    for fname, cat, mult, note in ALGEBRAS:
        model = models[cat]
        alg = solve_haploid_algebra(model, mult, rng=rng)
        path = DATA / fname
        save_algebra(alg, path, name=fname.removesuffix(".alg"), provenance=note)
        loaded = load_algebra(path, model)
        rep = verify_algebra(loaded, tol=1e-9)
        assert rep.ok, (fname, rep.residuals)
        print(f"wrote {path}  (verified)")

    # reference D4 coupling matrix for check-invariant examples
    d4 = np.zeros((5, 5), dtype=int)
    d4[0, 0] = d4[0, 4] = d4[4, 0] = d4[4, 4] = 1
    d4[2, 2] = 2
    write_matrix(d4, DATA / "d4_su2k4.mat")
    print(f"wrote {DATA / 'd4_su2k4.mat'}")


if __name__ == "__main__":
    main()
