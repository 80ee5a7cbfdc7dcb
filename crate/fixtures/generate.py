"""Regenerate the STO-3G FCIDUMP fixtures and their metadata.

Requires pyscf. Run from this directory:

    python3 generate.py

Every FCIDUMP holds the full canonical RHF orbital space (frozen-core folding
is done by the consumer) except LiH, whose two pi orbitals are removed so that
the active space is sigma-only (1 occupied + 2 virtual after freezing Li 1s).
metadata.csv records the pyscf RHF energy and the pyscf FCI energy of the
active space (after freezing the listed core orbitals) for cross-checking.
"""

import os

import numpy as np
from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def frange(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 4) for k in range(n + 1)]


def h2(r):
    return f"H 0 0 0; H 0 0 {r}"


def lih(r):
    return f"Li 0 0 0; H 0 0 {r}"


def h2o(r):
    half = np.deg2rad(104.45) / 2.0
    x, z = r * np.sin(half), r * np.cos(half)
    return f"O 0 0 0; H {x:.10f} 0 {z:.10f}; H {-x:.10f} 0 {z:.10f}"


def n2(r):
    return f"N 0 0 0; N 0 0 {r}"


def li2o(r):
    return f"Li 0 0 {-r}; O 0 0 0; Li 0 0 {r}"


# name, builder, grid, frozen (1-based), drop_pi
SCANS = [
    ("h2", h2, frange(0.3, 2.4, 0.1) + [0.735], [], False),
    ("lih", lih, frange(0.5, 2.4, 0.1), [1], True),
    ("h2o", h2o, frange(0.7, 2.0, 0.1), [1], False),
    ("n2", n2, frange(0.9, 2.2, 0.1), [1, 2], False),
    ("li2o", li2o, frange(1.3, 2.3, 0.1), [1, 2, 3], False),
]


def pi_orbitals(mol, mo):
    labels = mol.ao_labels()
    pxy = [k for k, l in enumerate(labels) if l.strip().endswith(("px", "py"))]
    weight = (mo[pxy, :] ** 2).sum(axis=0) / (mo ** 2).sum(axis=0)
    return [k for k in range(mo.shape[1]) if weight[k] > 0.5]


def active_fci(h1, eri, ecore, nelec, frozen):
    """Frozen-core fold then exact FCI, independent of the Rust code."""
    norb = h1.shape[0]
    g = ao2mo.restore(1, eri, norb)
    fz = [f - 1 for f in frozen]
    act = [p for p in range(norb) if p not in fz]
    e = ecore
    for i in fz:
        e += 2 * h1[i, i]
        for j in fz:
            e += 2 * g[i, i, j, j] - g[i, j, j, i]
    heff = h1[np.ix_(act, act)].copy()
    for i in fz:
        heff += 2 * g[np.ix_(act, act, [i], [i])][:, :, 0, 0]
        heff -= g[np.ix_(act, [i], [i], act)][:, 0, 0, :]
    gact = g[np.ix_(act, act, act, act)]
    ne = nelec - 2 * len(fz)
    efci, _ = fci.direct_spin1.kernel(heff, gact, len(act), (ne // 2, ne // 2),
                                      ecore=e, conv_tol=1e-12, max_cycle=500)
    return efci


def main():
    rows = ["molecule,label,file,norb,nelec,frozen,e_rhf,e_fci_active"]
    for name, build, grid, frozen, drop_pi in SCANS:
        os.makedirs(os.path.join(HERE, name), exist_ok=True)
        dm = None
        for r in grid:
            mol = gto.M(atom=build(r), basis="sto-3g", unit="Angstrom", verbose=0)
            mf = scf.RHF(mol)
            mf.conv_tol = 1e-12
            mf.kernel(dm0=dm)
            if not mf.converged:
                mf.kernel()
            dm = mf.make_rdm1()
            mo = mf.mo_coeff
            if drop_pi:
                pis = pi_orbitals(mol, mo)
                keep = [k for k in range(mo.shape[1]) if k not in pis]
                mo = mo[:, keep]
            norb = mo.shape[1]
            h1 = mo.T @ mf.get_hcore() @ mo
            eri = ao2mo.kernel(mol, mo, compact=True)
            fname = f"{name}_{r:.3f}.fcidump"
            fcidump.from_integrals(os.path.join(HERE, name, fname), h1, eri, norb,
                                   mol.nelectron, nuc=mol.energy_nuc(), ms=0,
                                   tol=1e-14, float_format=" %.16e")
            efci = active_fci(h1, eri, mol.energy_nuc(), mol.nelectron, frozen)
            fz = " ".join(str(f) for f in frozen)
            rows.append(f"{name},{r:.3f},{name}/{fname},{norb},{mol.nelectron},{fz},"
                        f"{mf.e_tot:.12f},{efci:.12f}")
            print(rows[-1], flush=True)
    with open(os.path.join(HERE, "metadata.csv"), "w") as f:
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
