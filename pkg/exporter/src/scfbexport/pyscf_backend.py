"""PySCF-backed integral generation and SCF reference energies.

The superposition-of-atomic-densities guess seeds every calculation; the
stability-checked reference runs second-order SCF and restarts from the
stability-analysis orbitals until internally stable.
"""

import numpy as np
from pyscf import gto, scf

from .integrals import ANGSTROM_TO_BOHR  # noqa: F401  (shared unit convention)

MAX_STABILITY_ROUNDS = 6


def build_mol(spec):
    atom = "; ".join(
        f"{el} {x / ANGSTROM_TO_BOHR} {y / ANGSTROM_TO_BOHR} {z / ANGSTROM_TO_BOHR}"
        for el, (x, y, z) in zip(spec.elements, spec.coords_bohr)
    )
    return gto.M(
        atom=atom,
        basis=spec.basis,
        charge=spec.charge,
        spin=spec.multiplicity - 1,
        unit="Angstrom",
        verbose=0,
    )


def compute_system(spec):
    """AO integrals, nuclear repulsion and the atomic-density initial guess."""
    mol = build_mol(spec)
    n_ao = mol.nao_nr()
    eri = mol.intor("int2e").reshape(n_ao, n_ao, n_ao, n_ao)
    return {
        "mol": mol,
        "n_ao": n_ao,
        "overlap": mol.intor_symmetric("int1e_ovlp"),
        "hcore": mol.intor_symmetric("int1e_kin") + mol.intor_symmetric("int1e_nuc"),
        "eri": eri,
        "e_nuc": float(mol.energy_nuc()),
        "gamma_init": scf.hf.init_guess_by_atom(mol),
    }


def reference_energies(spec, ints):
    """Plain RHF and stability-checked second-order RHF, both from the
    atomic-density guess.  Returns (metadata, C_rhf, C_so_rhf)."""
    mol = ints["mol"]
    dm0 = ints["gamma_init"]

    mf = scf.RHF(mol)
    e_rhf = mf.kernel(dm0=dm0)
    record = {
        "rhf_energy": float(e_rhf),
        "rhf_converged": bool(mf.converged),
    }
    c_rhf = mf.mo_coeff.copy()

    mf_so = scf.RHF(mol).newton()
    e_so = mf_so.kernel(dm0=dm0)
    stable = False
    for _ in range(MAX_STABILITY_ROUNDS):
        mo_new, _, stable, _ = mf_so.stability(return_status=True)
        if stable:
            break
        e_so = mf_so.kernel(dm0=mf_so.make_rdm1(mo_new, mf_so.mo_occ))
    record.update(
        {
            "so_rhf_energy": float(e_so),
            "so_rhf_converged": bool(mf_so.converged),
            "so_rhf_internally_stable": bool(stable),
            "so_rhf_method": "second-order SCF, restarted from stability-analysis orbitals",
        }
    )
    return record, c_rhf, mf_so.mo_coeff.copy()
