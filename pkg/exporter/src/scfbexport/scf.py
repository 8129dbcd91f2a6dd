"""Self-contained restricted SCF used to cross-validate the PySCF-backed
production path: atomic-density guess plus Roothaan/DIIS iterations running
entirely on this package's own integral engine.

Density convention: gamma is spin-summed (trace(gamma S) = N_electrons),
F = hcore + J(gamma) - K(gamma)/2 and E_elec = 0.5 * sum(gamma * (hcore+F)).
"""

import numpy as np

from .basis import SAD_OCCUPATIONS
from .integrals import assemble_integrals


def coulomb_exchange(eri, gamma):
    j = np.einsum("uvls,ls->uv", eri, gamma)
    k = np.einsum("ulsv,ls->uv", eri, gamma)
    return j, k


def fock(hcore, eri, gamma):
    j, k = coulomb_exchange(eri, gamma)
    return hcore + j - 0.5 * k


def electronic_energy(hcore, eri, gamma):
    return 0.5 * float(np.sum(gamma * (hcore + fock(hcore, eri, gamma))))


def inverse_sqrt(s):
    w, u = np.linalg.eigh(s)
    return (u * w**-0.5) @ u.T


def sad_guess(elements, coords_bohr, basis_name):
    """Superposition of spherically averaged atomic densities, assembled
    block-diagonally in the molecular AO basis."""
    n_ao = 0
    blocks = []
    for element, xyz in zip(elements, coords_bohr):
        ints = assemble_integrals([element], [np.zeros(3)], basis_name)
        occ = np.zeros(ints["n_ao"])
        pattern = SAD_OCCUPATIONS[element]
        occ[: len(pattern)] = pattern
        gamma = _fractional_atom_scf(ints, occ)
        blocks.append(gamma)
        n_ao += ints["n_ao"]
    out = np.zeros((n_ao, n_ao))
    at = 0
    for block in blocks:
        n = block.shape[0]
        out[at : at + n, at : at + n] = block
        at += n
    return out


def _fractional_atom_scf(ints, occupations, max_iter=200, tol=1e-10):
    a = inverse_sqrt(ints["overlap"])
    hcore, eri = ints["hcore"], ints["eri"]
    gamma = np.zeros_like(hcore)
    e_prev = None
    for _ in range(max_iter):
        f = fock(hcore, eri, gamma)
        _, cp = np.linalg.eigh(a.T @ f @ a)
        c = a @ cp
        new_gamma = (c * occupations) @ c.T
        gamma = 0.5 * gamma + 0.5 * new_gamma  # damped for open-shell averages
        e = electronic_energy(hcore, eri, gamma)
        if e_prev is not None and abs(e - e_prev) < tol:
            break
        e_prev = e
    return gamma


def restricted_scf(ints, n_occ, gamma0, max_iter=200, tol=1e-10, diis_space=8):
    """Plain RHF: Roothaan iterations accelerated with Pulay DIIS.

    Returns (energy_electronic, C, converged flag, iterations).
    """
    s, hcore, eri = ints["overlap"], ints["hcore"], ints["eri"]
    a = inverse_sqrt(s)
    gamma = gamma0.copy()
    errors, focks = [], []
    e_prev = None
    c = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        f = fock(hcore, eri, gamma)
        err = f @ gamma @ s - s @ gamma @ f
        errors.append(err)
        focks.append(f)
        if len(errors) > diis_space:
            errors.pop(0)
            focks.pop(0)
        if len(errors) > 1:
            f = _diis_extrapolate(errors, focks)
        _, cp = np.linalg.eigh(a.T @ f @ a)
        c = a @ cp
        occ = np.zeros(s.shape[0])
        occ[:n_occ] = 2.0
        gamma = (c * occ) @ c.T
        e = electronic_energy(hcore, eri, gamma)
        grad = np.abs(fock(hcore, eri, gamma) @ gamma @ s - s @ gamma @ fock(hcore, eri, gamma)).max()
        if e_prev is not None and abs(e - e_prev) < tol and grad < 1e-7:
            converged = True
            break
        e_prev = e
    return electronic_energy(hcore, eri, gamma), c, converged, iterations


def _diis_extrapolate(errors, focks):
    n = len(errors)
    b = np.empty((n + 1, n + 1))
    b[-1, :] = -1.0
    b[:, -1] = -1.0
    b[-1, -1] = 0.0
    for i in range(n):
        for j in range(n):
            b[i, j] = float(np.sum(errors[i] * errors[j]))
    rhs = np.zeros(n + 1)
    rhs[-1] = -1.0
    try:
        coeffs = np.linalg.solve(b, rhs)[:n]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(ci * fi for ci, fi in zip(coeffs, focks))
