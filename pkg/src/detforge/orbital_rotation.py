"""Orbital rotations and integral transformations.

A rotation is parameterized by a real vector kappa of length M'(M'-1)/2
(strictly-lower triangle, row-major); the rotation matrix is V = exp(-K)
with K the antisymmetric matrix built from kappa.  Two-electron transforms
come in a full O(M^5) four-step variant and cheaper diagonal-only variants
that produce just the (pp|qq) and (pq|qp) matrices.
"""

import numpy as np

from .errors import LengthMismatch, NonAntisymmetric, NotOrthonormal, ShapeMismatch
from .integral_io import MoHamiltonianData

ORTHOGONALITY_TOL = 1e-10
ANTISYMMETRY_TOL = 1e-12


def kappa_length(m):
    return m * (m - 1) // 2


def skew_from_kappa(kappa, m=None):
    """Antisymmetric M'xM' matrix with strictly-lower entries -kappa (row-major)."""
    kappa = np.asarray(kappa, dtype=float)
    if kappa.ndim != 1 or not np.isfinite(kappa).all():
        raise LengthMismatch("kappa must be a finite one-dimensional vector")
    if m is None:
        m = int(round((1 + np.sqrt(1 + 8 * kappa.size)) / 2))
    if kappa.size != kappa_length(m):
        raise LengthMismatch(
            f"kappa has {kappa.size} entries, expected {kappa_length(m)} for M'={m}"
        )
    k = np.zeros((m, m))
    rows, cols = np.tril_indices(m, -1)
    k[rows, cols] = -kappa
    k[cols, rows] = kappa
    return k


def kappa_from_skew(k):
    """Inverse of skew_from_kappa."""
    rows, cols = np.tril_indices(k.shape[0], -1)
    return -k[rows, cols]


def rotation_matrix(k):
    """V = exp(-K) for antisymmetric K, via eigendecomposition of the Hermitian iK."""
    k = np.asarray(k, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ShapeMismatch(f"K must be square, got {k.shape}")
    dev = float(np.abs(k + k.T).max()) if k.size else 0.0
    if dev > ANTISYMMETRY_TOL:
        raise NonAntisymmetric(f"K deviates from antisymmetry by {dev:.3e}")
    if not k.any():
        return np.eye(k.shape[0])
    w, u = np.linalg.eigh(1j * k)
    v = (u * np.exp(1j * w)) @ u.conj().T
    v = v.real
    ortho = float(np.abs(v.T @ v - np.eye(v.shape[0])).max())
    if ortho > ORTHOGONALITY_TOL:
        raise NonAntisymmetric(f"rotation lost orthogonality ({ortho:.3e})")
    return v


def transform_one_electron(h, v):
    """h-bar = V h V^T."""
    h = np.asarray(h, dtype=float)
    v = np.asarray(v, dtype=float)
    if h.shape != v.shape or h.ndim != 2:
        raise ShapeMismatch(f"shape mismatch: h {h.shape}, V {v.shape}")
    return v @ h @ v.T


def _transform_full(eri, c):
    """(pq|rs) = sum C_up C_vq (uv|ls) C_lr C_ss'; four O(M^5) single-index steps."""
    t = np.tensordot(c, eri, axes=(0, 0))  # p v l s
    t = np.tensordot(c, t, axes=(0, 1)).transpose(1, 0, 2, 3)  # p q l s
    t = np.tensordot(t, c, axes=(2, 0)).transpose(0, 1, 3, 2)  # p q r s(ao)
    return np.tensordot(t, c, axes=(3, 0))  # p q r s


def _transform_diag(eri, c):
    """Diagonal-only transforms; peak cost O(M^5), memory O(M^3).

    W_ppqq[p,q] = (pp|qq), W_pqqp[p,q] = (pq|qp).
    """
    # (pp|qq): outer products over the bra pair, contract both AO bra indices,
    # then close the ket pair.
    d_bra = np.einsum("vp,up->pvu", c, c)
    t = np.tensordot(d_bra, eri, axes=([1, 2], [1, 0]))  # p l s
    w_ppqq = np.einsum("pls,lq,sq->pq", t, c, c)
    # (pq|qp): same pattern with the p index split across bra and ket.
    d_mix = np.einsum("sp,up->psu", c, c)
    t = np.tensordot(d_mix, eri, axes=([1, 2], [3, 0]))  # p v l
    w_pqqp = np.einsum("pvl,lq,vq->pq", t, c, c)
    return w_ppqq, w_pqqp


def transform_two_electron_full(eri, v):
    """Rotate the full two-electron tensor: each chemist index transforms with V."""
    eri = np.asarray(eri, dtype=float)
    v = np.asarray(v, dtype=float)
    if eri.ndim != 4 or len(set(eri.shape)) != 1 or eri.shape[0] != v.shape[0]:
        raise ShapeMismatch(f"shape mismatch: eri {eri.shape}, V {v.shape}")
    return _transform_full(eri, v.T)


def transform_two_electron_diagonal(eri, v):
    """Rotated (pp|qq) and (pq|qp) matrices without forming the full tensor."""
    eri = np.asarray(eri, dtype=float)
    v = np.asarray(v, dtype=float)
    if eri.ndim != 4 or len(set(eri.shape)) != 1 or eri.shape[0] != v.shape[0]:
        raise ShapeMismatch(f"shape mismatch: eri {eri.shape}, V {v.shape}")
    return _transform_diag(eri, v.T)


def ao_to_mo(bundle, c, full=False, ortho_tol=1e-8):
    """Transform bundle integrals into the MO basis defined by columns of C.

    C must be S-orthonormal.  With ``full`` the complete MO tensor is stored
    alongside the diagonal W matrices.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (bundle.m_spatial, bundle.m_spatial):
        raise ShapeMismatch(f"C has shape {c.shape}, expected square of dim {bundle.m_spatial}")
    dev = float(np.abs(c.T @ bundle.overlap @ c - np.eye(bundle.m_spatial)).max())
    if dev > ortho_tol:
        raise NotOrthonormal(f"max |C^T S C - I| = {dev:.3e} exceeds {ortho_tol:.0e}", deviation=dev)
    h_mo = c.T @ bundle.hcore @ c
    w_ppqq, w_pqqp = _transform_diag(bundle.eri, c)
    eri_mo = _transform_full(bundle.eri, c) if full else None
    return MoHamiltonianData(
        m_spatial=bundle.m_spatial,
        h_mo=h_mo,
        e_core=bundle.e_nuc,
        eri_mo=eri_mo,
        w_ppqq=w_ppqq,
        w_pqqp=w_pqqp,
    )
