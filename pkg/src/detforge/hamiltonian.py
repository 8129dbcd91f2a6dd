"""Diagonal Fock-basis Hamiltonian, determinant energies, JW-mapped QUSO
models and symmetry penalty models.

Spin orbitals interleave as s = 2p + sigma with sigma = 0 (alpha) and
1 (beta); pairs 2k, 2k+1 share spatial orbital k.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ShapeMismatch, TargetOutOfRange
from .models import FockState, QusoModel


@dataclass
class DiagonalHamiltonian:
    """One-body occupations plus pairwise Coulomb-minus-exchange couplings.

    E(b) = shift + sum_n diag_n b_n + 1/2 sum_{m != n} pair_mn b_m b_n
    """

    m_spin: int
    diag: np.ndarray
    pair: np.ndarray
    shift: float

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.pair = np.asarray(self.pair, dtype=float)
        if self.diag.shape != (self.m_spin,) or self.pair.shape != (self.m_spin, self.m_spin):
            raise ShapeMismatch("diag/pair shapes inconsistent with m_spin")


def build_diagonal_hamiltonian(mo):
    """Expand spatial MO data into the spin-orbital diagonal Hamiltonian.

    Same-spin couplings keep Coulomb minus exchange; opposite-spin couplings
    keep Coulomb only.
    """
    w_ppqq, w_pqqp = mo.coulomb_exchange_matrices()
    m_spin = 2 * mo.m_spatial
    diag = np.repeat(np.diag(mo.h_mo), 2)
    pair = np.kron(w_ppqq, np.ones((2, 2))) - np.kron(w_pqqp, np.eye(2))
    np.fill_diagonal(pair, 0.0)
    return DiagonalHamiltonian(m_spin=m_spin, diag=diag, pair=pair, shift=mo.e_core)


def energy_of_state(h, state):
    """Exact determinant energy; the oracle every mapped model is tested against."""
    bits = state.bits if isinstance(state, FockState) else np.asarray(state, dtype=np.int64)
    if bits.shape != (h.m_spin,):
        raise LengthMismatch(f"state has {bits.shape} bits, Hamiltonian expects {h.m_spin}")
    b = bits.astype(float)
    return h.shift + float(h.diag @ b) + 0.5 * float(b @ h.pair @ b)


def energies_of_states(h, bits_batch):
    """Vectorized energy_of_state over rows of a 0/1 matrix."""
    b = np.asarray(bits_batch, dtype=float)
    return h.shift + b @ h.diag + 0.5 * np.einsum("bi,ij,bj->b", b, h.pair, b)


def jw_map(h):
    """Jordan-Wigner image of the diagonal Hamiltonian as a QUSO model.

    For every occupation vector b and z = 1 - 2b the model value equals
    energy_of_state(h, b).
    """
    n = h.m_spin
    model = QusoModel(n)
    model.offset = h.shift + 0.5 * float(h.diag.sum())
    model.linear -= 0.5 * h.diag
    iu, ju = np.triu_indices(n, 1)
    coeffs = 0.25 * h.pair[iu, ju]
    model.offset += float(coeffs.sum())
    row_sums = 0.25 * h.pair.sum(axis=1)  # pair has zero diagonal
    model.linear -= row_sums
    for i, j, c in zip(iu, ju, coeffs):
        if c != 0.0:
            model.quadratic[(int(i), int(j))] = float(c)
    return model


def number_penalty(indices, target, n):
    """(sum_{i in set} occupation_i - target)^2 as a QUSO model.

    Zero exactly when the occupation count over the set equals the target,
    otherwise at least one.
    """
    indices = sorted(set(int(i) for i in indices))
    if indices and not (0 <= indices[0] and indices[-1] < n):
        raise TargetOutOfRange(f"index set escapes [0,{n})")
    if not (0 <= target <= len(indices)):
        raise TargetOutOfRange(f"target {target} outside [0,{len(indices)}]")
    model = QusoModel(n)
    c = len(indices) / 2.0 - target
    model.offset = c * c + len(indices) / 4.0
    for i in indices:
        model.linear[i] = -c
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            model.quadratic[(indices[a], indices[b])] = 0.5
    return model


def spin_penalty_closed_shell(m_spatial, n_beta):
    """Closed-shell S^2 = 0 penalty: target beta count minus the number of
    doubly occupied spatial orbitals.

    On determinants with the correct beta count this equals the number of
    unpaired beta electrons (non-negative, zero iff closed shell); it is
    meant to be combined with the number penalties, which dominate outside
    that sector.
    """
    n = 2 * m_spatial
    model = QusoModel(n)
    model.offset = float(n_beta) - m_spatial / 4.0
    model.linear += 0.25
    for k in range(m_spatial):
        model.quadratic[(2 * k, 2 * k + 1)] = -0.25
    return model


def _add_number_product(model, i, j, coeff):
    """Accumulate coeff * n_i * n_j (i != j) in spin variables."""
    model.offset += coeff / 4.0
    model.linear[i] -= coeff / 4.0
    model.linear[j] -= coeff / 4.0
    model.add_quadratic(i, j, coeff / 4.0)


def s2_diagonal(m_spatial):
    """Diagonal part of the total-spin operator as a QUSO model.

    On any determinant the value is the <S^2> diagnostic
    (N_alpha - N_beta)^2/4 + (N_alpha + N_beta)/2 - N_paired.
    """
    n = 2 * m_spatial
    model = QusoModel(n)
    for p in range(m_spatial):
        a, b = 2 * p, 2 * p + 1
        # 3/4 (n_a + n_b - 2 n_a n_b)
        model.offset += 0.75
        model.linear[a] -= 0.375
        model.linear[b] -= 0.375
        _add_number_product(model, a, b, -1.5)
    for p in range(m_spatial):
        for m in range(m_spatial):
            if m == p:
                continue
            _add_number_product(model, 2 * p, 2 * m, 0.25)
            _add_number_product(model, 2 * p, 2 * m + 1, -0.25)
            _add_number_product(model, 2 * p + 1, 2 * m, -0.25)
            _add_number_product(model, 2 * p + 1, 2 * m + 1, 0.25)
    return model


@dataclass
class PenaltySpec:
    """Which symmetry penalties to add and with what weight."""

    n_alpha_target: int | None = None
    n_beta_target: int | None = None
    s2_zero: bool = False
    lam: float | str = "auto"

    def resolve_lambda(self, model):
        if self.lam == "auto":
            return model.coefficient_norm()
        lam = float(self.lam)
        if lam <= 0:
            raise ValueError("penalty weight must be positive")
        return lam

    def any_active(self):
        return self.n_alpha_target is not None or self.n_beta_target is not None or self.s2_zero


def penalty_models(spec, n):
    """List of unit-weight penalty models for the active constraints."""
    m_spatial = n // 2
    models = []
    if spec.n_alpha_target is not None:
        models.append(number_penalty(range(0, n, 2), spec.n_alpha_target, n))
    if spec.n_beta_target is not None:
        models.append(number_penalty(range(1, n, 2), spec.n_beta_target, n))
    if spec.s2_zero:
        if spec.n_beta_target is None:
            raise TargetOutOfRange("closed-shell spin penalty needs a beta-count target")
        models.append(spin_penalty_closed_shell(m_spatial, spec.n_beta_target))
    return models


def apply_penalties(h_quso, spec):
    """h_quso + lambda * (sum of selected penalties); lambda='auto' uses the
    coefficient 1-norm of h_quso (offset excluded)."""
    models = penalty_models(spec, h_quso.n)
    out = QusoModel(h_quso.n, h_quso.offset, h_quso.linear)
    out.quadratic = dict(h_quso.quadratic)
    if not models:
        return out
    lam = spec.resolve_lambda(h_quso)
    for pm in models:
        out.add_model(pm, weight=lam)
    return out
