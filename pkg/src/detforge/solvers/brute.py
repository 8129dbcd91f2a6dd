"""Exact enumeration over the full assignment space or an electron-number
sector.  Ties are broken toward the lexicographically smallest occupation
bitstring (index 0 most significant)."""

from itertools import combinations

import numpy as np

from ..errors import TooLarge
from ..models import bits_to_spins
from .base import SolverResult, as_spin_model

FULL_SPACE_MAX_BITS = 26
SECTOR_MAX_STATES = 10**8
_CHUNK = 1 << 16


def _bit_matrix(start, stop, n):
    """Rows = occupation vectors of integers [start, stop); bit 0 of the
    vector is the integer's most significant bit, so ascending integers
    enumerate bitstrings in lexicographic order."""
    ints = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((ints[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def _combination_bits(size, count):
    combos = list(combinations(range(size), count))
    bits = np.zeros((len(combos), size), dtype=np.int64)
    for row, combo in enumerate(combos):
        bits[row, list(combo)] = 1
    return bits


def brute_force(model, sector=None):
    """Global minimum of a QUSO/QUBO model, optionally restricted to a
    sector (alpha index set, n_alpha, beta index set, n_beta)."""
    spin_model, to_native = as_spin_model(model)
    n = spin_model.n
    if sector is None:
        if n > FULL_SPACE_MAX_BITS:
            raise TooLarge(
                f"full enumeration over {n} > {FULL_SPACE_MAX_BITS} bits; supply a sector"
            )
        best_bits, best_value, evaluations = _scan_full(spin_model, n)
    else:
        best_bits, best_value, evaluations = _scan_sector(spin_model, n, sector)
    assignment = to_native(bits_to_spins(best_bits))
    return SolverResult(
        assignment=assignment,
        value=model.value(assignment),
        evaluations=evaluations,
    )


def _scan_full(spin_model, n):
    best_value = np.inf
    best_bits = None
    total = 1 << n
    for start in range(0, total, _CHUNK):
        bits = _bit_matrix(start, min(start + _CHUNK, total), n)
        values = spin_model.values(bits_to_spins(bits))
        i = int(np.argmin(values))  # first minimum = lexicographically smallest
        if values[i] < best_value:
            best_value = float(values[i])
            best_bits = bits[i].copy()
    return best_bits, best_value, total


def _scan_sector(spin_model, n, sector):
    alpha_idx, n_alpha, beta_idx, n_beta = sector
    alpha_idx = np.asarray(sorted(alpha_idx), dtype=np.int64)
    beta_idx = np.asarray(sorted(beta_idx), dtype=np.int64)
    n_states = _n_choose_k(len(alpha_idx), n_alpha) * _n_choose_k(len(beta_idx), n_beta)
    if n_states > SECTOR_MAX_STATES:
        raise TooLarge(f"sector holds {n_states} > {SECTOR_MAX_STATES} states")
    if n_states == 0:
        raise TooLarge("sector is empty (target exceeds the index set)")

    a_bits = _combination_bits(len(alpha_idx), n_alpha)
    b_bits = _combination_bits(len(beta_idx), n_beta)
    za = 1.0 - 2.0 * a_bits  # +-1 blocks over the alpha/beta index sets
    zb = 1.0 - 2.0 * b_bits

    q = spin_model.dense_coupling()
    la, lb = spin_model.linear[alpha_idx], spin_model.linear[beta_idx]
    qaa = q[np.ix_(alpha_idx, alpha_idx)]
    qbb = q[np.ix_(beta_idx, beta_idx)]
    qab = q[np.ix_(alpha_idx, beta_idx)]

    e_a = za @ la + 0.5 * np.einsum("bi,ij,bj->b", za, qaa, za)
    e_b = zb @ lb + 0.5 * np.einsum("bi,ij,bj->b", zb, qbb, zb)
    cross = (za @ qab) @ zb.T
    values = spin_model.offset + e_a[:, None] + e_b[None, :] + cross

    best = float(values.min())
    rows, cols = np.nonzero(values == best)
    best_bits = None
    for r, c in zip(rows, cols):
        bits = np.zeros(n, dtype=np.int64)
        bits[alpha_idx] = a_bits[r]
        bits[beta_idx] = b_bits[c]
        key = tuple(bits)
        if best_bits is None or key < best_key:
            best_bits, best_key = bits, key
    return best_bits, best, int(n_states)


def _n_choose_k(n, k):
    if not 0 <= k <= n:
        return 0
    out = 1
    for i in range(min(k, n - k)):
        out = out * (n - i) // (i + 1)
    return out
