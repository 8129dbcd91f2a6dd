import itertools

import numpy as np
import pytest

from detforge.errors import LengthMismatch, NonAntisymmetric, NotOrthonormal
from detforge.orbital_rotation import (
    ao_to_mo,
    kappa_from_skew,
    kappa_length,
    rotation_matrix,
    skew_from_kappa,
    transform_one_electron,
    transform_two_electron_diagonal,
    transform_two_electron_full,
)

from conftest import random_bundle, random_eri, random_symmetric


def naive_full_transform(g, c):
    """O(M^8) quadruple-loop reference for the four-index transform."""
    m = g.shape[0]
    out = np.zeros_like(g)
    for p, q, r, s in itertools.product(range(m), repeat=4):
        acc = 0.0
        for u, v, l, o in itertools.product(range(m), repeat=4):
            acc += c[u, p] * c[v, q] * g[u, v, l, o] * c[l, r] * c[o, s]
        out[p, q, r, s] = acc
    return out


def random_rotation(rng, m):
    return rotation_matrix(skew_from_kappa(rng.standard_normal(kappa_length(m)), m))


class TestSkew:
    def test_zero_vector(self):
        assert not skew_from_kappa(np.zeros(1), 2).any()

    def test_two_by_two(self):
        k = skew_from_kappa([0.3], 2)
        assert np.array_equal(k, [[0.0, 0.3], [-0.3, 0.0]])

    def test_three_by_three_ordering(self):
        k = skew_from_kappa([1.0, 2.0, 3.0], 3)
        assert k[1, 0] == -1.0 and k[2, 0] == -2.0 and k[2, 1] == -3.0
        assert np.array_equal(k, -k.T)

    def test_roundtrip(self, rng):
        kappa = rng.standard_normal(kappa_length(5))
        assert np.array_equal(kappa_from_skew(skew_from_kappa(kappa, 5)), kappa)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            skew_from_kappa(np.zeros(4), 3)


class TestRotation:
    def test_zero_is_exact_identity(self):
        v = rotation_matrix(np.zeros((4, 4)))
        assert np.array_equal(v, np.eye(4))

    def test_quarter_turn(self):
        v = rotation_matrix(skew_from_kappa([np.pi / 2], 2))
        assert np.allclose(v, [[0.0, -1.0], [1.0, 0.0]], atol=1e-12)

    def test_inverse_pairs(self, rng):
        k = skew_from_kappa(rng.standard_normal(kappa_length(5)), 5)
        prod = rotation_matrix(k) @ rotation_matrix(-k)
        assert np.abs(prod - np.eye(5)).max() < 1e-10

    def test_orthogonality_and_determinant(self, rng):
        for _ in range(25):
            v = random_rotation(rng, 6)
            assert np.abs(v.T @ v - np.eye(6)).max() <= 1e-10
            assert abs(np.linalg.det(v) - 1.0) <= 1e-8

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(NonAntisymmetric):
            rotation_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


class TestOneElectron:
    def test_identity_rotation(self, rng):
        h = random_symmetric(rng, 4)
        assert np.array_equal(transform_one_electron(h, np.eye(4)), h)

    def test_identity_matrix_is_invariant(self, rng):
        v = random_rotation(rng, 4)
        assert np.abs(transform_one_electron(np.eye(4), v) - np.eye(4)).max() < 1e-12

    def test_trace_invariance(self, rng):
        for _ in range(10):
            h = random_symmetric(rng, 5)
            v = random_rotation(rng, 5)
            assert abs(np.trace(transform_one_electron(h, v)) - np.trace(h)) < 1e-10


class TestTwoElectron:
    def test_identity_rotation(self, rng):
        g = random_eri(rng, 3)
        assert np.array_equal(transform_two_electron_full(g, np.eye(3)), g)

    def test_against_naive_reference(self, rng):
        g = random_eri(rng, 2)
        v = random_rotation(rng, 2)
        fast = transform_two_electron_full(g, v)
        slow = naive_full_transform(g, v.T)  # rotation = transform with C = V^T
        assert np.abs(fast - slow).max() < 1e-11

    def test_frobenius_norm_invariant(self, rng):
        g = random_eri(rng, 4)
        v = random_rotation(rng, 4)
        out = transform_two_electron_full(g, v)
        assert abs(np.linalg.norm(out) - np.linalg.norm(g)) < 1e-9

    def test_output_keeps_eightfold_symmetry(self, rng):
        g = random_eri(rng, 4)
        out = transform_two_electron_full(g, random_rotation(rng, 4))
        for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
            assert np.abs(out - out.transpose(perm)).max() < 1e-10

    def test_diagonal_matches_full_slices(self, rng):
        for m in (2, 3, 4, 5, 6):
            g = random_eri(rng, m)
            v = random_rotation(rng, m)
            full = transform_two_electron_full(g, v)
            wc, wx = transform_two_electron_diagonal(g, v)
            assert np.abs(wc - np.einsum("ppqq->pq", full)).max() <= 1e-10
            assert np.abs(wx - np.einsum("pqqp->pq", full)).max() <= 1e-10
            assert np.abs(np.diag(wc) - np.diag(wx)).max() <= 1e-10

    def test_identity_diagonal_slices(self, rng):
        g = random_eri(rng, 3)
        wc, wx = transform_two_electron_diagonal(g, np.eye(3))
        assert np.array_equal(wc, np.einsum("ppqq->pq", g))
        assert np.array_equal(wx, np.einsum("pqqp->pq", g))

    def test_composition(self, rng):
        g = random_eri(rng, 4)
        h = random_symmetric(rng, 4)
        v1 = random_rotation(rng, 4)
        v2 = random_rotation(rng, 4)
        step = transform_two_electron_full(transform_two_electron_full(g, v1), v2)
        joint = transform_two_electron_full(g, v2 @ v1)
        assert np.abs(step - joint).max() < 1e-9
        hstep = transform_one_electron(transform_one_electron(h, v1), v2)
        assert np.abs(hstep - transform_one_electron(h, v2 @ v1)).max() < 1e-9


class TestAoToMo:
    def test_orthonormal_ao_identity(self, rng):
        bundle = random_bundle(rng, 3)
        bundle.overlap = np.eye(3)
        mo = ao_to_mo(bundle, np.eye(3))
        assert np.array_equal(mo.h_mo, bundle.hcore)
        wc, wx = mo.coulomb_exchange_matrices()
        assert np.array_equal(wc, np.einsum("ppqq->pq", bundle.eri))
        assert np.array_equal(wx, np.einsum("pqqp->pq", bundle.eri))
        assert mo.e_core == bundle.e_nuc

    def test_rejects_non_orthonormal(self, rng):
        bundle = random_bundle(rng, 3)
        with pytest.raises(NotOrthonormal) as err:
            ao_to_mo(bundle, np.eye(3))  # identity is not S-orthonormal here
        assert err.value.deviation > 1e-3

    def test_s_orthonormal_accepted(self, rng):
        bundle = random_bundle(rng, 4)
        w, u = np.linalg.eigh(bundle.overlap)
        c = u @ np.diag(w**-0.5) @ u.T  # symmetric orthogonalization
        mo = ao_to_mo(bundle, c, full=True)
        wc, wx = mo.coulomb_exchange_matrices()
        assert np.abs(wc - np.einsum("ppqq->pq", mo.eri_mo)).max() < 1e-10
        assert np.abs(wx - np.einsum("pqqp->pq", mo.eri_mo)).max() < 1e-10
