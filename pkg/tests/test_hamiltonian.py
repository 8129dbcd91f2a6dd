import itertools

import numpy as np
import pytest

from detforge.hamiltonian import (
    PenaltySpec,
    apply_penalties,
    build_diagonal_hamiltonian,
    energies_of_states,
    energy_of_state,
    jw_map,
    number_penalty,
    s2_diagonal,
    spin_penalty_closed_shell,
)
from detforge.integral_io import MoHamiltonianData
from detforge.models import FockState, QusoModel, bits_to_spins

from conftest import all_bits, random_mo_data


def states_in_sector(m_spin, n_alpha, n_beta):
    evens = range(0, m_spin, 2)
    odds = range(1, m_spin, 2)
    for occ_a in itertools.combinations(evens, n_alpha):
        for occ_b in itertools.combinations(odds, n_beta):
            bits = np.zeros(m_spin, dtype=np.int64)
            bits[list(occ_a)] = 1
            bits[list(occ_b)] = 1
            yield bits


class TestBuild:
    def test_zero_mo_data(self):
        mo = MoHamiltonianData(2, np.zeros((2, 2)), e_core=0.7, eri_mo=np.zeros((2,) * 4))
        hd = build_diagonal_hamiltonian(mo)
        assert hd.shift == 0.7
        assert not hd.diag.any() and not hd.pair.any()

    def test_single_orbital_expansion(self):
        eri = np.full((1, 1, 1, 1), 0.5)
        mo = MoHamiltonianData(1, np.array([[-1.0]]), e_core=0.0, eri_mo=eri)
        hd = build_diagonal_hamiltonian(mo)
        assert np.array_equal(hd.diag, [-1.0, -1.0])
        # opposite spins on one spatial orbital keep Coulomb only
        assert hd.pair[0, 1] == 0.5 and hd.pair[1, 0] == 0.5
        assert hd.pair[0, 0] == 0.0

    def test_spin_expansion_rules(self, rng):
        mo = random_mo_data(rng, 3)
        hd = build_diagonal_hamiltonian(mo)
        wc, wx = mo.coulomb_exchange_matrices()
        for p in range(3):
            for q in range(3):
                for sa in (0, 1):
                    for sb in (0, 1):
                        m, n = 2 * p + sa, 2 * q + sb
                        if m == n:
                            continue
                        expect = wc[p, q] - (wx[p, q] if sa == sb else 0.0)
                        assert hd.pair[m, n] == pytest.approx(expect, abs=0)

    def test_pair_symmetric_zero_diagonal(self, rng):
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 4))
        assert np.array_equal(hd.pair, hd.pair.T)
        assert not np.diag(hd.pair).any()


class TestEnergy:
    def test_vacuum_returns_shift(self, rng):
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 3, e_core=-2.5))
        assert energy_of_state(hd, np.zeros(6, dtype=int)) == -2.5

    def test_single_bit(self, rng):
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 3, e_core=1.0))
        bits = np.zeros(6, dtype=int)
        bits[3] = 1
        assert energy_of_state(hd, bits) == pytest.approx(1.0 + hd.diag[3], abs=1e-15)

    def test_batch_matches_scalar(self, rng):
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 3))
        bits = all_bits(6)
        batch = energies_of_states(hd, bits)
        for row, expect in zip(bits, batch):
            assert energy_of_state(hd, row) == pytest.approx(expect, rel=1e-14, abs=1e-14)


class TestJwMap:
    def test_constant_hamiltonian(self):
        mo = MoHamiltonianData(1, np.zeros((1, 1)), e_core=2.0, eri_mo=np.zeros((1,) * 4))
        model = jw_map(build_diagonal_hamiltonian(mo))
        assert model.offset == 2.0
        assert not model.linear.any() and not model.quadratic

    def test_one_body_expansion(self):
        hd_mo = MoHamiltonianData(1, np.array([[1.0]]), e_core=0.0, eri_mo=np.zeros((1,) * 4))
        hd = build_diagonal_hamiltonian(hd_mo)
        hd.diag = np.array([1.0, 0.0])  # asymmetric one-body term
        model = jw_map(hd)
        assert model.offset == 0.5
        assert np.array_equal(model.linear, [-0.5, 0.0])

    @pytest.mark.parametrize("seed", range(5))
    def test_exhaustive_identity_m10(self, seed):
        rng = np.random.default_rng(seed)
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 5))
        model = jw_map(hd)
        bits = all_bits(10)
        energies = energies_of_states(hd, bits)
        values = model.values(bits_to_spins(bits))
        scale = np.abs(energies).max() + 1.0
        assert np.abs(values - energies).max() / scale < 1e-12


class TestNumberPenalty:
    def test_one_bit(self):
        model = number_penalty([0], 1, 1)
        assert model.value([-1]) == 0.0  # occupied
        assert model.value([+1]) == 1.0

    def test_two_bits_single_occupancy(self):
        model = number_penalty([0, 1], 1, 2)
        values = {
            (1, 1): 1.0,   # empty
            (1, -1): 0.0,
            (-1, 1): 0.0,
            (-1, -1): 1.0,  # doubly occupied
        }
        for z, expect in values.items():
            assert model.value(np.array(z)) == expect

    def test_counting_oracle(self, rng):
        indices = sorted(rng.choice(12, size=6, replace=False).tolist())
        model = number_penalty(indices, 3, 12)
        for bits in all_bits(12)[:: 7]:  # stride keeps runtime low, still ~600 states
            count = bits[indices].sum()
            assert model.value_bits(bits) == pytest.approx((count - 3) ** 2, abs=1e-12)

    def test_target_out_of_range(self):
        from detforge.errors import TargetOutOfRange

        with pytest.raises(TargetOutOfRange):
            number_penalty([0, 1], 3, 4)


class TestSpinPenalty:
    def test_paired_site_is_zero(self):
        model = spin_penalty_closed_shell(1, 1)
        assert model.value(np.array([-1, -1])) == 0.0

    def test_unpaired_site_is_one(self):
        model = spin_penalty_closed_shell(1, 1)
        assert model.value(np.array([-1, 1])) == 1.0

    def test_sector_oracle_counts_unpaired_beta(self):
        model = spin_penalty_closed_shell(4, 2)
        for bits in states_in_sector(8, 2, 2):
            doubly = int(np.sum(bits[0::2] * bits[1::2]))
            unpaired_beta = 2 - doubly
            assert model.value_bits(bits) == pytest.approx(unpaired_beta, abs=1e-12)

    def test_nonnegative_given_correct_beta_count(self):
        model = spin_penalty_closed_shell(3, 2)
        for bits in all_bits(6):
            if bits[1::2].sum() == 2:
                assert model.value_bits(bits) >= 0.0


class TestS2Diagonal:
    def test_closed_shell_zero(self):
        model = s2_diagonal(2)
        assert model.value_bits(np.array([1, 1, 0, 0])) == 0.0

    def test_single_alpha(self):
        model = s2_diagonal(1)
        assert model.value_bits(np.array([1, 0])) == 0.75

    def test_two_alpha_triplet_like(self):
        model = s2_diagonal(2)
        assert model.value_bits(np.array([1, 0, 1, 0])) == 2.0

    def test_occupation_formula_oracle(self):
        model = s2_diagonal(3)
        for bits in all_bits(6):
            n_a, n_b = bits[0::2].sum(), bits[1::2].sum()
            paired = int(np.sum(bits[0::2] * bits[1::2]))
            expect = 0.25 * (n_a - n_b) ** 2 + 0.5 * (n_a + n_b) - paired
            assert model.value_bits(bits) == pytest.approx(expect, abs=1e-12)


class TestApplyPenalties:
    def test_empty_spec_is_identity(self, rng):
        hd = build_diagonal_hamiltonian(random_mo_data(rng, 3))
        model = jw_map(hd)
        assert apply_penalties(model, PenaltySpec()) == model

    def test_auto_lambda_is_coefficient_norm(self):
        model = QusoModel(2, offset=9.0, linear=np.array([1.0, -2.0]))
        model.quadratic[(0, 1)] = 0.5
        assert PenaltySpec().resolve_lambda(model) == 3.5

    def test_combined_penalty_zero_exactly_on_target_set(self):
        # number(alpha)+number(beta)+spin combined: >= 0 everywhere, zero
        # exactly on closed-shell states with the right electron counts.
        spec = PenaltySpec(n_alpha_target=1, n_beta_target=1, s2_zero=True, lam=1.0)
        base = QusoModel(4)
        combined = apply_penalties(base, spec)
        for bits in all_bits(4):
            value = combined.value_bits(bits)
            n_a, n_b = bits[0::2].sum(), bits[1::2].sum()
            paired = int(np.sum(bits[0::2] * bits[1::2]))
            on_target = n_a == 1 and n_b == 1 and paired == 1
            if on_target:
                assert value == pytest.approx(0.0, abs=1e-12)
            else:
                assert value > 0.5

    def test_penalized_optimum_lands_in_sector(self, rng):
        # double brute force: unrestricted optimum of the penalized model ==
        # sector-restricted optimum of the raw model
        from detforge.solvers import brute_force

        mo = random_mo_data(rng, 4)
        hd = build_diagonal_hamiltonian(mo)
        raw = jw_map(hd)
        spec = PenaltySpec(n_alpha_target=2, n_beta_target=2, s2_zero=False, lam="auto")
        penalized = apply_penalties(raw, spec)
        full = brute_force(penalized)
        restricted = brute_force(raw, sector=(range(0, 8, 2), 2, range(1, 8, 2), 2))
        bits = np.asarray((1 - full.assignment) // 2)
        assert bits[0::2].sum() == 2 and bits[1::2].sum() == 2
        # same optimum value; alpha/beta-swap degeneracies may pick a twin state
        assert raw.value(full.assignment) == pytest.approx(restricted.value, abs=1e-9)


class TestFixtureDoubleBruteForce:
    def test_penalized_full_space_matches_sector_at_m22(self):
        """Full 2^22 enumeration of the penalized model vs sector-restricted
        enumeration of the raw model on the committed fixture."""
        from detforge.integral_io import load_bundle
        from detforge.scf import initial_coefficients, resolve_penalties
        from detforge.orbital_rotation import ao_to_mo
        from detforge.solvers import brute_force
        from detforge.models import spins_to_bits
        from conftest import fixture_path

        bundle = load_bundle(fixture_path("oh_minus_631g_3.0.scfb.json"))
        mo = ao_to_mo(bundle, initial_coefficients(bundle))
        raw = jw_map(build_diagonal_hamiltonian(mo))
        spec = resolve_penalties(PenaltySpec(s2_zero=True), 5, 5)
        penalized = apply_penalties(raw, spec)
        full = brute_force(penalized)
        restricted = brute_force(penalized, sector=(range(0, 22, 2), 5, range(1, 22, 2), 5))
        bits = spins_to_bits(full.assignment)
        assert bits[0::2].sum() == 5 and bits[1::2].sum() == 5
        assert np.sum(bits[0::2] * bits[1::2]) == 5  # spin penalty forces closed shell
        assert full.value == pytest.approx(restricted.value, abs=1e-9)
        assert raw.value(full.assignment) == pytest.approx(raw.value(restricted.assignment), abs=1e-9)
