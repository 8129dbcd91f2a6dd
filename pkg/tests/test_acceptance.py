"""Acceptance suite: one test per acceptance criterion, each printing a
[PASS]/[FAIL] line (run with `pytest -s tests/test_acceptance.py` to see
them).  Tolerances are fixed here, not configurable."""

import time

import numpy as np
import pytest

from detforge.hamiltonian import (
    PenaltySpec,
    build_diagonal_hamiltonian,
    energies_of_states,
    jw_map,
)
from detforge.integral_io import load_bundle, load_fcidump
from detforge.mappings import quso_to_maxcut, quso_to_qubo, rosenberg_quadratize
from detforge.models import PuboModel, bits_to_spins
from detforge.orbital_rotation import (
    kappa_length,
    rotation_matrix,
    skew_from_kappa,
    transform_two_electron_diagonal,
    transform_two_electron_full,
)
from detforge.scf import ScfConfig, initial_coefficients, run_algorithm1, run_algorithm2, run_boost
from detforge.orbital_rotation import ao_to_mo
from detforge.solvers import SolverBudget, brute_force, gw_maxcut, simulated_annealing, tabu_search

from conftest import all_bits, fixture_path, random_eri, random_quso
from test_solvers import brute_maxcut, random_graph

ENERGY_TOL = 1e-5
MAPPING_RTOL = 1e-9


def report(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def scf_config(solver, seed=1, **kwargs):
    return ScfConfig(
        algorithm=kwargs.pop("algorithm", "2"),
        solver=solver,
        penalties=PenaltySpec(s2_zero=True),
        budget=SolverBudget(seed=seed),
        **kwargs,
    )


def test_oh_minus_fixed_point():
    bundle = load_bundle(fixture_path("oh_minus_631g_3.0.scfb.json"))
    t0 = time.perf_counter()
    state2, trace2 = run_algorithm2(bundle, scf_config("brute"))
    elapsed = time.perf_counter() - t0
    ok2 = (
        abs(state2.energy - (-75.113307)) < ENERGY_TOL
        and state2.converged
        and state2.iteration <= 20
        and elapsed < 60.0
    )
    mo = ao_to_mo(bundle, initial_coefficients(bundle), full=True)
    state1, trace1 = run_algorithm1(mo, scf_config("brute", algorithm="1"), n_alpha=5, n_beta=5)
    ok1 = abs(state1.energy - state2.energy) < ENERGY_TOL and len(trace1.rows) <= 5
    report(
        "oh-minus fixed point",
        ok2 and ok1,
        f"alg2 {state2.energy:.6f} in {state2.iteration} iters ({elapsed:.1f}s); "
        f"alg1 {state1.energy:.6f} in {len(trace1.rows)} rows",
    )


def test_oh_minus_solver_cross_agreement():
    bundle = load_bundle(fixture_path("oh_minus_631g_3.0.scfb.json"))
    finals = {}
    for solver in ("brute", "anneal", "tabu", "gw"):
        state, _ = run_algorithm2(bundle, scf_config(solver))
        finals[solver] = state.energy
    spread = max(finals.values()) - min(finals.values())
    ok = spread < ENERGY_TOL and all(abs(e - (-75.113307)) < ENERGY_TOL for e in finals.values())
    report(
        "solver cross-agreement",
        ok,
        " ".join(f"{k}={v:.6f}" for k, v in finals.items()),
    )


def test_n2_curve_spot_checks():
    results = {}
    for r in ("1.1", "3.0"):
        bundle = load_bundle(fixture_path(f"n2_ccpvdz_{r}.scfb.json"))
        t0 = time.perf_counter()
        state, _ = run_algorithm2(bundle, scf_config("tabu"))
        results[r] = (state.energy, time.perf_counter() - t0)
    ok_11 = abs(results["1.1"][0] - (-108.953796)) < ENERGY_TOL
    ok_30 = results["3.0"][0] <= -108.308684 + ENERGY_TOL and results["3.0"][0] < -107.994079
    ok_time = all(t < 600.0 for _, t in results.values())
    report(
        "n2 curve spot checks",
        ok_11 and ok_30 and ok_time,
        f"1.1A {results['1.1'][0]:.6f} ({results['1.1'][1]:.0f}s); "
        f"3.0A {results['3.0'][0]:.6f} ({results['3.0'][1]:.0f}s)",
    )


def test_boost_instability_detection():
    mo = load_fcidump(fixture_path("n2_ccpvdz_3.0_rhf.fcidump"))
    report_boost = run_boost(mo, scf_config("tabu", algorithm="boost"))
    gap = report_boost.aufbau_energy - report_boost.energy
    ok = report_boost.instability and gap > 1e-3
    report(
        "boost instability detection",
        ok,
        f"aufbau {report_boost.aufbau_energy:.6f}, best {report_boost.energy:.6f}, gap {gap:.4f}",
    )


def test_mapping_identities():
    rng = np.random.default_rng(2024)
    worst_jw = 0.0
    for _ in range(200):
        m_spatial = int(rng.integers(2, 8))  # M = 4..14 spin orbitals
        from conftest import random_mo_data

        hd = build_diagonal_hamiltonian(random_mo_data(rng, m_spatial))
        model = jw_map(hd)
        bits = all_bits(hd.m_spin)
        energies = energies_of_states(hd, bits)
        values = model.values(bits_to_spins(bits))
        scale = np.abs(energies).max() + 1.0
        worst_jw = max(worst_jw, float(np.abs(values - energies).max() / scale))

    worst_qubo = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        quso = random_quso(rng, n)
        qubo = quso_to_qubo(quso)
        bits = all_bits(n)
        qv = quso.values(bits_to_spins(bits))
        xv = qubo.values(bits.astype(float))
        worst_qubo = max(worst_qubo, float(np.abs(qv - xv).max() / (np.abs(qv).max() + 1.0)))

    worst_cut = 0.0
    for n in (6, 10, 14):
        quso = random_quso(rng, n)
        inst = quso_to_maxcut(quso)
        spins = bits_to_spins(all_bits(n))
        full = np.hstack([np.ones((spins.shape[0], 1), dtype=np.int64), spins])
        resid = inst.cut_values(full) + quso.values(spins) - inst.value_offset
        worst_cut = max(worst_cut, float(np.abs(resid).max() / (abs(inst.value_offset) + 1.0)))

    bundle = load_bundle(fixture_path("oh_minus_631g_3.0.scfb.json"))
    mo = ao_to_mo(bundle, initial_coefficients(bundle))
    chem = jw_map(build_diagonal_hamiltonian(mo))
    inst = quso_to_maxcut(chem)
    spins = bits_to_spins(rng.integers(0, 2, size=(100_000, 22)))
    full = np.hstack([np.ones((spins.shape[0], 1), dtype=np.int64), spins])
    resid = inst.cut_values(full) + chem.values(spins) - inst.value_offset
    worst_chem = float(np.abs(resid).max() / (abs(inst.value_offset) + 1.0))

    worst = max(worst_jw, worst_qubo, worst_cut, worst_chem)
    report(
        "mapping identities",
        worst < MAPPING_RTOL,
        f"worst relative residuals: jw {worst_jw:.2e}, qubo {worst_qubo:.2e}, "
        f"cut {worst_cut:.2e}, chemistry-22 {worst_chem:.2e}",
    )


def test_gw_ratio_and_certificate():
    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        inst = random_graph(rng, 14, density=0.5)
        opt, _ = brute_maxcut(inst)
        result = gw_maxcut(inst, SolverBudget(seed=seed))
        if result.value >= 0.878 * opt - 1e-9:
            hits += 1
    certificate_ok = True
    for seed in range(100):
        rng = np.random.default_rng(5000 + seed)
        inst = random_graph(rng, 14, density=0.5, negative=True)
        opt, _ = brute_maxcut(inst)
        result = gw_maxcut(inst, SolverBudget(seed=seed))
        if opt < result.ratio_certificate - 1e-9:
            certificate_ok = False
    elapsed = time.perf_counter() - t0
    ok = hits >= 95 and certificate_ok and elapsed < 300.0
    report(
        "gw ratio",
        ok,
        f"{hits}/100 above 0.878 ratio; certificate held on all mixed-sign graphs; {elapsed:.0f}s",
    )


def test_heuristic_solver_quality():
    scores = {}
    for name, fn in (("anneal", simulated_annealing), ("tabu", tabu_search)):
        hits = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            model = random_quso(rng, 12, density=1.0)
            exact = brute_force(model).value
            result = fn(model, SolverBudget(seed=seed))
            if abs(result.value - exact) < 1e-9:
                hits += 1
        scores[name] = hits
    ok = all(v >= 95 for v in scores.values())
    report("heuristic solver quality", ok, f"anneal {scores['anneal']}/100, tabu {scores['tabu']}/100")


def test_quadratization():
    import itertools

    failures = 0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 9))
        pubo = PuboModel(n)
        for _ in range(int(rng.integers(3, 7))):
            key = tuple(sorted(rng.choice(n, size=3, replace=False).tolist()))
            pubo.add_term(key, float(rng.standard_normal()))
        for _ in range(3):
            key = tuple(sorted(rng.choice(n, size=2, replace=False).tolist()))
            pubo.add_term(key, float(rng.standard_normal()))
        qubo, n_aux = rosenberg_quadratize(pubo)
        for bits in itertools.product((0, 1), repeat=n):
            x = np.array(bits, dtype=float)
            best = np.inf
            for aux in itertools.product((0, 1), repeat=n_aux):
                best = min(best, qubo.value(np.concatenate([x, np.array(aux, dtype=float)])))
            if abs(best - pubo.value(x)) > 1e-9:
                failures += 1
                break
    report("quadratization", failures == 0, f"{50 - failures}/50 cubic instances min-equivalent")


def test_rotation_machinery():
    rng = np.random.default_rng(99)
    worst_ortho = 0.0
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        v = rotation_matrix(skew_from_kappa(rng.standard_normal(kappa_length(m)), m))
        worst_ortho = max(worst_ortho, float(np.abs(v.T @ v - np.eye(m)).max()))

    worst_diag = 0.0
    for m in (2, 3, 4, 5, 6):
        g = random_eri(rng, m)
        v = rotation_matrix(skew_from_kappa(rng.standard_normal(kappa_length(m)), m))
        full = transform_two_electron_full(g, v)
        wc, wx = transform_two_electron_diagonal(g, v)
        worst_diag = max(worst_diag, float(np.abs(wc - np.einsum("ppqq->pq", full)).max()))
        worst_diag = max(worst_diag, float(np.abs(wx - np.einsum("pqqp->pq", full)).max()))

    g = random_eri(rng, 4)
    v0 = rotation_matrix(np.zeros((4, 4)))
    identity_exact = (
        np.array_equal(v0, np.eye(4))
        and np.array_equal(transform_two_electron_full(g, v0), g)
        and np.array_equal(transform_two_electron_diagonal(g, v0)[0], np.einsum("ppqq->pq", g))
    )
    ok = worst_ortho <= 1e-10 and worst_diag <= 1e-10 and identity_exact
    report(
        "rotation machinery",
        ok,
        f"orthogonality {worst_ortho:.2e}, diag-vs-full {worst_diag:.2e}, "
        f"kappa=0 exact identity: {identity_exact}",
    )


def test_determinism_across_threads(tmp_path):
    from detforge.cli import main

    args = [
        "scf", "--bundle", str(fixture_path("oh_minus_631g_3.0.scfb.json")),
        "--algorithm", "2", "--solver", "anneal", "--penalties", "number,spin",
        "--seed", "42",
    ]
    t1, t2 = tmp_path / "a.csv", tmp_path / "b.csv"
    code1 = main(args + ["--trace", str(t1), "--threads", "1"])
    code2 = main(args + ["--trace", str(t2), "--threads", "8"])
    identical = t1.read_bytes() == t2.read_bytes()
    report(
        "determinism",
        code1 == 0 and code2 == 0 and identical,
        f"trace CSVs byte-identical across --threads: {identical}",
    )
