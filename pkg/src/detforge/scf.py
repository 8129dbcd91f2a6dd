"""Outer SCF loops: orbital-rotation SCF (algorithm 1), Fock-diagonalization
SCF (algorithm 2), and the single-basis boost mode.

The energy reported at each iteration is the exact diagonal-Hamiltonian
expectation of the chosen determinant (nuclear shift included).  For
algorithm 2 the conventional AO-basis energy expression is evaluated
alongside as a consistency check; for closed-shell determinants the two
agree to roundoff, which pins the Coulomb/exchange prefactor convention.
"""

import json
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigError, InnerSolverFailure, LinearAlgebraFailure
from .hamiltonian import (
    PenaltySpec,
    apply_penalties,
    build_diagonal_hamiltonian,
    energy_of_state,
    jw_map,
    s2_diagonal,
)
from .integral_io import MoHamiltonianData, _write_text
from .models import FockState, aufbau_state, spins_to_bits
from .orbital_rotation import (
    ao_to_mo,
    rotation_matrix,
    skew_from_kappa,
    transform_one_electron,
    transform_two_electron_diagonal,
    transform_two_electron_full,
)
from .solvers import SolverBudget, brute_force, solve

SECTOR_RETRY_FACTOR = 10.0
ORTHONORMALITY_TOL = 1e-8


@dataclass
class ScfConfig:
    algorithm: str = "2"
    solver: str = "brute"
    budget: SolverBudget = field(default_factory=SolverBudget)
    penalties: PenaltySpec = field(default_factory=PenaltySpec)
    epsilon: float = 1e-8
    max_iter: int = 50
    kappa_gradient: str = "fd"
    fd_step: float = 1e-5
    kappa_gtol: float = 1e-7
    threads: int | None = None  # parallelism hint; never affects results

    def __post_init__(self):
        self.algorithm = str(self.algorithm)
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if self.algorithm not in ("1", "2", "boost"):
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.kappa_gradient != "fd":
            raise ConfigError(
                "only the finite-difference kappa gradient is implemented"
            )


@dataclass
class ScfState:
    iteration: int
    c: np.ndarray | None
    gamma: np.ndarray | None
    fock: np.ndarray | None
    energy: float
    b_min: FockState
    s2_diag: float
    converged: bool


class ScfTrace:
    """Per-iteration records plus a final summary."""

    def __init__(self, algorithm, solver):
        self.algorithm = algorithm
        self.solver = solver
        self.rows = []
        self.summary = {}

    def add(self, iteration, energy, state, solver_evals, wall_ms, **extra):
        self.rows.append(
            {
                "iteration": iteration,
                "energy": energy,
                "bitstring": str(state),
                "solver_evals": int(solver_evals),
                "wall_ms": wall_ms,
                **extra,
            }
        )

    @property
    def energies(self):
        return [row["energy"] for row in self.rows]

    def write_csv(self, path):
        """Deterministic trace: wall-clock data stays in the JSON summary."""
        lines = ["iteration,energy_hartree,bitstring,solver_evals"]
        for row in self.rows:
            lines.append(
                f"{row['iteration']},{row['energy']!r},{row['bitstring']},{row['solver_evals']}"
            )
        _write_text(path, "\n".join(lines) + "\n")

    def write_summary(self, path):
        doc = dict(self.summary)
        doc["algorithm"] = self.algorithm
        doc["solver"] = self.solver
        doc["iterations"] = [
            {k: row[k] for k in row if k != "bitstring"} | {"bitstring": row["bitstring"]}
            for row in self.rows
        ]
        _write_text(path, json.dumps(doc, indent=1, default=_jsonify))


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def spin_free_rdm(state):
    """Diagonal spatial 1-RDM: T_pp = b_{2p} + b_{2p+1}."""
    bits = state.bits if isinstance(state, FockState) else np.asarray(state, dtype=np.int64)
    return np.diag((bits[0::2] + bits[1::2]).astype(float))


def fock_matrix(hcore, eri, gamma):
    """Restricted closed-shell Fock operator for a spin-summed density."""
    j = np.einsum("uvls,ls->uv", eri, gamma)
    k = np.einsum("ulsv,ls->uv", eri, gamma)
    return hcore + j - 0.5 * k


def electronic_energy_ao(hcore, fock, gamma):
    """0.5 * sum gamma (hcore + fock); electronic part only."""
    return 0.5 * float(np.sum(gamma * (hcore + fock)))


def _fix_column_signs(c):
    idx = np.argmax(np.abs(c), axis=0)
    signs = np.sign(c[idx, np.arange(c.shape[1])])
    signs[signs == 0] = 1.0
    return c * signs


def inverse_sqrt_overlap(s, floor=1e-10):
    u, sing, vt = np.linalg.svd(s)
    if sing.min() <= floor:
        raise LinearAlgebraFailure(f"overlap nearly singular (sigma_min={sing.min():.3e})")
    return (u * sing**-0.5) @ vt


def initial_density(bundle):
    """gamma_init if present, else aufbau density from c_init, else the
    symmetric-orthogonalized core-Hamiltonian guess."""
    if bundle.gamma_init is not None:
        return bundle.gamma_init.copy()
    if bundle.c_init is not None:
        c = bundle.c_init
    else:
        a = inverse_sqrt_overlap(bundle.overlap)
        _, cp = np.linalg.eigh(a.T @ bundle.hcore @ a)
        c = a @ cp
    occ = np.array(
        [(1.0 if p < bundle.n_alpha else 0.0) + (1.0 if p < bundle.n_beta else 0.0)
         for p in range(bundle.m_spatial)]
    )
    return (c * occ) @ c.T


def initial_coefficients(bundle):
    """One Fock build + diagonalization from the initial density; the
    starting MO basis for algorithm 1."""
    a = inverse_sqrt_overlap(bundle.overlap)
    f = fock_matrix(bundle.hcore, bundle.eri, initial_density(bundle))
    _, cp = np.linalg.eigh(a.T @ f @ a)
    return _fix_column_signs(a @ cp)


def resolve_penalties(penalties, n_alpha, n_beta):
    """Fill unset number targets from the molecular electron counts."""
    out = PenaltySpec(
        n_alpha_target=penalties.n_alpha_target,
        n_beta_target=penalties.n_beta_target,
        s2_zero=penalties.s2_zero,
        lam=penalties.lam,
    )
    if out.n_alpha_target is None:
        out.n_alpha_target = n_alpha
    if out.n_beta_target is None:
        out.n_beta_target = n_beta
    return out


def _iteration_seed(seed, iteration):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(iteration),))
    return int(ss.generate_state(1, np.uint64)[0])


def inner_solve(hd, cfg, penalties, iteration=0):
    """One determinant search: penalized model, sector verification with a
    single retry at 10x lambda for the stochastic solvers."""
    quso = jw_map(hd)
    model = apply_penalties(quso, penalties)
    budget = cfg.budget.with_seed(_iteration_seed(cfg.budget.seed, iteration))

    if cfg.solver == "brute":
        sector = (
            range(0, hd.m_spin, 2),
            penalties.n_alpha_target,
            range(1, hd.m_spin, 2),
            penalties.n_beta_target,
        )
        result = brute_force(model, sector=sector)
        return FockState(spins_to_bits(result.assignment)), result

    result = solve(model, cfg.solver, budget)
    state = FockState(spins_to_bits(result.assignment))
    if _sector_ok(state, penalties):
        return state, result
    boosted = PenaltySpec(
        n_alpha_target=penalties.n_alpha_target,
        n_beta_target=penalties.n_beta_target,
        s2_zero=penalties.s2_zero,
        lam=SECTOR_RETRY_FACTOR * penalties.resolve_lambda(quso),
    )
    result = solve(apply_penalties(quso, boosted), cfg.solver, budget)
    state = FockState(spins_to_bits(result.assignment))
    if not _sector_ok(state, penalties):
        raise InnerSolverFailure(
            f"solver {cfg.solver!r} left the target sector even at "
            f"{SECTOR_RETRY_FACTOR}x penalty weight (iteration {iteration})"
        )
    return state, result


def _sector_ok(state, penalties):
    n_alpha, n_beta = state.counts()
    if penalties.n_alpha_target is not None and n_alpha != penalties.n_alpha_target:
        return False
    if penalties.n_beta_target is not None and n_beta != penalties.n_beta_target:
        return False
    return True


def run_algorithm2(bundle, cfg):
    """Fock-diagonalization SCF with a determinant search per iteration."""
    penalties = resolve_penalties(cfg.penalties, bundle.n_alpha, bundle.n_beta)
    a = inverse_sqrt_overlap(bundle.overlap)
    gamma = initial_density(bundle)
    s2_model = s2_diagonal(bundle.m_spatial)
    trace = ScfTrace(algorithm="2", solver=cfg.solver)

    e_prev = None
    converged = False
    c = f = state = None
    energy = np.nan
    s2_val = np.nan
    for iteration in range(1, cfg.max_iter + 1):
        t0 = time.perf_counter()
        f = fock_matrix(bundle.hcore, bundle.eri, gamma)
        _, cp = np.linalg.eigh(a.T @ f @ a)
        c = _fix_column_signs(a @ cp)
        ortho_dev = float(np.abs(c.T @ bundle.overlap @ c - np.eye(bundle.m_spatial)).max())
        if ortho_dev > ORTHONORMALITY_TOL:
            raise LinearAlgebraFailure(f"orbitals lost S-orthonormality ({ortho_dev:.3e})")

        mo = ao_to_mo(bundle, c)
        hd = build_diagonal_hamiltonian(mo)
        state, result = inner_solve(hd, cfg, penalties, iteration=iteration)
        energy = energy_of_state(hd, state)
        s2_val = s2_model.value(state.spins())

        gamma = (c * np.diag(spin_free_rdm(state))) @ c.T
        f_check = fock_matrix(bundle.hcore, bundle.eri, gamma)
        ao_energy = electronic_energy_ao(bundle.hcore, f_check, gamma) + bundle.e_nuc

        trace.add(
            iteration,
            energy,
            state,
            result.evaluations,
            wall_ms=1e3 * (time.perf_counter() - t0),
            ao_energy=ao_energy,
            s2_diag=s2_val,
        )
        if e_prev is not None and abs(e_prev - energy) < cfg.epsilon:
            converged = True
            break
        e_prev = energy

    final = ScfState(
        iteration=len(trace.rows),
        c=c,
        gamma=gamma,
        fock=f,
        energy=energy,
        b_min=state,
        s2_diag=s2_val,
        converged=converged,
    )
    _summarize(trace, final, cfg)
    return final, trace


def run_algorithm1(mo, cfg, n_alpha=None, n_beta=None):
    """Orbital-rotation SCF: alternate a determinant search with a
    quasi-Newton minimization of the fixed-determinant energy over kappa.

    After each kappa step the optimal rotation is folded into the reference
    integrals and kappa reset to zero, keeping every exponential in the
    small-angle regime.  Requires the full MO tensor.
    """
    if mo.eri_mo is None:
        raise ConfigError("algorithm 1 needs the full MO two-electron tensor")
    n_alpha = n_alpha if n_alpha is not None else getattr(mo, "n_alpha", None)
    n_beta = n_beta if n_beta is not None else getattr(mo, "n_beta", None)
    if n_alpha is None or n_beta is None:
        raise ConfigError("algorithm 1 needs electron counts (bundle or FCIDUMP input)")
    penalties = resolve_penalties(cfg.penalties, n_alpha, n_beta)

    m = mo.m_spatial
    h = mo.h_mo.copy()
    g = mo.eri_mo.copy()
    shift = mo.e_core
    u_acc = np.eye(m)
    s2_model = s2_diagonal(m)
    trace = ScfTrace(algorithm="1", solver=cfg.solver)

    def hd_here():
        data = MoHamiltonianData(
            m_spatial=m,
            h_mo=h,
            e_core=shift,
            w_ppqq=np.einsum("ppqq->pq", g).copy(),
            w_pqqp=np.einsum("pqqp->pq", g).copy(),
        )
        return build_diagonal_hamiltonian(data)

    t0 = time.perf_counter()
    hd = hd_here()
    state, result = inner_solve(hd, cfg, penalties, iteration=0)
    energy = energy_of_state(hd, state)
    trace.add(1, energy, state, result.evaluations,
              wall_ms=1e3 * (time.perf_counter() - t0),
              s2_diag=s2_model.value(state.spins()))
    e_prev = energy

    converged = False
    for outer in range(1, cfg.max_iter + 1):
        t0 = time.perf_counter()
        bits = state.bits.astype(float)

        def energy_at(kappa):
            v = rotation_matrix(skew_from_kappa(kappa, m))
            diag = np.repeat(np.einsum("mp,pq,mq->m", v, h, v), 2)
            wc, wx = transform_two_electron_diagonal(g, v)
            pair = np.kron(wc, np.ones((2, 2))) - np.kron(wx, np.eye(2))
            np.fill_diagonal(pair, 0.0)
            return shift + float(diag @ bits) + 0.5 * float(bits @ pair @ bits)

        opt = minimize(
            energy_at,
            np.zeros(m * (m - 1) // 2),
            jac=lambda x: _central_gradient(energy_at, x, cfg.fd_step),
            method="BFGS",
            options={"gtol": cfg.kappa_gtol, "maxiter": 200},
        )
        v = rotation_matrix(skew_from_kappa(opt.x, m))
        h = transform_one_electron(h, v)
        g = transform_two_electron_full(g, v)
        u_acc = u_acc @ v.T

        hd = hd_here()
        state, result = inner_solve(hd, cfg, penalties, iteration=outer)
        energy = energy_of_state(hd, state)
        trace.add(outer + 1, energy, state, result.evaluations,
                  wall_ms=1e3 * (time.perf_counter() - t0),
                  s2_diag=s2_model.value(state.spins()))
        if abs(e_prev - energy) < cfg.epsilon:
            converged = True
            break
        e_prev = energy

    final = ScfState(
        iteration=len(trace.rows),
        c=u_acc,
        gamma=None,
        fock=None,
        energy=energy,
        b_min=state,
        s2_diag=s2_model.value(state.spins()),
        converged=converged,
    )
    _summarize(trace, final, cfg)
    return final, trace


def _central_gradient(fun, x, step):
    grad = np.zeros_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        grad[i] = (fun(xp) - fun(xm)) / (2.0 * step)
    return grad


@dataclass
class BoostReport:
    state: FockState
    energy: float
    aufbau_state: FockState
    aufbau_energy: float
    instability: bool

    @property
    def improvement(self):
        return self.aufbau_energy - self.energy


def run_boost(mo, cfg, n_alpha=None, n_beta=None):
    """One determinant search in a fixed MO basis; flags an internal
    instability when a determinant beats aufbau by more than 1e-9."""
    n_alpha = n_alpha if n_alpha is not None else getattr(mo, "n_alpha", None)
    n_beta = n_beta if n_beta is not None else getattr(mo, "n_beta", None)
    if n_alpha is None or n_beta is None:
        raise ConfigError("boost needs electron counts (bundle or FCIDUMP input)")
    penalties = resolve_penalties(cfg.penalties, n_alpha, n_beta)
    hd = build_diagonal_hamiltonian(mo)
    state, result = inner_solve(hd, cfg, penalties, iteration=0)
    energy = energy_of_state(hd, state)
    b_auf = aufbau_state(hd.m_spin, penalties.n_alpha_target, penalties.n_beta_target)
    e_auf = energy_of_state(hd, b_auf)
    return BoostReport(
        state=state,
        energy=energy,
        aufbau_state=b_auf,
        aufbau_energy=e_auf,
        instability=energy < e_auf - 1e-9,
    )


def _summarize(trace, final, cfg):
    trace.summary.update(
        {
            "final_energy": final.energy,
            "converged": final.converged,
            "n_iterations": final.iteration,
            "s2_diag": final.s2_diag,
            "final_bitstring": str(final.b_min),
            "epsilon": cfg.epsilon,
            "seed": cfg.budget.seed,
            "wall_ms_total": sum(row["wall_ms"] for row in trace.rows),
            "final_orbitals": None if final.c is None else final.c,
        }
    )
