"""Tabu search: steepest admissible single flips with a recency list."""

import time

import numpy as np

from .base import SolverResult, as_spin_model, model_arrays
from ._backend import kernels


def _default_iterations(n):
    return max(1000, 50 * n)


def _default_tenure(n):
    return max(4, min(20, n // 4))


def tabu_search(model, budget):
    """Best-seen assignment over seeded restarts; aspiration admits tabu
    moves that improve on the incumbent."""
    spin_model, to_native = as_spin_model(model)
    n = spin_model.n
    linear, coupling = model_arrays(spin_model)
    n_iter = budget.iterations if budget.iterations is not None else _default_iterations(n)
    tenure = budget.tabu_tenure if budget.tabu_tenure is not None else _default_tenure(n)
    tenure = min(tenure, max(1, n - 1))

    best_core = np.inf
    best_z = None
    evaluations = 0
    history = []
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    for child in budget.restart_seeds():
        rng = np.random.default_rng(child)
        z = rng.choice(np.array([-1, 1], dtype=np.int64), size=n)
        cz = coupling @ z.astype(float)
        h = linear + cz
        core = float(linear @ z) + 0.5 * float(z @ cz)
        bz, bcore, evals = kernels.tabu_run(coupling, z, h, core, n_iter, tenure)
        evaluations += evals
        history.append(spin_model.offset + bcore)
        if bcore < best_core:
            best_core = bcore
            best_z = bz
        if deadline is not None and time.monotonic() > deadline:
            break
    assignment = to_native(best_z)
    return SolverResult(
        assignment=assignment,
        value=model.value(assignment),
        evaluations=evaluations,
        history=history,
    )
