"""Simulated annealing: single-flip Metropolis under a geometric schedule.

Default temperatures follow the usual sampler heuristics: hot enough that
the largest possible single-flip step is accepted freely, cold enough that
the smallest nonzero coefficient is resolved.  Penalized chemistry models
mix coefficient scales across several orders of magnitude, which is why the
bounds derive from the model rather than a fixed ratio.
"""

import time

import numpy as np

from .base import SolverResult, as_spin_model, model_arrays
from ._backend import kernels


def default_temperature_range(linear, coupling):
    flip_scale = 2.0 * (np.abs(linear) + np.abs(coupling).sum(axis=1))
    t_hi = float(flip_scale.max()) if flip_scale.size else 1.0
    magnitudes = np.concatenate([np.abs(linear), np.abs(coupling).ravel()])
    nonzero = magnitudes[magnitudes > 0]
    t_lo = float(nonzero.min()) / np.log(100.0) if nonzero.size else 1.0
    if t_hi <= 0.0:
        t_hi = 1.0
    return t_hi, min(t_lo, t_hi)


def simulated_annealing(model, budget):
    """Best-seen assignment over seeded restarts; deterministic for a given
    (seed, restarts, sweeps) regardless of scheduling."""
    spin_model, to_native = as_spin_model(model)
    n = spin_model.n
    linear, coupling = model_arrays(spin_model)

    t_hi_auto, t_lo_auto = default_temperature_range(linear, coupling)
    t_hi = budget.t_initial if budget.t_initial is not None else t_hi_auto
    t_lo = budget.t_final if budget.t_final is not None else t_lo_auto
    t_lo = min(t_lo, t_hi)
    temps = np.geomspace(t_hi, t_lo, budget.sweeps)
    per_proposal_temps = np.repeat(temps, n)

    best_core = np.inf
    best_z = None
    evaluations = 0
    history = []
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    for child in budget.restart_seeds():
        rng = np.random.default_rng(child)
        z = rng.choice(np.array([-1, 1], dtype=np.int64), size=n)
        thresholds = per_proposal_temps * (-np.log(rng.random(budget.sweeps * n)))
        cz = coupling @ z.astype(float)
        h = linear + cz
        core = float(linear @ z) + 0.5 * float(z @ cz)
        bz, bcore, evals = kernels.anneal_run(coupling, z, h, core, thresholds, budget.sweeps)
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
