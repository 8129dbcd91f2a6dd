"""Pure-Python (numpy) fallback for the hot solver loops.

Mirrors _kernels.pyx operation for operation: both backends receive the
same precomputed random streams and initial local fields and perform the
same float64 arithmetic in the same order, so results are bit-identical.
"""

import numpy as np

COMPILED = False


def anneal_run(coupling, z, h, core, thresholds, n_sweeps):
    """Single-flip Metropolis with a fixed 0..n-1 sweep order.

    ``h`` is the precomputed local field linear + coupling @ z and ``core``
    the model value minus its offset; ``thresholds`` holds T * (-log u) per
    proposal so the kernel needs no transcendentals.  Returns
    (best_z, best_core, evaluations).
    """
    n = z.size
    core = float(core)
    best_core = core
    best_z = z.copy()
    idx = 0
    for _ in range(n_sweeps):
        for i in range(n):
            delta = -2.0 * z[i] * h[i]
            if delta <= 0.0 or delta < thresholds[idx]:
                z_old = z[i]
                z[i] = -z_old
                core += delta
                h += (-2.0 * z_old) * coupling[:, i]
                if core < best_core:
                    best_core = core
                    best_z = z.copy()
            idx += 1
    return best_z, best_core, n_sweeps * n


def tabu_run(coupling, z, h, core, n_iter, tenure):
    """Recency-tabu single-flip search with aspiration on the incumbent."""
    n = z.size
    core = float(core)
    best_core = core
    best_z = z.copy()
    tabu_until = np.full(n, -1, dtype=np.int64)
    evaluations = 0
    for t in range(n_iter):
        deltas = -2.0 * z * h
        evaluations += n
        admissible = (tabu_until <= t) | (core + deltas < best_core)
        if not admissible.any():
            continue
        candidate = np.where(admissible, deltas, np.inf)
        i = int(np.argmin(candidate))
        delta = float(deltas[i])
        z_old = z[i]
        z[i] = -z_old
        core += delta
        h += (-2.0 * z_old) * coupling[:, i]
        tabu_until[i] = t + tenure
        if core < best_core:
            best_core = core
            best_z = z.copy()
    return best_z, best_core, evaluations
