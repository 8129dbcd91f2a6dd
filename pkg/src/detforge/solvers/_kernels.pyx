# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled solver kernels; semantics identical to _kernels_py.

Compiled with -ffp-contract=off so the float64 arithmetic matches the
numpy fallback bit for bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True


def anneal_run(double[:, ::1] coupling, cnp.int64_t[::1] z, double[::1] h,
               double core, double[::1] thresholds, Py_ssize_t n_sweeps):
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t s, i, j, idx = 0
    cdef double delta, factor
    cdef cnp.int64_t z_old

    best_z_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] best_z = best_z_arr
    for j in range(n):
        best_z[j] = z[j]
    cdef double best_core = core

    for s in range(n_sweeps):
        for i in range(n):
            delta = -2.0 * z[i] * h[i]
            if delta <= 0.0 or delta < thresholds[idx]:
                z_old = z[i]
                z[i] = -z_old
                core += delta
                factor = -2.0 * z_old
                for j in range(n):
                    h[j] += factor * coupling[j, i]
                if core < best_core:
                    best_core = core
                    for j in range(n):
                        best_z[j] = z[j]
            idx += 1
    return best_z_arr, best_core, n_sweeps * n


def tabu_run(double[:, ::1] coupling, cnp.int64_t[::1] z, double[::1] h,
             double core, Py_ssize_t n_iter, Py_ssize_t tenure):
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t t, i, j, best_i
    cdef double delta, best_delta, factor
    cdef cnp.int64_t z_old
    cdef long evaluations = 0

    best_z_arr = np.empty(n, dtype=np.int64)
    tabu_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] best_z = best_z_arr
    cdef cnp.int64_t[::1] tabu_until = tabu_arr
    for j in range(n):
        best_z[j] = z[j]
    cdef double best_core = core

    for t in range(n_iter):
        best_i = -1
        best_delta = 0.0
        evaluations += n
        for i in range(n):
            delta = -2.0 * z[i] * h[i]
            if tabu_until[i] <= t or core + delta < best_core:
                if best_i < 0 or delta < best_delta:
                    best_i = i
                    best_delta = delta
        if best_i < 0:
            continue
        z_old = z[best_i]
        z[best_i] = -z_old
        core += best_delta
        factor = -2.0 * z_old
        for j in range(n):
            h[j] += factor * coupling[j, best_i]
        tabu_until[best_i] = t + tenure
        if core < best_core:
            best_core = core
            for j in range(n):
                best_z[j] = z[j]
    return best_z_arr, best_core, evaluations
