#!/usr/bin/env python3
"""Benchmark the compiled solver kernels against the pure-Python fallback.

Both backends run identical arithmetic on identical random streams, so the
check column must read "identical"; the speedup column is the point.

    python3 benchmarks/bench_kernels.py [--sizes 32 64 128]
"""

import argparse
import time

import numpy as np

import detforge.solvers.anneal as anneal_mod
import detforge.solvers.tabu as tabu_mod
from detforge.models import QusoModel
from detforge.solvers import SolverBudget, _kernels_py
from detforge.solvers._backend import HAVE_COMPILED, kernels


def random_model(rng, n):
    model = QusoModel(n, offset=0.0, linear=rng.standard_normal(n))
    for i in range(n):
        for j in range(i + 1, n):
            model.quadratic[(i, j)] = float(rng.standard_normal())
    return model


def run(fn, model, budget, backend):
    anneal_mod.kernels = backend
    tabu_mod.kernels = backend
    t0 = time.perf_counter()
    result = fn(model, budget)
    return time.perf_counter() - t0, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128])
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--sweeps", type=int, default=2000)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernels unavailable; nothing to compare")
        return

    rng = np.random.default_rng(0)
    print(f"{'solver':8s} {'n':>5s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}  check")
    for n in args.sizes:
        model = random_model(rng, n)
        budget = SolverBudget(seed=1, restarts=args.restarts, sweeps=args.sweeps)
        for name, fn in (
            ("anneal", anneal_mod.simulated_annealing),
            ("tabu", tabu_mod.tabu_search),
        ):
            try:
                t_c, r_c = run(fn, model, budget, kernels)
                t_p, r_p = run(fn, model, budget, _kernels_py)
            finally:
                anneal_mod.kernels = kernels
                tabu_mod.kernels = kernels
            same = np.array_equal(r_c.assignment, r_p.assignment) and r_c.value == r_p.value
            print(
                f"{name:8s} {n:5d} {t_c:9.3f}s {t_p:9.3f}s {t_p / t_c:7.1f}x  "
                f"{'identical' if same else 'MISMATCH'}"
            )


if __name__ == "__main__":
    main()
