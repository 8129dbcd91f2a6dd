"""Batch command-line front end.

Subcommands: scf (run algorithm 1/2/boost), solve (standalone model solve),
export (bundle/FCIDUMP -> qubo/maxcut/xorsat files), validate (input checks).
Exit codes: 0 success/converged, 2 not converged within max-iter, 1 input or
usage error.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import integral_io, mappings
from .errors import DetforgeError
from .hamiltonian import PenaltySpec, apply_penalties, build_diagonal_hamiltonian, jw_map
from .models import MaxCutInstance
from .scf import (
    ScfConfig,
    initial_coefficients,
    resolve_penalties,
    run_algorithm1,
    run_algorithm2,
    run_boost,
)
from .orbital_rotation import ao_to_mo
from .solvers import METHODS, SolverBudget, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; fold those into the
        # documented input-error code (0 stays 0 for --help)
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    if args.command is None:
        parser.print_help()
        return EXIT_ERROR
    try:
        return args.func(args)
    except DetforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _build_parser():
    parser = argparse.ArgumentParser(prog="detforge", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    parser.set_defaults(command=None)

    scf = sub.add_parser("scf", help="run an SCF loop or the boost mode")
    _add_input_flags(scf)
    scf.add_argument("--algorithm", choices=["1", "2", "boost"], default=None)
    scf.add_argument("--solver", choices=list(METHODS), default=None)
    scf.add_argument("--penalties", default=None,
                     help="comma list of number,spin,s2report ('spin' implies 'number')")
    scf.add_argument("--lambda", dest="lam", default=None, help="penalty weight or 'auto'")
    scf.add_argument("--tol", type=float, default=None, help="convergence threshold (Hartree)")
    scf.add_argument("--max-iter", type=int, default=None)
    scf.add_argument("--seed", type=int, default=None)
    scf.add_argument("--trace", default=None, help="trace CSV path (summary JSON alongside)")
    scf.add_argument("--config", default=None, help="JSON config file; flags win")
    scf.add_argument("--threads", type=int, default=None,
                     help="solver parallelism hint (DETFORGE_THREADS fallback); "
                          "never changes results")
    scf.set_defaults(func=cmd_scf)

    slv = sub.add_parser("solve", help="solve a stored model file")
    slv.add_argument("--model", required=True, help="model JSON or MaxCut edge list")
    slv.add_argument("--method", choices=list(METHODS), default="brute")
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--restarts", type=int, default=None)
    slv.add_argument("--sweeps", type=int, default=None)
    slv.add_argument("--hyperplanes", type=int, default=None)
    slv.set_defaults(func=cmd_solve)

    exp = sub.add_parser("export", help="write qubo/maxcut/xorsat files")
    _add_input_flags(exp)
    exp.add_argument("--format", choices=["qubo", "maxcut", "xorsat"], required=True)
    exp.add_argument("--out", required=True)
    exp.add_argument("--penalties", default=None)
    exp.add_argument("--lambda", dest="lam", default=None)
    exp.set_defaults(func=cmd_export)

    val = sub.add_parser("validate", help="run input invariant checks")
    _add_input_flags(val)
    val.set_defaults(func=cmd_validate)
    return parser


def _add_input_flags(sub):
    sub.add_argument("--bundle", default=None, help="scfb-1 JSON bundle")
    sub.add_argument("--fcidump", default=None, help="FCIDUMP file")


def _load_input(args):
    if bool(args.bundle) == bool(args.fcidump):
        raise DetforgeError("supply exactly one of --bundle / --fcidump")
    if args.bundle:
        return integral_io.load_bundle(args.bundle), None
    return None, integral_io.load_fcidump(args.fcidump)


def _parse_penalties(tokens, lam):
    spec = PenaltySpec()
    if lam is not None:
        spec.lam = "auto" if lam == "auto" else float(lam)
    if not tokens:
        return spec, False
    want_report = False
    for token in tokens.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "number":
            spec.n_alpha_target = -1  # placeholder: filled from the molecule
            spec.n_beta_target = -1
        elif token == "spin":
            spec.s2_zero = True
            spec.n_alpha_target = -1
            spec.n_beta_target = -1
        elif token == "s2report":
            want_report = True
        else:
            raise DetforgeError(f"unknown penalty token {token!r}")
    return spec, want_report


def _fill_targets(spec, n_alpha, n_beta):
    if spec.n_alpha_target == -1:
        spec.n_alpha_target = n_alpha
    if spec.n_beta_target == -1:
        spec.n_beta_target = n_beta
    return spec


def _merge_config(args):
    """Config file values fill flags the user left unset."""
    defaults = {
        "algorithm": "2", "solver": "brute", "penalties": None, "lam": "auto",
        "tol": 1e-8, "max_iter": 50, "seed": 0, "trace": None, "threads": None,
    }
    merged = {}
    file_values = {}
    if args.config:
        with open(args.config) as fh:
            file_values = json.load(fh)
    for key, fallback in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = fallback
    if merged["threads"] is None:
        merged["threads"] = int(os.environ.get("DETFORGE_THREADS", "0")) or None
    return merged


def cmd_scf(args):
    bundle, mo = _load_input(args)
    opts = _merge_config(args)
    spec, _ = _parse_penalties(opts["penalties"], opts["lam"])
    budget = SolverBudget(seed=int(opts["seed"]))
    cfg = ScfConfig(
        algorithm=str(opts["algorithm"]),
        solver=opts["solver"],
        budget=budget,
        penalties=spec,
        epsilon=float(opts["tol"]),
        max_iter=int(opts["max_iter"]),
        threads=opts["threads"],
    )
    if bundle is not None:
        n_alpha, n_beta = bundle.n_alpha, bundle.n_beta
    else:
        n_alpha, n_beta = mo.n_alpha, mo.n_beta
    _fill_targets(cfg.penalties, n_alpha, n_beta)

    if cfg.algorithm == "boost":
        if mo is None:
            mo = ao_to_mo(bundle, initial_coefficients(bundle))
            mo.n_alpha, mo.n_beta = n_alpha, n_beta
        report = run_boost(mo, cfg, n_alpha=n_alpha, n_beta=n_beta)
        print(f"{report.energy:.6f}")
        print(f"aufbau {report.aufbau_energy:.6f}")
        print(f"instability {'yes' if report.instability else 'no'}")
        return EXIT_OK

    if cfg.algorithm == "2":
        if bundle is None:
            raise DetforgeError("algorithm 2 needs an AO bundle (--bundle)")
        state, trace = run_algorithm2(bundle, cfg)
    else:
        if bundle is not None:
            c0 = initial_coefficients(bundle)
            mo = ao_to_mo(bundle, c0, full=True)
        state, trace = run_algorithm1(mo, cfg, n_alpha=n_alpha, n_beta=n_beta)

    trace_path = opts["trace"] or "scf_trace.csv"
    trace.write_csv(trace_path)
    trace.write_summary(_summary_path(trace_path))
    print(f"{state.energy:.6f}")
    if not state.converged:
        print(f"not converged in {state.iteration} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _summary_path(trace_path):
    stem, ext = os.path.splitext(trace_path)
    return stem + ".summary.json"


def cmd_solve(args):
    model = integral_io.load_model(args.model)
    kwargs = {"seed": args.seed}
    if args.restarts is not None:
        kwargs["restarts"] = args.restarts
    if args.sweeps is not None:
        kwargs["sweeps"] = args.sweeps
    if args.hyperplanes is not None:
        kwargs["hyperplanes"] = args.hyperplanes
    budget = SolverBudget(**kwargs)
    result = solve(model, args.method, budget)
    print(f"value {result.value!r}")
    print("assignment " + " ".join(str(int(v)) for v in result.assignment))
    if result.sdp_bound is not None:
        print(f"sdp_bound {result.sdp_bound!r}")
        print(f"ratio_certificate {result.ratio_certificate!r}")
    return EXIT_OK


def cmd_export(args):
    bundle, mo = _load_input(args)
    if mo is None:
        mo = ao_to_mo(bundle, initial_coefficients(bundle))
        n_alpha, n_beta = bundle.n_alpha, bundle.n_beta
    else:
        n_alpha, n_beta = mo.n_alpha, mo.n_beta
    spec, _ = _parse_penalties(args.penalties, args.lam)
    _fill_targets(spec, n_alpha, n_beta)
    quso = jw_map(build_diagonal_hamiltonian(mo))
    if spec.any_active():
        quso = apply_penalties(quso, spec)
    if args.format == "qubo":
        integral_io.save_model(mappings.quso_to_qubo(quso), args.out)
    elif args.format == "maxcut":
        integral_io.save_model(mappings.quso_to_maxcut(quso), args.out)
    else:
        mappings.export_xorsat(mappings.quso_to_maxcut(quso), args.out)
    print(f"wrote {args.format} to {args.out}")
    return EXIT_OK


def cmd_validate(args):
    checks = []

    def run_check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:  # report, do not abort remaining checks
            checks.append((name, False, str(exc)))

    if bool(args.bundle) == bool(args.fcidump):
        raise DetforgeError("supply exactly one of --bundle / --fcidump")

    if args.bundle:
        bundle = integral_io.load_bundle(args.bundle, validate=False)
        from .integral_io import ERI_SYM_TOL, SYM_TOL, _require_eightfold, _require_symmetric

        run_check("overlap symmetric",
                  lambda: _require_symmetric(bundle.overlap, "overlap", SYM_TOL))
        run_check("hcore symmetric",
                  lambda: _require_symmetric(bundle.hcore, "hcore", SYM_TOL))
        run_check("eri 8-fold symmetry", lambda: _require_eightfold(bundle.eri, ERI_SYM_TOL))
        run_check("overlap positive definite", lambda: np.linalg.cholesky(bundle.overlap))
        run_check("all invariants (full validation)", bundle.validate)
    else:
        run_check("fcidump parse", lambda: integral_io.load_fcidump(args.fcidump))
        try:
            mo = integral_io.load_fcidump(args.fcidump)
            run_check("MO data invariants", lambda: mo.validate())
        except DetforgeError:
            pass

    failed = [c for c in checks if not c[1]]
    for name, ok, message in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {message}" if message else ""))
    return EXIT_OK if not failed else EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
