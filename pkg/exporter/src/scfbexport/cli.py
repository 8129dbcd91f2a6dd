"""Command line driver: molecule flags -> scfb-1 bundle / FCIDUMP files."""

import argparse
import sys

from .export import compute_system, reference_energies, write_bundle, write_fcidump
from .molecule import MoleculeSpec


def main(argv=None):
    parser = argparse.ArgumentParser(prog="scfb-export", description=__doc__)
    parser.add_argument("--geometry", required=True, help='"El x y z; El x y z" (Angstrom)')
    parser.add_argument("--basis", required=True)
    parser.add_argument("--charge", type=int, default=0)
    parser.add_argument("--multiplicity", type=int, default=1)
    parser.add_argument("--label", default="")
    parser.add_argument("--bundle-out", default=None, help="scfb-1 JSON path")
    parser.add_argument("--fcidump-out", default=None, help="FCIDUMP path")
    parser.add_argument(
        "--orbitals", choices=["rhf", "so-rhf"], default="rhf",
        help="orbital set written to the FCIDUMP",
    )
    parser.add_argument("--eri-layout", choices=["dense", "packed8"], default=None)
    args = parser.parse_args(argv)

    if not (args.bundle_out or args.fcidump_out):
        parser.error("nothing to do: supply --bundle-out and/or --fcidump-out")

    spec = MoleculeSpec(
        geometry=args.geometry,
        basis=args.basis,
        charge=args.charge,
        multiplicity=args.multiplicity,
        label=args.label or args.basis,
    )
    ints = compute_system(spec)
    metadata, c_rhf, c_so = reference_energies(spec, ints)
    for key in ("rhf_energy", "so_rhf_energy"):
        print(f"{key} {metadata[key]:.6f}")

    if args.bundle_out:
        write_bundle(spec, ints, metadata, args.bundle_out, eri_layout=args.eri_layout)
        print(f"wrote bundle {args.bundle_out}")
    if args.fcidump_out:
        c = c_rhf if args.orbitals == "rhf" else c_so
        write_fcidump(spec, ints, c, args.fcidump_out, provenance=f"{args.orbitals} orbitals")
        print(f"wrote fcidump {args.fcidump_out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
