"""Writers for scfb-1 bundles, FCIDUMP files and reference-energy metadata.

Production integrals and references come from the PySCF backend; the
package's own integral engine serves as an independent cross-check in the
test suite.
"""

import json
import subprocess
import tempfile
from pathlib import Path

import numpy as np

from .pyscf_backend import compute_system, reference_energies  # noqa: F401

EXPORTER_VERSION = "scfb-exporter 0.1.0"


def pair_index(i, j):
    i, j = max(i, j), min(i, j)
    return i * (i + 1) // 2 + j


def eri_packed8(eri):
    def pairs(i, j):
        hi, lo = np.maximum(i, j), np.minimum(i, j)
        return hi * (hi + 1) // 2 + lo

    m = eri.shape[0]
    mu, nu, lam, sig = np.indices((m, m, m, m))
    idx = pairs(pairs(mu, nu), pairs(lam, sig))
    npair = m * (m + 1) // 2
    packed = np.zeros(npair * (npair + 1) // 2)
    packed[idx.ravel()] = eri.ravel()
    return packed


def eri_canonicalize(eri):
    """Exact 8-fold symmetry via the packed canonical representative; the
    raw tensor is symmetric only to roundoff."""
    m = eri.shape[0]
    packed = eri_packed8(eri)
    mu, nu, lam, sig = np.indices((m, m, m, m))

    def pairs(i, j):
        hi, lo = np.maximum(i, j), np.minimum(i, j)
        return hi * (hi + 1) // 2 + lo

    idx = pairs(pairs(mu, nu), pairs(lam, sig))
    return packed[idx.ravel()].reshape(m, m, m, m)


def write_bundle(spec, ints, metadata, path, eri_layout=None):
    m = ints["n_ao"]
    if eri_layout is None:
        eri_layout = "dense" if m <= 16 else "packed8"
    eri = eri_canonicalize(ints["eri"])
    if eri_layout == "dense":
        eri_data = eri.ravel().tolist()
    else:
        eri_data = eri_packed8(eri).tolist()
    doc = {
        "format": "scfb-1",
        "m_spatial": m,
        "n_alpha": spec.n_alpha,
        "n_beta": spec.n_beta,
        "e_nuc": ints["e_nuc"],
        "overlap": ints["overlap"].ravel().tolist(),
        "hcore": ints["hcore"].ravel().tolist(),
        "eri": {"layout": eri_layout, "data": eri_data},
        "c_init": None,
        "gamma_init": ints["gamma_init"].ravel().tolist(),
        "metadata": {
            "generator": EXPORTER_VERSION,
            "label": spec.label,
            "geometry_angstrom": spec.geometry,
            "basis": spec.basis,
            "charge": spec.charge,
            "multiplicity": spec.multiplicity,
            **metadata,
        },
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return path


def ao_to_mo_full(eri, c):
    t = np.tensordot(c, eri, axes=(0, 0))
    t = np.tensordot(c, t, axes=(0, 1)).transpose(1, 0, 2, 3)
    t = np.tensordot(t, c, axes=(2, 0)).transpose(0, 1, 3, 2)
    return np.tensordot(t, c, axes=(3, 0))


def write_fcidump(spec, ints, c, path, provenance, tol=1e-12):
    """MO-basis integrals for the supplied orbital set, standard FCIDUMP."""
    m = ints["n_ao"]
    h_mo = c.T @ ints["hcore"] @ c
    g_mo = ao_to_mo_full(ints["eri"], c)
    nelec = spec.n_electrons
    lines = [
        f" &FCI NORB={m:4d},NELEC={nelec:3d},MS2=0,",
        "  ORBSYM=" + "1," * m,
        "  ISYM=1,",
        " &END",
    ]
    for i in range(m):
        for j in range(i + 1):
            for k in range(i + 1):
                for l in range(k + 1):
                    if pair_index(i, j) < pair_index(k, l):
                        continue
                    value = g_mo[i, j, k, l]
                    if abs(value) > tol:
                        lines.append(f"{float(value)!r} {i+1} {j+1} {k+1} {l+1}")
    for i in range(m):
        for j in range(i + 1):
            if abs(h_mo[i, j]) > tol:
                lines.append(f"{float(h_mo[i, j])!r} {i+1} {j+1} 0 0")
    lines.append(f"{float(ints['e_nuc'])!r} 0 0 0 0")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")
    return {"orbital_provenance": provenance, "path": str(path)}


def run_primary_scf(bundle_path, algorithm="2", solver="tabu", seed=1, workdir=None):
    """Invoke the installed detforge CLI (the primary's external interface);
    returns the parsed summary document."""
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        trace = Path(tmp) / "trace.csv"
        proc = subprocess.run(
            [
                "detforge", "scf", "--bundle", str(bundle_path),
                "--algorithm", algorithm, "--solver", solver,
                "--penalties", "number,spin", "--seed", str(seed),
                "--trace", str(trace),
            ],
            capture_output=True,
            text=True,
        )
        if proc.returncode not in (0, 2):
            raise RuntimeError(f"detforge scf failed: {proc.stderr}")
        summary = json.loads((Path(tmp) / "trace.summary.json").read_text())
        summary["stdout_energy"] = float(proc.stdout.split()[0])
        summary["exit_code"] = proc.returncode
    return summary
