"""Molecular integral containers and file I/O.

Two input formats are supported: the "scfb-1" JSON bundle (AO-basis
integrals over spatial orbitals) and standard FCIDUMP text (MO-basis,
chemist notation, 1-based indices).  Optimization models round-trip
through small JSON/edge-list files.
"""

import json
import os
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IndexOutOfRange,
    IoFailure,
    MalformedFile,
    NonPositiveOverlap,
    SymmetryViolation,
)
from .models import MaxCutInstance, QuboModel, QusoModel

SYM_TOL = 1e-12  # matrix symmetry, fixed at load time
ERI_SYM_TOL = 1e-10  # 8-fold tensor symmetry
OVERLAP_EIG_FLOOR = 1e-10


@dataclass
class IntegralBundle:
    """AO-basis integrals over spatial orbitals plus electron counts."""

    m_spatial: int
    n_alpha: int
    n_beta: int
    e_nuc: float
    overlap: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray
    c_init: np.ndarray | None = None
    gamma_init: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def validate(self):
        """Check all container invariants; raises on the first violation."""
        m = self.m_spatial
        for name, mat in (("overlap", self.overlap), ("hcore", self.hcore)):
            if mat.shape != (m, m):
                raise MalformedFile(f"{name} has shape {mat.shape}, expected ({m},{m})")
            _require_symmetric(mat, name, SYM_TOL)
        if self.eri.shape != (m, m, m, m):
            raise MalformedFile(f"eri has shape {self.eri.shape}, expected rank-4 of dim {m}")
        _require_eightfold(self.eri, ERI_SYM_TOL)
        w = np.linalg.eigvalsh(self.overlap)
        if w[0] <= OVERLAP_EIG_FLOOR:
            raise NonPositiveOverlap(
                f"smallest overlap eigenvalue {w[0]:.3e} <= {OVERLAP_EIG_FLOOR:.0e}"
            )
        if not (0 <= self.n_alpha <= m and 0 <= self.n_beta <= m):
            raise MalformedFile(
                f"electron counts ({self.n_alpha},{self.n_beta}) outside [0,{m}]"
            )
        if not np.isfinite(self.e_nuc):
            raise MalformedFile("e_nuc is not finite")
        return self


@dataclass
class MoHamiltonianData:
    """MO-basis one-electron matrix plus two-electron data (full or diagonal)."""

    m_spatial: int
    h_mo: np.ndarray
    e_core: float
    eri_mo: np.ndarray | None = None
    w_ppqq: np.ndarray | None = None
    w_pqqp: np.ndarray | None = None

    def __post_init__(self):
        if self.eri_mo is None and (self.w_ppqq is None or self.w_pqqp is None):
            raise ValueError("need either the full MO tensor or both W matrices")

    def coulomb_exchange_matrices(self):
        """(W_ppqq, W_pqqp), extracting tensor slices on demand."""
        if self.w_ppqq is None or self.w_pqqp is None:
            self.w_ppqq = np.einsum("ppqq->pq", self.eri_mo).copy()
            self.w_pqqp = np.einsum("pqqp->pq", self.eri_mo).copy()
        return self.w_ppqq, self.w_pqqp

    def validate(self):
        m = self.m_spatial
        if self.h_mo.shape != (m, m):
            raise MalformedFile(f"h_mo has shape {self.h_mo.shape}, expected ({m},{m})")
        _require_symmetric(self.h_mo, "h_mo", 1e-10)
        wc, wx = self.coulomb_exchange_matrices()
        _require_symmetric(wc, "W(pp|qq)", 1e-10)
        _require_symmetric(wx, "W(pq|qp)", 1e-10)
        d = np.abs(np.diag(wc) - np.diag(wx)).max() if m else 0.0
        if d > 1e-10:
            raise SymmetryViolation(f"W diagonals disagree by {d:.3e}", deviation=d)
        return self


def _require_symmetric(mat, name, tol):
    dev = np.abs(mat - mat.T)
    worst = float(dev.max()) if dev.size else 0.0
    if worst > tol:
        i, j = np.unravel_index(int(dev.argmax()), dev.shape)
        raise SymmetryViolation(
            f"{name} asymmetric by {worst:.3e} at ({i},{j})", indices=(int(i), int(j)), deviation=worst
        )


def _require_eightfold(eri, tol):
    perms = [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]
    for perm in perms:
        dev = np.abs(eri - eri.transpose(perm))
        worst = float(dev.max()) if dev.size else 0.0
        if worst > tol:
            idx = np.unravel_index(int(dev.argmax()), dev.shape)
            raise SymmetryViolation(
                f"eri violates 8-fold symmetry (permutation {perm}) by {worst:.3e} at {idx}",
                indices=tuple(int(k) for k in idx),
                deviation=worst,
            )


# ---------------------------------------------------------------------------
# packed-8 ERI layout

def _pair_index(i, j):
    i, j = np.maximum(i, j), np.minimum(i, j)
    return i * (i + 1) // 2 + j


def packed8_size(m):
    npair = m * (m + 1) // 2
    return npair * (npair + 1) // 2


def eri_to_packed8(eri):
    m = eri.shape[0]
    mu, nu, lam, sig = np.indices((m, m, m, m))
    idx = _pair_index(_pair_index(mu, nu), _pair_index(lam, sig))
    packed = np.zeros(packed8_size(m))
    packed[idx.ravel()] = eri.ravel()
    return packed


def packed8_to_eri(packed, m):
    if packed.size != packed8_size(m):
        raise MalformedFile(
            f"packed-8 eri has {packed.size} entries, expected {packed8_size(m)} for m={m}"
        )
    mu, nu, lam, sig = np.indices((m, m, m, m))
    idx = _pair_index(_pair_index(mu, nu), _pair_index(lam, sig))
    return packed[idx.ravel()].reshape(m, m, m, m)


# ---------------------------------------------------------------------------
# scfb-1 bundle format

def load_bundle(path, validate=True):
    """Read an "scfb-1" JSON bundle; validation can be deferred so callers
    can run the invariant checks one by one."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: not valid JSON ({exc})") from exc

    if not isinstance(doc, dict) or doc.get("format") != "scfb-1":
        raise MalformedFile(f"{path}: missing format tag 'scfb-1'")
    for key in ("m_spatial", "n_alpha", "n_beta", "e_nuc", "overlap", "hcore", "eri"):
        if key not in doc:
            raise MalformedFile(f"{path}: missing field '{key}'")

    m = int(doc["m_spatial"])

    def matrix(name):
        data = np.asarray(doc[name], dtype=float)
        if data.size != m * m:
            raise MalformedFile(f"{path}: {name} has {data.size} entries, expected {m * m}")
        return data.reshape(m, m)

    eri_doc = doc["eri"]
    if not isinstance(eri_doc, dict) or "layout" not in eri_doc or "data" not in eri_doc:
        raise MalformedFile(f"{path}: eri must be an object with 'layout' and 'data'")
    data = np.asarray(eri_doc["data"], dtype=float)
    if eri_doc["layout"] == "dense":
        if data.size != m**4:
            raise MalformedFile(f"{path}: dense eri has {data.size} entries, expected {m**4}")
        eri = data.reshape(m, m, m, m)
    elif eri_doc["layout"] == "packed8":
        eri = packed8_to_eri(data, m)
    else:
        raise MalformedFile(f"{path}: unknown eri layout {eri_doc['layout']!r}")

    bundle = IntegralBundle(
        m_spatial=m,
        n_alpha=int(doc["n_alpha"]),
        n_beta=int(doc["n_beta"]),
        e_nuc=float(doc["e_nuc"]),
        overlap=matrix("overlap"),
        hcore=matrix("hcore"),
        eri=eri,
        c_init=matrix("c_init") if doc.get("c_init") is not None else None,
        gamma_init=matrix("gamma_init") if doc.get("gamma_init") is not None else None,
        metadata=doc.get("metadata", {}),
    )
    return bundle.validate() if validate else bundle


def save_bundle(bundle, path, eri_layout="dense"):
    """Write a bundle in the "scfb-1" JSON format."""
    if eri_layout == "dense":
        eri_data = bundle.eri.ravel().tolist()
    elif eri_layout == "packed8":
        eri_data = eri_to_packed8(bundle.eri).tolist()
    else:
        raise ValueError(f"unknown eri layout {eri_layout!r}")
    doc = {
        "format": "scfb-1",
        "m_spatial": bundle.m_spatial,
        "n_alpha": bundle.n_alpha,
        "n_beta": bundle.n_beta,
        "e_nuc": bundle.e_nuc,
        "overlap": bundle.overlap.ravel().tolist(),
        "hcore": bundle.hcore.ravel().tolist(),
        "eri": {"layout": eri_layout, "data": eri_data},
        "c_init": None if bundle.c_init is None else bundle.c_init.ravel().tolist(),
        "gamma_init": None if bundle.gamma_init is None else bundle.gamma_init.ravel().tolist(),
        "metadata": bundle.metadata,
    }
    _write_text(path, json.dumps(doc))


# ---------------------------------------------------------------------------
# FCIDUMP

def load_fcidump(path, max_norb=64):
    """Parse standard FCIDUMP text into MO-basis data (full dense tensor)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    header_end = None
    for tag in ("&END", "/"):
        pos = text.upper().find(tag)
        if pos >= 0:
            header_end = pos + len(tag)
            break
    if header_end is None:
        raise MalformedFile(f"{path}: no header terminator (&END or /)")
    header, body = text[:header_end], text[header_end:]

    fields = {}
    for key, value in re.findall(r"([A-Za-z][A-Za-z0-9]*)\s*=\s*(-?\d+)", header):
        fields.setdefault(key.upper(), value)
    try:
        norb = int(fields["NORB"])
        nelec = int(fields["NELEC"])
    except (KeyError, ValueError) as exc:
        raise MalformedFile(f"{path}: header lacks NORB/NELEC") from exc
    ms2 = int(fields.get("MS2", 0))
    if norb > max_norb:
        raise MalformedFile(f"{path}: NORB={norb} exceeds dense-tensor limit {max_norb}")

    h = np.zeros((norb, norb))
    g = np.zeros((norb, norb, norb, norb))
    e_core = 0.0
    for lineno, line in enumerate(body.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise MalformedFile(f"{path}: line {lineno}: expected 'value i j k l'")
        try:
            value = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise MalformedFile(f"{path}: line {lineno}: unparsable record") from exc
        if max(i, j, k, l) > norb or min(i, j, k, l) < 0:
            raise IndexOutOfRange(f"{path}: line {lineno}: index exceeds NORB={norb}")
        if i == 0:
            e_core = value
        elif k == 0:
            if j == 0:
                raise MalformedFile(f"{path}: line {lineno}: one-electron record needs i,j > 0")
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        else:
            if min(i, j, k, l) == 0:
                raise MalformedFile(f"{path}: line {lineno}: partial zero indices")
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                g[p, q, r, s] = value

    n_beta = (nelec - ms2) // 2
    n_alpha = nelec - n_beta
    data = MoHamiltonianData(m_spatial=norb, h_mo=h, e_core=e_core, eri_mo=g)
    data.n_alpha = n_alpha
    data.n_beta = n_beta
    return data


# ---------------------------------------------------------------------------
# model files

def _fmt(x):
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


def save_model(model, path):
    """Serialize a QUSO/QUBO/MaxCut model; round-trips bit-exactly."""
    if isinstance(model, (QusoModel, QuboModel)):
        doc = {
            "kind": model.kind,
            "n": model.n,
            "offset": model.offset,
            "linear": model.linear.tolist(),
            "quadratic": [[i, j, c] for (i, j), c in sorted(model.quadratic.items())],
        }
        _write_text(path, json.dumps(doc))
    elif isinstance(model, MaxCutInstance):
        lines = [
            f"# maxcut-1 ancilla={'none' if model.ancilla is None else model.ancilla} "
            f"offset={model.value_offset!r}",
            f"{model.n_vertices} {model.n_edges}",
        ]
        for (i, j), w in sorted(model.weights.items()):
            lines.append(f"{i} {j} {_fmt(w)}")
        _write_text(path, "\n".join(lines) + "\n")
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")


def load_model(path):
    """Inverse of save_model; dispatches on file content."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedFile(f"{path}: not valid JSON ({exc})") from exc
        kind = doc.get("kind")
        if kind not in ("quso", "qubo"):
            raise MalformedFile(f"{path}: unknown model kind {kind!r}")
        cls = QusoModel if kind == "quso" else QuboModel
        model = cls(int(doc["n"]), float(doc["offset"]), np.asarray(doc["linear"], dtype=float))
        for i, j, c in doc.get("quadratic", []):
            if not i < j:
                raise MalformedFile(f"{path}: quadratic keys must satisfy i < j")
            model.quadratic[(int(i), int(j))] = float(c)
        return model
    return _load_maxcut_text(path, text)


def _load_maxcut_text(path, text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# maxcut-1"):
        raise MalformedFile(f"{path}: not a maxcut-1 edge list")
    ancilla = None
    value_offset = 0.0
    for token in lines[0].split()[2:]:
        key, _, value = token.partition("=")
        if key == "ancilla":
            ancilla = None if value == "none" else int(value)
        elif key == "offset":
            value_offset = float(value)
    try:
        n_vertices, n_edges = (int(t) for t in lines[1].split())
    except ValueError as exc:
        raise MalformedFile(f"{path}: bad counts line {lines[1]!r}") from exc
    weights = {}
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 3:
            raise MalformedFile(f"{path}: bad edge line {ln!r}")
        i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        weights[(i, j)] = w
    if len(weights) != n_edges:
        raise MalformedFile(f"{path}: header declares {n_edges} edges, found {len(weights)}")
    return MaxCutInstance(n_vertices, weights, ancilla=ancilla, value_offset=value_offset)


def _write_text(path, text):
    try:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
