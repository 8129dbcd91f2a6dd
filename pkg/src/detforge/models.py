"""Optimization model containers: QUSO, QUBO, MaxCut, PUBO and Fock states.

Conventions used throughout:

* spin variables z_i take values +1/-1; occupation bits b_i take 0/1 and
  relate by z = 1 - 2b (occupied orbital <-> z = -1),
* quadratic coefficients are stored sparsely with ordered keys i < j,
* spin orbitals interleave as s = 2p + sigma (sigma = 0 alpha, 1 beta).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SizeMismatch


def bits_to_spins(bits):
    """Occupation vector {0,1} -> spin vector {+1,-1}."""
    b = np.asarray(bits)
    return 1 - 2 * b.astype(np.int64)


def spins_to_bits(spins):
    """Spin vector {+1,-1} -> occupation vector {0,1}."""
    z = np.asarray(spins)
    return ((1 - z.astype(np.int64)) // 2).astype(np.int64)


@dataclass
class FockState:
    """Single Slater determinant as a spin-orbital occupation vector."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.int64)
        if self.bits.ndim != 1 or not np.isin(self.bits, (0, 1)).all():
            raise ValueError("occupation vector must be one-dimensional 0/1")

    @property
    def m_spin(self):
        return self.bits.size

    def spins(self):
        return bits_to_spins(self.bits)

    @classmethod
    def from_spins(cls, spins):
        return cls(spins_to_bits(spins))

    def counts(self):
        """(n_alpha, n_beta) under the interleaved convention."""
        return int(self.bits[0::2].sum()), int(self.bits[1::2].sum())

    def __str__(self):
        return "".join(str(int(b)) for b in self.bits)

    def __eq__(self, other):
        return isinstance(other, FockState) and np.array_equal(self.bits, other.bits)


def aufbau_state(m_spin, n_alpha, n_beta):
    """Occupy the lowest n_alpha even and n_beta odd spin orbitals."""
    bits = np.zeros(m_spin, dtype=np.int64)
    bits[0 : 2 * n_alpha : 2] = 1
    bits[1 : 2 * n_beta : 2] = 1
    return FockState(bits)


class _QuadraticModel:
    """Shared storage/evaluation for QUSO and QUBO models."""

    def __init__(self, n, offset=0.0, linear=None, quadratic=None):
        self.n = int(n)
        self.offset = float(offset)
        self.linear = np.zeros(self.n) if linear is None else np.asarray(linear, dtype=float).copy()
        if self.linear.shape != (self.n,):
            raise SizeMismatch(f"linear vector has shape {self.linear.shape}, expected ({self.n},)")
        self.quadratic = {}
        if quadratic:
            for (i, j), c in quadratic.items() if isinstance(quadratic, dict) else quadratic:
                self.add_quadratic(i, j, c)
        self._check_finite()

    def _check_finite(self):
        if not (np.isfinite(self.offset) and np.isfinite(self.linear).all()):
            raise ValueError("model coefficients must be finite")
        for c in self.quadratic.values():
            if not np.isfinite(c):
                raise ValueError("model coefficients must be finite")

    def add_quadratic(self, i, j, coeff):
        i, j = int(i), int(j)
        if i == j:
            raise ValueError("self-coupling (i == j) is not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise SizeMismatch(f"index pair ({i},{j}) outside [0,{self.n})")
        key = (i, j) if i < j else (j, i)
        new = self.quadratic.get(key, 0.0) + float(coeff)
        if new == 0.0:
            self.quadratic.pop(key, None)
        else:
            self.quadratic[key] = new

    def coefficient_norm(self):
        """1-norm of linear and quadratic coefficients, offset excluded."""
        return float(np.abs(self.linear).sum() + sum(abs(c) for c in self.quadratic.values()))

    def dense_coupling(self):
        """Symmetric coupling matrix with zero diagonal (both triangles filled)."""
        q = np.zeros((self.n, self.n))
        for (i, j), c in self.quadratic.items():
            q[i, j] = c
            q[j, i] = c
        return q

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise SizeMismatch(f"assignment has shape {x.shape}, expected ({self.n},)")
        v = self.offset + float(self.linear @ x)
        for (i, j), c in self.quadratic.items():
            v += c * x[i] * x[j]
        return float(v)

    def values(self, xs):
        """Vectorized evaluation over rows of ``xs``."""
        xs = np.asarray(xs, dtype=float)
        q = self.dense_coupling()
        return self.offset + xs @ self.linear + 0.5 * np.einsum("bi,ij,bj->b", xs, q, xs)

    def scaled(self, factor):
        out = type(self)(self.n, self.offset * factor, self.linear * factor)
        for key, c in self.quadratic.items():
            out.quadratic[key] = c * factor
        return out

    def add_model(self, other, weight=1.0):
        """In-place accumulation of ``weight * other``."""
        if other.n != self.n:
            raise SizeMismatch(f"cannot combine models of size {self.n} and {other.n}")
        self.offset += weight * other.offset
        self.linear += weight * other.linear
        for (i, j), c in other.quadratic.items():
            self.add_quadratic(i, j, weight * c)
        return self

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.n == other.n
            and self.offset == other.offset
            and np.array_equal(self.linear, other.linear)
            and self.quadratic == other.quadratic
        )

    def __repr__(self):
        return (
            f"{type(self).__name__}(n={self.n}, offset={self.offset!r}, "
            f"nonzero_linear={int(np.count_nonzero(self.linear))}, "
            f"quadratic_terms={len(self.quadratic)})"
        )


class QusoModel(_QuadraticModel):
    """offset + sum_i linear_i z_i + sum_{i<j} quadratic_ij z_i z_j over z in {+-1}^n."""

    kind = "quso"

    def value_bits(self, bits):
        return self.value(bits_to_spins(bits))


class QuboModel(_QuadraticModel):
    """offset + sum_i linear_i x_i + sum_{i<j} quadratic_ij x_i x_j over x in {0,1}^n."""

    kind = "qubo"


@dataclass
class MaxCutInstance:
    """Weighted graph; cut value = sum of weights of edges crossing the partition.

    ``ancilla`` marks the vertex absorbing linear terms of a converted QUSO
    (vertex 0 by construction); ``value_offset`` is the constant K satisfying
    CutValue(z) = K - QUSO(z) on the z_ancilla = +1 sector.
    """

    n_vertices: int
    weights: dict = field(default_factory=dict)
    ancilla: int | None = None
    value_offset: float = 0.0

    def __post_init__(self):
        clean = {}
        for (i, j), w in self.weights.items():
            i, j = int(i), int(j)
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise SizeMismatch(f"edge ({i},{j}) outside [0,{self.n_vertices})")
            key = (i, j) if i < j else (j, i)
            w = float(w)
            if not np.isfinite(w):
                raise ValueError("edge weights must be finite")
            if w != 0.0:
                clean[key] = clean.get(key, 0.0) + w
        self.weights = clean

    @property
    def n_edges(self):
        return len(self.weights)

    def dense_weights(self):
        a = np.zeros((self.n_vertices, self.n_vertices))
        for (i, j), w in self.weights.items():
            a[i, j] = w
            a[j, i] = w
        return a

    def cut_value(self, z):
        z = np.asarray(z)
        if z.shape != (self.n_vertices,):
            raise SizeMismatch(f"assignment has shape {z.shape}, expected ({self.n_vertices},)")
        return float(sum(w for (i, j), w in self.weights.items() if z[i] != z[j]))

    def cut_values(self, zs):
        zs = np.asarray(zs, dtype=float)
        total = sum(self.weights.values())
        a = self.dense_weights()
        # cut = sum_{i<j} w_ij (1 - z_i z_j)/2
        return 0.5 * total - 0.25 * np.einsum("bi,ij,bj->b", zs, a, zs)

    def negative_weight_sum(self):
        return float(sum(w for w in self.weights.values() if w < 0))

    def __eq__(self, other):
        return (
            isinstance(other, MaxCutInstance)
            and self.n_vertices == other.n_vertices
            and self.ancilla == other.ancilla
            and self.value_offset == other.value_offset
            and self.weights == other.weights
        )


class PuboModel:
    """Polynomial over binary variables: map from sorted index tuples to coefficients."""

    def __init__(self, n, terms=None):
        self.n = int(n)
        self.terms = {}
        if terms:
            for key, c in terms.items():
                self.add_term(key, c)

    def add_term(self, indices, coeff):
        key = tuple(sorted(set(int(i) for i in indices)))
        if len(key) != len(tuple(indices)):
            raise ValueError(f"term indices must be distinct: {indices}")
        if key and not (0 <= key[0] and key[-1] < self.n):
            raise SizeMismatch(f"term {key} outside [0,{self.n})")
        new = self.terms.get(key, 0.0) + float(coeff)
        if new == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def degree(self):
        return max((len(k) for k in self.terms), default=0)

    def value(self, x):
        x = np.asarray(x)
        v = 0.0
        for key, c in self.terms.items():
            v += c * np.prod(x[list(key)]) if key else c
        return float(v)

    def __eq__(self, other):
        return isinstance(other, PuboModel) and self.n == other.n and self.terms == other.terms
