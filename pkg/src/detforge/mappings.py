"""Conversions between QUSO, QUBO, MaxCut and export formats.

The QUSO -> MaxCut mapping adds one ancilla vertex (id 0) absorbing the
linear terms; for every assignment with z_ancilla = +1,
CutValue(z) = value_offset - QUSO(z), and the z_ancilla = -1 sector holds
the bitwise-not copies of the same spectrum.
"""

import numpy as np

from .errors import IoFailure
from .integral_io import _fmt, _write_text
from .models import FockState, MaxCutInstance, PuboModel, QuboModel, QusoModel, spins_to_bits


def quso_to_qubo(m):
    """Substitute z_i = 1 - 2 x_i; values agree on all assignments."""
    out = QuboModel(m.n)
    row = np.zeros(m.n)
    qsum = 0.0
    for (i, j), c in m.quadratic.items():
        row[i] += c
        row[j] += c
        qsum += c
        out.quadratic[(i, j)] = 4.0 * c
    out.offset = m.offset + float(m.linear.sum()) + qsum
    out.linear = -2.0 * m.linear - 2.0 * row
    return out


def qubo_to_quso(m):
    """Substitute x_i = (1 - z_i)/2; inverse of quso_to_qubo."""
    out = QusoModel(m.n)
    row = np.zeros(m.n)
    qsum = 0.0
    for (i, j), c in m.quadratic.items():
        row[i] += c
        row[j] += c
        qsum += c
        out.quadratic[(i, j)] = c / 4.0
    out.offset = m.offset + 0.5 * float(m.linear.sum()) + qsum / 4.0
    out.linear = -0.5 * m.linear - 0.25 * row
    return out


def quso_to_maxcut(m):
    """Graph on n+1 vertices: spin i -> vertex i+1, ancilla -> vertex 0.

    Edge weights: (0, i+1) -> 2*linear_i, (i+1, j+1) -> 2*quadratic_ij;
    zero-weight edges are omitted.
    """
    weights = {}
    for i, li in enumerate(m.linear):
        if li != 0.0:
            weights[(0, i + 1)] = 2.0 * li
    for (i, j), c in m.quadratic.items():
        weights[(i + 1, j + 1)] = 2.0 * c
    value_offset = m.offset + float(m.linear.sum()) + sum(m.quadratic.values())
    return MaxCutInstance(m.n + 1, weights, ancilla=0, value_offset=value_offset)


def recover_state(assignment, ancilla=0):
    """Fock state from a MaxCut +-1 assignment that includes the ancilla.

    Assignments in the flipped sector (z_ancilla = -1) are globally negated
    first; then the ancilla is stripped and z = -1 maps to occupied.
    """
    z = np.asarray(assignment, dtype=np.int64).copy()
    if z[ancilla] == -1:
        z = -z
    z = np.delete(z, ancilla)
    return FockState(spins_to_bits(z))


def rosenberg_quadratize(p, weight=None):
    """Reduce a binary polynomial to a quadratic via repeated pair substitution.

    Each round picks the variable pair occurring in the most terms of degree
    three or more, replaces it by a fresh auxiliary x_a and adds the penalty
    weight * (x_i x_j - 2 x_i x_a - 2 x_j x_a + 3 x_a), which is zero exactly
    when x_a = x_i x_j.  Returns (QuboModel, number of auxiliaries); the
    minimum over auxiliaries reproduces the original value on every
    assignment.
    """
    terms = dict(p.terms)
    n_total = p.n
    n_aux = 0
    if weight is None:
        weight = 1.0 + sum(abs(c) for c in terms.values())

    while max((len(k) for k in terms), default=0) > 2:
        counts = {}
        for key in terms:
            if len(key) < 3:
                continue
            for a in range(len(key)):
                for b in range(a + 1, len(key)):
                    pair = (key[a], key[b])
                    counts[pair] = counts.get(pair, 0) + 1
        pair = min(sorted(counts), key=lambda k: -counts[k])
        i, j = pair
        aux = n_total
        n_total += 1
        n_aux += 1
        replaced = {}
        for key, c in terms.items():
            if len(key) >= 3 and i in key and j in key:
                new_key = tuple(sorted((set(key) - {i, j}) | {aux}))
                replaced[new_key] = replaced.get(new_key, 0.0) + c
            else:
                replaced[key] = replaced.get(key, 0.0) + c
        for key, c in (
            ((i, j), weight),
            ((i, aux), -2.0 * weight),
            ((j, aux), -2.0 * weight),
            ((aux,), 3.0 * weight),
        ):
            replaced[key] = replaced.get(key, 0.0) + c
        terms = {k: v for k, v in replaced.items() if v != 0.0}

    out = QuboModel(n_total)
    for key, c in terms.items():
        if len(key) == 0:
            out.offset += c
        elif len(key) == 1:
            out.linear[key[0]] += c
        else:
            out.add_quadratic(key[0], key[1], c)
    return out, n_aux


def pubo_from_quso(m):
    """QUSO -> binary polynomial (used to quadratize squared penalties)."""
    qubo = quso_to_qubo(m)
    p = PuboModel(m.n)
    if qubo.offset:
        p.add_term((), qubo.offset)
    for i, c in enumerate(qubo.linear):
        if c:
            p.add_term((i,), c)
    for (i, j), c in qubo.quadratic.items():
        p.add_term((i, j), c)
    return p


def export_xorsat(m, path):
    """Write the MaxCut instance as weighted MAX-2-XORSAT clauses.

    One clause per edge: "i j rhs weight" with rhs 1 for positive weights
    and 0 for negative ones; the header records the vertex count, clause
    count and value offset.
    """
    if not isinstance(m, MaxCutInstance):
        raise IoFailure("xorsat export needs a MaxCut instance")
    lines = [
        f"# xorsat-1 vertices={m.n_vertices} clauses={m.n_edges} offset={m.value_offset!r}"
    ]
    for (i, j), w in sorted(m.weights.items()):
        rhs = 1 if w > 0 else 0
        lines.append(f"{i} {j} {rhs} {_fmt(abs(w))}")
    _write_text(path, "\n".join(lines) + "\n")
