"""Gaussian integrals over contracted s/p/d shells (McMurchie-Davidson).

Cartesian primitive integrals are assembled from Hermite expansion
coefficients and Hermite Coulomb tensors; d shells are contracted to the
five real solid-harmonic combinations and every AO is rescaled to unit
self-overlap at the end, which makes the result independent of primitive
normalization conventions.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

CART_COMPONENTS = {
    0: [(0, 0, 0)],
    1: [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    2: [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)],
}

# rows: m = -2..2 solid-harmonic combinations over [xx, xy, xz, yy, yz, zz];
# overall scale is irrelevant because AOs are renormalized afterwards
C2S = {
    0: np.array([[1.0]]),
    1: np.eye(3),
    2: np.array(
        [
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],   # xy
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],   # yz
            [-1.0, 0.0, 0.0, -1.0, 0.0, 2.0],  # 3z^2 - r^2
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],   # xz
            [1.0, 0.0, 0.0, -1.0, 0.0, 0.0],  # x^2 - y^2
        ]
    ),
}

_DOUBLE_FACTORIAL = {0: 1.0, 1: 1.0, 2: 3.0}  # (2l-1)!! for l = 0, 1, 2


def primitive_norm(l, exponent):
    """Normalization of an (l,0,0)-type Cartesian primitive."""
    return (
        (2.0 * exponent / np.pi) ** 0.75
        * (4.0 * exponent) ** (l / 2.0)
        / np.sqrt(_DOUBLE_FACTORIAL[l])
    )


@dataclass
class Shell:
    l: int
    center: np.ndarray
    exps: np.ndarray
    coefs: np.ndarray  # file coefficients times primitive norms
    atom: int

    @property
    def n_cart(self):
        return len(CART_COMPONENTS[self.l])

    @property
    def n_sph(self):
        return 2 * self.l + 1


def build_shells(atoms, basis_name):
    """atoms: list of (element, xyz_bohr).  Returns the shell list."""
    from .basis import shells_for

    shells = []
    for atom_index, (element, xyz) in enumerate(atoms):
        for l, exps, coefs in shells_for(element, basis_name):
            exps = np.asarray(exps, dtype=float)
            coefs = np.asarray(coefs, dtype=float) * primitive_norm(l, exps)
            shells.append(Shell(l, np.asarray(xyz, dtype=float), exps, coefs, atom_index))
    return shells


def boys(n_max, t):
    """F_n(t) for n = 0..n_max, vectorized over t; downward recursion from
    the confluent hypergeometric form of F_{n_max}."""
    t = np.asarray(t, dtype=float)
    out = np.empty((n_max + 1,) + t.shape)
    out[n_max] = hyp1f1(n_max + 0.5, n_max + 1.5, -t) / (2.0 * n_max + 1.0)
    if n_max:
        exp_t = np.exp(-t)
        for n in range(n_max - 1, -1, -1):
            out[n] = (2.0 * t * out[n + 1] + exp_t) / (2.0 * n + 1.0)
    return out


def hermite_e(la, lb, a, b, ab_delta):
    """Hermite expansion coefficients E[t, i, j] for one Cartesian direction,
    vectorized over primitive pairs.

    a, b: (n,) exponents; ab_delta: (n,) A_x - B_x.  Shape of the result:
    (n, la+1, lb+1, la+lb+1).
    """
    n = a.shape[0]
    p = a + b
    q = a * b / p
    x_pa = -(b / p) * ab_delta
    x_pb = (a / p) * ab_delta
    e = np.zeros((n, la + 1, lb + 1, la + lb + 1))
    e[:, 0, 0, 0] = np.exp(-q * ab_delta**2)
    inv2p = 0.5 / p
    for i in range(la):
        for t in range(i + 2):
            term = x_pa * e[:, i, 0, t]
            if t > 0:
                term = term + inv2p * e[:, i, 0, t - 1]
            if t + 1 <= i:
                term = term + (t + 1) * e[:, i, 0, t + 1]
            e[:, i + 1, 0, t] = term
    for j in range(lb):
        for i in range(la + 1):
            for t in range(i + j + 2):
                term = x_pb * e[:, i, j, t]
                if t > 0:
                    term = term + inv2p * e[:, i, j, t - 1]
                if t + 1 <= i + j:
                    term = term + (t + 1) * e[:, i, j, t + 1]
                e[:, i, j + 1, t] = term
    return e


def hermite_r(l_total, p, pc):
    """Hermite Coulomb tensor R[t, u, v] for t+u+v <= l_total, vectorized
    over the leading batch axis of p (exponents) and pc (P - C vectors)."""
    t_arg = p * np.sum(pc * pc, axis=-1)
    f = boys(l_total, t_arg)
    shape = p.shape
    L = l_total + 1
    r = np.zeros((L, L, L, L) + shape)  # [n, t, u, v, batch]
    factor = np.ones(shape)
    for n in range(L):
        r[n, 0, 0, 0] = factor * f[n]
        factor = factor * (-2.0 * p)
    x, y, z = pc[..., 0], pc[..., 1], pc[..., 2]
    for t in range(l_total):
        for n in range(l_total - t):
            r[n, t + 1, 0, 0] = x * r[n + 1, t, 0, 0]
            if t > 0:
                r[n, t + 1, 0, 0] += t * r[n + 1, t - 1, 0, 0]
    for u in range(l_total):
        for n in range(l_total - u):
            for t in range(l_total - n - u):
                r[n, t, u + 1, 0] = y * r[n + 1, t, u, 0]
                if u > 0:
                    r[n, t, u + 1, 0] += u * r[n + 1, t, u - 1, 0]
    for v in range(l_total):
        for n in range(l_total - v):
            for t in range(l_total - n - v):
                for u in range(l_total - n - v - t):
                    r[n, t, u, v + 1] = z * r[n + 1, t, u, v]
                    if v > 0:
                        r[n, t, u, v + 1] += v * r[n + 1, t, u, v - 1]
    return r[0]


class _PairData:
    """Primitive-pair quantities for one shell pair."""

    def __init__(self, sa, sb, extra=0):
        a = np.repeat(sa.exps, sb.exps.size)
        b = np.tile(sb.exps, sa.exps.size)
        self.weights = np.repeat(sa.coefs, sb.coefs.size) * np.tile(sb.coefs, sa.coefs.size)
        self.p = a + b
        self.centers = (a[:, None] * sa.center + b[:, None] * sb.center) / self.p[:, None]
        self.b = b
        delta = sa.center - sb.center
        la, lb = sa.l + extra, sb.l + extra
        self.e = [hermite_e(la, lb, a, b, np.full_like(a, delta[d])) for d in range(3)]


def _cart_pairs(sa, sb):
    for ca, comp_a in enumerate(CART_COMPONENTS[sa.l]):
        for cb, comp_b in enumerate(CART_COMPONENTS[sb.l]):
            yield ca, comp_a, cb, comp_b


def overlap_kinetic_block(sa, sb):
    pair = _PairData(sa, sb, extra=2)
    pref = (np.pi / pair.p) ** 1.5 * pair.weights
    b = pair.b
    s_block = np.zeros((sa.n_cart, sb.n_cart))
    t_block = np.zeros_like(s_block)
    for ca, comp_a, cb, comp_b in _cart_pairs(sa, sb):
        s_dir = [pair.e[d][:, comp_a[d], comp_b[d], 0] for d in range(3)]

        def t_dir(d):
            i, j = comp_a[d], comp_b[d]
            val = -2.0 * b**2 * pair.e[d][:, i, j + 2, 0] + b * (2 * j + 1) * s_dir[d]
            if j >= 2:
                val = val - 0.5 * j * (j - 1) * pair.e[d][:, i, j - 2, 0]
            return val

        s_block[ca, cb] = np.sum(pref * s_dir[0] * s_dir[1] * s_dir[2])
        t_block[ca, cb] = np.sum(
            pref
            * (
                t_dir(0) * s_dir[1] * s_dir[2]
                + s_dir[0] * t_dir(1) * s_dir[2]
                + s_dir[0] * s_dir[1] * t_dir(2)
            )
        )
    return s_block, t_block


def nuclear_block(sa, sb, atoms, charges):
    pair = _PairData(sa, sb)
    l_total = sa.l + sb.l
    pref = 2.0 * np.pi / pair.p * pair.weights
    block = np.zeros((sa.n_cart, sb.n_cart))
    for xyz, charge in zip(atoms, charges):
        r = hermite_r(l_total, pair.p, pair.centers - xyz)
        for ca, comp_a, cb, comp_b in _cart_pairs(sa, sb):
            acc = np.zeros_like(pair.p)
            for t in range(comp_a[0] + comp_b[0] + 1):
                ex = pair.e[0][:, comp_a[0], comp_b[0], t]
                for u in range(comp_a[1] + comp_b[1] + 1):
                    ey = pair.e[1][:, comp_a[1], comp_b[1], u]
                    for v in range(comp_a[2] + comp_b[2] + 1):
                        acc += ex * ey * pair.e[2][:, comp_a[2], comp_b[2], v] * r[t, u, v]
            block[ca, cb] += -charge * np.sum(pref * acc)
    return block


def eri_quartet(sa, sb, sc, sd):
    bra = _PairData(sa, sb)
    ket = _PairData(sc, sd)
    l_bra = sa.l + sb.l
    l_ket = sc.l + sd.l
    l_total = l_bra + l_ket

    p = bra.p[:, None]
    q = ket.p[None, :]
    alpha = p * q / (p + q)
    pq = bra.centers[:, None, :] - ket.centers[None, :, :]
    r = hermite_r(l_total, alpha, pq)  # [t, u, v, nb, nk]
    pref = (
        2.0 * np.pi**2.5
        / (p * q * np.sqrt(p + q))
        * bra.weights[:, None]
        * ket.weights[None, :]
    )

    out = np.zeros((sa.n_cart, sb.n_cart, sc.n_cart, sd.n_cart))
    nb, nk = bra.p.size, ket.p.size
    for cc, comp_c, cd, comp_d in _cart_pairs(sc, sd):
        lx, ly, lz = (comp_c[d] + comp_d[d] for d in range(3))
        mid = np.zeros((l_bra + 1, l_bra + 1, l_bra + 1, nb, nk))
        for tau in range(lx + 1):
            e_x = ket.e[0][:, comp_c[0], comp_d[0], tau]
            for nu in range(ly + 1):
                e_y = ket.e[1][:, comp_c[1], comp_d[1], nu]
                for phi in range(lz + 1):
                    coef = ((-1.0) ** (tau + nu + phi)) * (
                        e_x * e_y * ket.e[2][:, comp_c[2], comp_d[2], phi]
                    )
                    mid += (
                        coef[None, None, None, None, :]
                        * r[tau : tau + l_bra + 1, nu : nu + l_bra + 1, phi : phi + l_bra + 1]
                    )
        for ca, comp_a, cb, comp_b in _cart_pairs(sa, sb):
            acc = np.zeros((nb, nk))
            for t in range(comp_a[0] + comp_b[0] + 1):
                e_x = bra.e[0][:, comp_a[0], comp_b[0], t]
                for u in range(comp_a[1] + comp_b[1] + 1):
                    e_y = bra.e[1][:, comp_a[1], comp_b[1], u]
                    for v in range(comp_a[2] + comp_b[2] + 1):
                        coef = e_x * e_y * bra.e[2][:, comp_a[2], comp_b[2], v]
                        acc += coef[:, None] * mid[t, u, v]
            out[ca, cb, cc, cd] = np.sum(pref * acc)
    return out


def assemble_integrals(elements, coords_bohr, basis_name):
    """Full integral set over unit-normalized spherical AOs.

    Returns dict with n_ao, overlap, kinetic, nuclear, hcore, eri, plus the
    shell list and per-AO atom indices.
    """
    from .basis import ATOMIC_NUMBERS

    atoms = [np.asarray(x, dtype=float) for x in coords_bohr]
    charges = [float(ATOMIC_NUMBERS[el]) for el in elements]
    shells = build_shells(list(zip(elements, atoms)), basis_name)

    offsets = []
    n_ao = 0
    for shell in shells:
        offsets.append(n_ao)
        n_ao += shell.n_sph

    s = np.zeros((n_ao, n_ao))
    t = np.zeros((n_ao, n_ao))
    v = np.zeros((n_ao, n_ao))
    for ia, sa in enumerate(shells):
        for ib, sb in enumerate(shells[: ia + 1]):
            s_cart, t_cart = overlap_kinetic_block(sa, sb)
            v_cart = nuclear_block(sa, sb, atoms, charges)
            ca, cb = C2S[sa.l], C2S[sb.l]
            for mat, cart in ((s, s_cart), (t, t_cart), (v, v_cart)):
                block = ca @ cart @ cb.T
                mat[offsets[ia]:offsets[ia] + sa.n_sph, offsets[ib]:offsets[ib] + sb.n_sph] = block
                mat[offsets[ib]:offsets[ib] + sb.n_sph, offsets[ia]:offsets[ia] + sa.n_sph] = block.T

    eri = np.zeros((n_ao, n_ao, n_ao, n_ao))
    n_shells = len(shells)
    pair_list = [(i, j) for i in range(n_shells) for j in range(i + 1)]
    for pi, (i, j) in enumerate(pair_list):
        for k, l in pair_list[: pi + 1]:
            block = eri_quartet(shells[i], shells[j], shells[k], shells[l])
            block = np.einsum("pa,qb,rc,sd,abcd->pqrs", C2S[shells[i].l], C2S[shells[j].l],
                              C2S[shells[k].l], C2S[shells[l].l], block)
            _scatter_eri(eri, block, offsets, shells, i, j, k, l)

    scale = 1.0 / np.sqrt(np.diag(s))
    s = s * scale[:, None] * scale[None, :]
    t = t * scale[:, None] * scale[None, :]
    v = v * scale[:, None] * scale[None, :]
    eri = np.einsum("i,j,k,l,ijkl->ijkl", scale, scale, scale, scale, eri)

    ao_atoms = np.concatenate(
        [np.full(shell.n_sph, shell.atom, dtype=int) for shell in shells]
    )
    return {
        "n_ao": n_ao,
        "overlap": s,
        "kinetic": t,
        "nuclear": v,
        "hcore": t + v,
        "eri": eri,
        "shells": shells,
        "ao_atoms": ao_atoms,
    }


def _scatter_eri(eri, block, offsets, shells, i, j, k, l):
    """Write one canonical shell-quartet block and its 8-fold images."""
    si = slice(offsets[i], offsets[i] + shells[i].n_sph)
    sj = slice(offsets[j], offsets[j] + shells[j].n_sph)
    sk = slice(offsets[k], offsets[k] + shells[k].n_sph)
    sl = slice(offsets[l], offsets[l] + shells[l].n_sph)
    eri[si, sj, sk, sl] = block
    eri[sj, si, sk, sl] = block.transpose(1, 0, 2, 3)
    eri[si, sj, sl, sk] = block.transpose(0, 1, 3, 2)
    eri[sj, si, sl, sk] = block.transpose(1, 0, 3, 2)
    eri[sk, sl, si, sj] = block.transpose(2, 3, 0, 1)
    eri[sl, sk, si, sj] = block.transpose(3, 2, 0, 1)
    eri[sk, sl, sj, si] = block.transpose(2, 3, 1, 0)
    eri[sl, sk, sj, si] = block.transpose(3, 2, 1, 0)


def nuclear_repulsion(elements, coords_bohr):
    from .basis import ATOMIC_NUMBERS

    charges = [float(ATOMIC_NUMBERS[el]) for el in elements]
    e = 0.0
    for i in range(len(elements)):
        for j in range(i):
            e += charges[i] * charges[j] / np.linalg.norm(
                np.asarray(coords_bohr[i]) - np.asarray(coords_bohr[j])
            )
    return e
