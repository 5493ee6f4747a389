"""Brute-force reference implementations used only to check the fast paths.

Everything here applies second-quantized operators directly to spin-orbital
bitmasks in the interleaved convention; no link tables, no einsum tricks.
"""
import numpy as np

from qctcc.determinants import (Determinant, annihilate, create, from_spinmask,
                                sector_basis, to_spinmask)


def apply_ops(mask, ops):
    """ops = [(so, True=create/False=annihilate), ...], applied right-to-left."""
    sign = 1
    for so, is_cre in reversed(ops):
        res = create(mask, so) if is_cre else annihilate(mask, so)
        if res is None:
            return None, 0
        mask, s = res
        sign *= s
    return mask, sign


def dense_hamiltonian(h1, eri, norb, basis):
    """<I|H|J> by raw operator application; eri in chemists' notation."""
    index = {to_spinmask(d): k for k, d in enumerate(basis)}
    dim = len(basis)
    H = np.zeros((dim, dim))
    nso = 2 * norb
    for J, det in enumerate(basis):
        mask = to_spinmask(det)
        for P in range(nso):
            for Q in range(nso):
                if P % 2 != Q % 2:
                    continue
                m, s = apply_ops(mask, [(P, True), (Q, False)])
                if s and m in index:
                    H[index[m], J] += s * h1[P // 2, Q // 2]
        for P in range(nso):
            for Q in range(nso):
                if P % 2 != Q % 2:
                    continue
                for R in range(nso):
                    for S in range(nso):
                        if R % 2 != S % 2:
                            continue
                        m, s = apply_ops(
                            mask, [(P, True), (R, True), (S, False), (Q, False)])
                        if s and m in index:
                            H[index[m], J] += 0.5 * s * eri[P // 2, Q // 2, R // 2, S // 2]
    return H


def hf_energy(h1, eri, nocc):
    """Restricted HF energy (no core constant) from spatial integrals."""
    occ = range(nocc)
    e = 2.0 * sum(h1[i, i] for i in occ)
    for i in occ:
        for j in occ:
            e += 2.0 * eri[i, i, j, j] - eri[i, j, j, i]
    return e


def apply_cluster(psi, t1, t2, occ, vir):
    """One application of T = T1 + T2 to {spinmask: coeff}."""
    out = {}

    def add(m, v):
        if v:
            out[m] = out.get(m, 0.0) + v

    for mask, c in psi.items():
        for i, si in enumerate(occ):
            for a, sa in enumerate(vir):
                m, s = apply_ops(mask, [(sa, True), (si, False)])
                if s:
                    add(m, c * s * t1[i, a])
        for i, si in enumerate(occ):
            for j, sj in enumerate(occ):
                if si == sj:
                    continue
                for a, sa in enumerate(vir):
                    for b, sb in enumerate(vir):
                        if sa == sb:
                            continue
                        m, s = apply_ops(
                            mask, [(sa, True), (sb, True), (sj, False), (si, False)])
                        if s:
                            add(m, 0.25 * c * s * t2[i, j, a, b])
    return out


def exp_cluster(ref_mask, t1, t2, occ, vir, max_power=8):
    """e^T |ref> as {spinmask: coeff}."""
    term = {ref_mask: 1.0}
    full = {ref_mask: 1.0}
    fact = 1.0
    for k in range(1, max_power + 1):
        term = apply_cluster(term, t1, t2, occ, vir)
        if not term:
            break
        fact *= k
        for m, v in term.items():
            full[m] = full.get(m, 0.0) + v / fact
    return full


def triples_energy_loops(f, g, no, nv, t1, t2):
    """Perturbative triples by explicit i<j<k, a<b<c loops."""
    eps = np.diag(f)

    def conn(p, q, r, t, u, v):
        x = 0.0
        for e_ in range(nv):
            x += t2[q, r, t, e_] * g[no + e_, p, no + u, no + v]
        for m_ in range(no):
            x -= t2[p, m_, u, v] * g[m_, no + t, q, r]
        return x

    def disc(p, q, r, t, u, v):
        return t1[p, t] * g[q, r, no + u, no + v]

    e = 0.0
    for i in range(no):
        for j in range(i + 1, no):
            for k in range(j + 1, no):
                for a in range(nv):
                    for b in range(a + 1, nv):
                        for c in range(b + 1, nv):
                            d = (eps[i] + eps[j] + eps[k]
                                 - eps[no + a] - eps[no + b] - eps[no + c])
                            wc = wd = 0.0
                            for (p, q, r, sp) in ((i, j, k, 1), (j, i, k, -1),
                                                  (k, j, i, -1)):
                                for (t, u, v, st) in ((a, b, c, 1), (b, a, c, -1),
                                                      (c, b, a, -1)):
                                    wc += sp * st * conn(p, q, r, t, u, v)
                                    wd += sp * st * disc(p, q, r, t, u, v)
                            e += wc * (wc + wd) / d
    return e


def quartiles_sorted(values):
    """Sort-based linear-interpolation quartiles (inclusive method)."""
    x = sorted(float(v) for v in values)
    n = len(x)

    def q(p):
        h = (n - 1) * p
        lo = int(np.floor(h))
        hi = min(lo + 1, n - 1)
        return x[lo] + (h - lo) * (x[hi] - x[lo])

    return q(0.25), q(0.5), q(0.75)
