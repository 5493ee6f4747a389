"""Determinant-basis exact diagonalization (direct CI).

The sigma vector is built with per-spin single-excitation link tables and the
one-electron part absorbed into an effective two-electron tensor.  Internally
strings use the alpha-block/beta-block operator ordering; results are converted
to the package-wide interleaved spin-orbital convention through a diagonal
+-1 gauge, so callers only ever see interleaved-convention vectors.
"""
from __future__ import annotations

import numpy as np

from .determinants import Determinant, orbital_list, orbital_strings, sector_basis
from .exceptions import DimensionCapError, EigensolverError

DENSE_CUTOFF = 2000
DIM_CAP = 10 ** 6


def link_table(strs: list[int], norb: int):
    """Flat arrays (I, a, i, J, sign) with a+_a a_i |I> = sign |J| per spin."""
    index = {m: k for k, m in enumerate(strs)}
    tI, ta, ti, tJ, ts = [], [], [], [], []
    for I, m in enumerate(strs):
        occ = orbital_list(m)
        vir = [p for p in range(norb) if not m & (1 << p)]
        for i in occ:
            tI.append(I); ta.append(i); ti.append(i); tJ.append(I); ts.append(1)
        for i in occ:
            for a in vir:
                lo, hi = (i, a) if i < a else (a, i)
                between = m & (((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1))
                sign = -1 if between.bit_count() % 2 else 1
                J = index[m ^ (1 << i) | (1 << a)]
                tI.append(I); ta.append(a); ti.append(i); tJ.append(J); ts.append(sign)
    return (np.asarray(tI), np.asarray(ta), np.asarray(ti), np.asarray(tJ),
            np.asarray(ts, dtype=np.float64))


def absorb_h1e(h1e, eri, norb, nelec):
    """Fold h1 into the two-electron tensor so one contraction pass suffices."""
    h2e = np.array(eri, dtype=np.float64, copy=True)
    f1e = h1e - np.einsum("jiik->jk", h2e) * 0.5
    f1e = f1e * (1.0 / max(nelec, 1))
    for k in range(norb):
        h2e[k, k, :, :] += f1e
        h2e[:, :, k, k] += f1e
    return h2e * 0.5


def gauge_vector(strs_a, strs_b) -> np.ndarray:
    """(-1)^inversions converting block ordering to interleaved ordering."""
    na, nb = len(strs_a), len(strs_b)
    a_arr = np.asarray(strs_a, dtype=np.int64)
    g = np.zeros((na, nb))
    for ib, bm in enumerate(strs_b):
        count = np.zeros(na, dtype=np.int64)
        for m in orbital_list(bm):
            shifted = a_arr >> (m + 1)
            # popcount of each alpha string above orbital m
            count += np.array([int(x).bit_count() for x in shifted])
        g[:, ib] = np.where(count % 2, -1.0, 1.0)
    return g


class SectorHamiltonian:
    """H restricted to a fixed (na, nb) particle sector of norb orbitals."""

    def __init__(self, h1e, eri, norb, na, nb, dim_cap=DIM_CAP):
        self.norb = norb
        self.na, self.nb = na, nb
        self.strs_a = orbital_strings(norb, na)
        self.strs_b = orbital_strings(norb, nb)
        self.dim = len(self.strs_a) * len(self.strs_b)
        if self.dim > dim_cap:
            raise DimensionCapError(
                f"determinant basis of size {self.dim} exceeds cap {dim_cap}")
        self.h1e = np.asarray(h1e, dtype=np.float64)
        self.eri = np.asarray(eri, dtype=np.float64)
        self.h2e = absorb_h1e(self.h1e, self.eri, norb, na + nb)
        self.link_a = link_table(self.strs_a, norb)
        self.link_b = link_table(self.strs_b, norb)
        self.gauge = gauge_vector(self.strs_a, self.strs_b)
        self.basis = sector_basis(norb, na, nb)

    # -- block-convention sigma --------------------------------------------
    def _apply_e(self, c):
        """t[p,q] = E_pq applied to c for all (p, q); c shape (na, nb, m)."""
        norb = self.norb
        na, nb, m = c.shape
        t = np.zeros((norb, norb, na, nb, m))
        aI, aa, ai, aJ, asg = self.link_a
        np.add.at(t, (aa, ai, aJ), asg[:, None, None] * c[aI])
        bI, ba, bi, bJ, bsg = self.link_b
        ct = np.ascontiguousarray(c.transpose(1, 0, 2))
        tb = np.zeros((norb, norb, nb, na, m))
        np.add.at(tb, (ba, bi, bJ), bsg[:, None, None] * ct[bI])
        t += tb.transpose(0, 1, 3, 2, 4)
        return t

    def _sigma_block(self, c):
        """H @ c in block convention; c shape (na, nb) or (na, nb, m)."""
        single = c.ndim == 2
        if single:
            c = c[:, :, None]
        na, nb, m = c.shape
        t = self._apply_e(c)
        t = np.tensordot(self.h2e.reshape(self.norb ** 2, -1),
                         t.reshape(self.norb ** 2, -1), axes=([1], [0]))
        t = t.reshape(self.norb, self.norb, na, nb, m)
        out = np.zeros_like(c)
        aI, aa, ai, aJ, asg = self.link_a
        np.add.at(out, (aJ,), asg[:, None, None] * t[aa, ai, aI])
        bI, ba, bi, bJ, bsg = self.link_b
        outt = np.zeros((nb, na, m))
        ctt = t.transpose(0, 1, 3, 2, 4)
        np.add.at(outt, (bJ,), bsg[:, None, None] * ctt[ba, bi, bI])
        out += outt.transpose(1, 0, 2)
        return out[:, :, 0] if single else out

    # -- interleaved-convention interface ----------------------------------
    def matvec(self, v: np.ndarray) -> np.ndarray:
        c = (v.reshape(len(self.strs_a), len(self.strs_b)) * self.gauge)
        s = self._sigma_block(c) * self.gauge
        return s.reshape(-1)

    def diagonal(self) -> np.ndarray:
        """<D|H|D> for every sector determinant (gauge-free)."""
        occ_a = np.array([[1.0 if m & (1 << p) else 0.0 for p in range(self.norb)]
                          for m in self.strs_a])
        occ_b = np.array([[1.0 if m & (1 << p) else 0.0 for p in range(self.norb)]
                          for m in self.strs_b])
        hdiag = np.diag(self.h1e)
        jmat = np.einsum("ppqq->pq", self.eri)
        kmat = np.einsum("pqqp->pq", self.eri)
        na, nb = len(self.strs_a), len(self.strs_b)
        one = occ_a @ hdiag
        e1 = one[:, None] + (occ_b @ hdiag)[None, :]
        ja = np.einsum("ip,pq,jq->ij", occ_a, jmat, occ_a)
        jb = np.einsum("ip,pq,jq->ij", occ_b, jmat, occ_b)
        jab = np.einsum("ip,pq,jq->ij", occ_a, jmat, occ_b)
        ka = np.einsum("ip,pq,iq->i", occ_a, kmat, occ_a)
        kb = np.einsum("ip,pq,iq->i", occ_b, kmat, occ_b)
        coul = 0.5 * (np.diag(ja)[:, None] + np.diag(jb)[None, :] + 2.0 * jab)
        exch = 0.5 * (ka[:, None] + kb[None, :])
        return (e1 + coul - exch).reshape(-1)

    def dense(self) -> np.ndarray:
        """Dense H in the interleaved convention (chunked sigma on identity)."""
        dim = self.dim
        H = np.empty((dim, dim))
        na, nb = len(self.strs_a), len(self.strs_b)
        eye = np.eye(dim)
        chunk = max(1, 2 ** 22 // (self.norb ** 2 * dim))
        for lo in range(0, dim, chunk):
            hi = min(dim, lo + chunk)
            cols = (eye[:, lo:hi].reshape(na, nb, hi - lo)
                    * self.gauge[:, :, None])
            s = self._sigma_block(cols) * self.gauge[:, :, None]
            H[:, lo:hi] = s.reshape(dim, hi - lo)
        return 0.5 * (H + H.T)

    def expectation(self, v: np.ndarray) -> float:
        return float(np.dot(v, self.matvec(v)))


def davidson(matvec, diag, dim, tol=1e-10, max_iter=200, max_space=30,
             x0=None):
    """Lowest eigenpair of a symmetric operator with diagonal preconditioning."""
    if x0 is None:
        x0 = np.zeros(dim)
        x0[int(np.argmin(diag))] = 1.0
    V = [x0 / np.linalg.norm(x0)]
    AV = [matvec(V[0])]
    theta, y = None, None
    for _ in range(max_iter):
        m = len(V)
        G = np.empty((m, m))
        for i in range(m):
            for j in range(m):
                G[i, j] = np.dot(V[i], AV[j])
        G = 0.5 * (G + G.T)
        w, U = np.linalg.eigh(G)
        theta, y = w[0], U[:, 0]
        x = sum(y[i] * V[i] for i in range(m))
        ax = sum(y[i] * AV[i] for i in range(m))
        r = ax - theta * x
        rnorm = np.linalg.norm(r)
        if rnorm < tol:
            return theta, x / np.linalg.norm(x)
        denom = diag - theta
        denom = np.where(np.abs(denom) < 1e-8, 1e-8, denom)
        d = r / denom
        # restart when the subspace is full
        if m >= max_space:
            V, AV = [x / np.linalg.norm(x)], [ax / np.linalg.norm(x)]
        for v in V:
            d -= np.dot(v, d) * v
        dn = np.linalg.norm(d)
        if dn < 1e-14:
            d = np.random.default_rng(m).standard_normal(dim)
            for v in V:
                d -= np.dot(v, d) * v
            dn = np.linalg.norm(d)
        V.append(d / dn)
        AV.append(matvec(V[-1]))
    raise EigensolverError(
        f"Davidson did not reach residual {tol} in {max_iter} iterations")


def ground_state(h1e, eri, norb, na, nb, dim_cap=DIM_CAP,
                 dense_cutoff=DENSE_CUTOFF):
    """Lowest eigenpair in the (na, nb) sector, interleaved convention.

    Returns (energy, amplitude vector, determinant basis).
    """
    ham = SectorHamiltonian(h1e, eri, norb, na, nb, dim_cap=dim_cap)
    if ham.dim <= dense_cutoff:
        H = ham.dense()
        w, U = np.linalg.eigh(H)
        e, v = float(w[0]), U[:, 0]
    else:
        e, v = davidson(ham.matvec, ham.diagonal(), ham.dim)
        e = float(e)
    # fix the arbitrary eigenvector sign: largest-magnitude entry positive
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    return e, v, ham.basis
